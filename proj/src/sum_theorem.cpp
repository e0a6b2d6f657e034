#include <algorithm>
#include <cmath>

#include "bcalc/analysis.hpp"

namespace bcalc {

namespace {

constexpr int kMinTerms = 16;
constexpr double kDivergenceBail = 1e12;

struct TailResult {
  double value = 0;       // period-smoothed partial sum
  long long k_stop = 0;
  bool converged = false;
  bool diverged = false;
};

// Adaptive partial sum: K grows until one increment drops below the
// tolerance (evidence the terms died out), then the reported value is the
// mean of the partial sums over one more oscillation period, which cancels
// the leading bounded-oscillation remainder.
template <class TermFn>
TailResult sum_tail(TermFn term, long long k_begin, long long cap, double x_scale, double tol) {
  TailResult r;
  double s = 0;
  long long k = k_begin - 1;
  while (k < cap) {
    ++k;
    double inc;
    try {
      inc = term(k);
    } catch (const CalcError&) {
      continue;  // finitely many undefined indices
    }
    s += inc;
    if (std::abs(s) > kDivergenceBail) {
      r.value = s;
      r.k_stop = k;
      r.diverged = true;
      return r;
    }
    if (k - k_begin + 1 >= kMinTerms && std::abs(inc) < tol) {
      r.converged = true;
      break;
    }
  }
  r.k_stop = k;
  long long period =
      std::clamp(static_cast<long long>(std::ceil(2 * 3.14159265358979323846 /
                                                  std::max(std::abs(x_scale), 1e-9))),
                 32LL, 1000000LL);
  double acc = 0;
  long long count = 0;
  for (long long j = k + 1; j <= k + period; ++j) {
    double inc;
    try {
      inc = term(j);
    } catch (const CalcError&) {
      continue;
    }
    s += inc;
    acc += s;
    ++count;
  }
  r.value = count > 0 ? acc / count : s;
  return r;
}

}  // namespace

SumTheoremReport sum_theorem_diagonal(const ExprPtr& term, const Germ& x_seq,
                                      const SumThmConfig& cfg) {
  std::set<std::string> vars = free_variables(term);
  for (const auto& v : vars)
    if (v != "k" && v != "x")
      throw UsageError("series term must use variables k and x, found '" + v + "'");

  ScalarBackend backend{cfg.precision};
  SumTheoremReport report;

  // Diagonal layer: remainder r_n = sum_{k>n} term(k, x_seq(n)).
  for (long long n : cfg.horizons) {
    DiagonalRow row;
    row.n = n;
    Scalar x_n;
    try {
      x_n = x_seq.sample(n);
    } catch (const CalcError&) {
      report.tail_flagged = true;
      continue;
    }
    row.x = x_n.to_double();
    std::map<std::string, Scalar> binding{{"k", Scalar(Rational(0))}, {"x", x_n}};
    auto term_at = [&](long long k) {
      binding.find("k")->second = Scalar(Rational(k));
      return eval_bindings(term, backend, binding).to_double();
    };
    TailResult tail = sum_tail(term_at, n + 1, n + cfg.cap_multiplier * n, row.x,
                               cfg.tail_tolerance);
    row.remainder = tail.value;
    row.k_stop = tail.k_stop;
    row.converged = tail.converged;
    if (!tail.converged) report.tail_flagged = true;
    report.rows.push_back(row);
  }

  // Nullness of the diagonal sequence (numeric trend; the diagonal is a
  // sampled sequence, not a closed form).
  std::vector<SamplePoint> diag;
  for (const auto& row : report.rows) {
    if (!row.converged) continue;
    SamplePoint p;
    p.horizon = row.n;
    p.value = Scalar::approx(row.remainder, cfg.precision);
    diag.push_back(std::move(p));
  }
  report.diagonal_null = report.tail_flagged ? Truth::Unknown : trend_is_null(diag);

  if (!diag.empty()) {
    double last = diag.back().value->to_double();
    report.diagonal_limit = last;
    if (diag.size() >= 2) {
      long long n1 = diag[diag.size() - 2].horizon;
      long long n2 = diag.back().horizon;
      double prev = diag[diag.size() - 2].value->to_double();
      // One Richardson step kills the O(1/n) drift when horizons double.
      if (n2 == 2 * n1) report.diagonal_limit = 2 * last - prev;
    }
  }

  // Pointwise layer: convergence of the full series at standard grid points.
  std::vector<Rational> grid;
  Rational lo = cfg.domain.lower ? *cfg.domain.lower : Rational(-10);
  Rational hi = cfg.domain.upper ? *cfg.domain.upper : Rational(10);
  for (int i = 1; i <= cfg.grid_size; ++i)
    grid.push_back(lo + (hi - lo) * Rational(i, cfg.grid_size + 1));

  bool all_true = true, any_false = false;
  for (const Rational& x : grid) {
    PointwiseRow prow;
    prow.x = rat_to_double(x);
    std::map<std::string, Scalar> binding{{"k", Scalar(Rational(0))}, {"x", Scalar(x)}};
    auto term_at = [&](long long k) {
      binding.find("k")->second = Scalar(Rational(k));
      return eval_bindings(term, backend, binding).to_double();
    };
    TailResult sum = sum_tail(term_at, 1, 10000000LL, prow.x, cfg.tail_tolerance);
    prow.sum = sum.value;
    if (sum.diverged) {
      prow.converges = Truth::False;
      any_false = true;
    } else if (sum.converged) {
      prow.converges = Truth::True;
    } else {
      prow.converges = Truth::Unknown;
      all_true = false;
    }
    if (prow.converges != Truth::True) all_true = false;
    report.pointwise.push_back(prow);
  }
  report.verdict1821 = any_false ? Truth::False : all_true ? Truth::True : Truth::Unknown;

  // The 1853 "toujours" layer adds the diagonal: remainders must vanish at
  // the infinitesimal point as well.
  if (report.verdict1821 == Truth::False || report.diagonal_null == Truth::False)
    report.verdict1853 = Truth::False;
  else if (report.verdict1821 == Truth::True && report.diagonal_null == Truth::True)
    report.verdict1853 = Truth::True;
  else
    report.verdict1853 = Truth::Unknown;

  if (report.tail_flagged)
    report.note = "some tails hit the adaptive cap; verdicts degraded to unknown";
  return report;
}

}  // namespace bcalc
