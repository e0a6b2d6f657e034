#include "bcalc/germ.hpp"

#include <algorithm>
#include <cmath>

namespace bcalc {

const char* truth_name(Truth t) {
  switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::Unknown: return "unknown";
  }
  return "?";
}

const char* grade_name(EvidenceGrade g) {
  return g == EvidenceGrade::Symbolic ? "symbolic" : "numeric";
}

HorizonSchedule HorizonSchedule::defaults() {
  HorizonSchedule s;
  for (int e = 10; e <= 46; e += 4) s.horizons.push_back(1LL << e);
  return s;
}

bool HorizonSchedule::valid() const {
  if (horizons.size() < 2) return false;
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1]) return false;
  return horizons.front() >= 1;
}

namespace {

bool contains_var(const ExprPtr& e, const std::string& var) {
  return free_variables(e).count(var) > 0;
}

// A trig node whose argument stays unbounded after normalization (periodic
// reduction included) marks the germ as oscillatory.
bool detect_oscillatory(const ExprPtr& e, const std::string& var) {
  return std::visit(
      [&](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Neg>) {
          return detect_oscillatory(node.arg, var);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return detect_oscillatory(node.lhs, var) || detect_oscillatory(node.rhs, var);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          if ((node.fn == FnTag::Sin || node.fn == FnTag::Cos) && contains_var(node.arg, var)) {
            auto arg_nf = normalize_germ(node.arg, var);
            bool bounded = false;
            if (arg_nf) {
              auto div = arg_nf->diverges();
              bounded = div && !*div;
            }
            if (!bounded) {
              // Unbounded or unknown argument: oscillatory unless the whole
              // call folds through exact periodicity.
              ExprPtr self = ex::call(node.fn, node.arg);
              if (!normalize_germ(self, var)) return true;
            }
          }
          return detect_oscillatory(node.arg, var);
        } else {
          return false;
        }
      },
      e->node);
}

}  // namespace

Germ Germ::from_expr(ExprPtr body, const std::string& var) {
  std::set<std::string> vars = free_variables(body);
  if (!vars.empty() && (vars.size() > 1 || *vars.begin() != var))
    throw UsageError("germ body must be an expression in '" + var + "'");
  Germ g;
  if (var != "n") body = substitute(body, var, ex::var("n"));
  g.body_ = std::move(body);
  g.oscillatory_ = detect_oscillatory(g.body_, "n");
  return g;
}

Germ Germ::from_text(const std::string& text) { return from_expr(parse_expr(text, {"n"}), "n"); }

Germ Germ::zero() { return from_expr(ex::num(0), "n"); }

Germ Germ::with_override(long long index, Scalar value) const {
  Germ g = *this;
  g.overrides_.emplace_back(index, std::move(value));
  return g;
}

long long Germ::max_override_index() const {
  long long m = 0;
  for (const auto& [i, v] : overrides_) m = std::max(m, i);
  return m;
}

Scalar Germ::sample(const Rational& n) const {
  if (!rat_is_integer(n) || n < 1) throw UsageError("germ index must be a positive integer");
  for (const auto& [i, v] : overrides_)
    if (Rational(i) == n) return v;
  return eval_scalar(body_, "n", Scalar(n));
}

std::vector<SamplePoint> sample_germ(const Germ& g, const HorizonSchedule& schedule) {
  std::vector<SamplePoint> out;
  for (long long h : schedule.horizons) {
    for (long long idx : {h, h + 1}) {
      SamplePoint p;
      p.horizon = idx;
      try {
        p.value = g.sample(idx);
      } catch (const NotRepresentable&) {
        p.overflow = true;
      } catch (const DomainError&) {
        // finitely many undefined indices are allowed; skip them
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

namespace {

std::vector<double> valid_window(const std::vector<SamplePoint>& points, int width) {
  std::vector<double> vals;
  for (const auto& p : points)
    if (p.value) vals.push_back(p.value->to_double());
  if (static_cast<int>(vals.size()) > width)
    vals.erase(vals.begin(), vals.end() - width);
  return vals;
}

bool ends_in_overflow(const std::vector<SamplePoint>& points) {
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    if (it->overflow) return true;
    if (it->value) return false;
  }
  return false;
}

}  // namespace

Truth trend_is_null(const std::vector<SamplePoint>& points, int window) {
  if (ends_in_overflow(points)) return Truth::False;
  std::vector<double> w = valid_window(points, window);
  if (w.size() < 3) return Truth::Unknown;
  std::vector<double> m;
  for (double v : w) m.push_back(std::abs(v));
  double last = w.back();
  double mlast = m.back(), mfirst = m.front();

  bool all_tiny = std::all_of(m.begin(), m.end(), [](double x) { return x <= 1e-12; });
  if (all_tiny) return Truth::True;

  double spread = 0;
  for (double v : w) spread = std::max(spread, std::abs(v - last));
  if (spread <= 1e-9 * std::max(1.0, std::abs(last)))
    return std::abs(last) <= 1e-9 ? Truth::True : Truth::False;

  bool non_increasing = true, non_decreasing = true, jitter_decay = true;
  for (std::size_t i = 1; i < m.size(); ++i) {
    if (m[i] > m[i - 1]) non_increasing = false;
    if (m[i] < m[i - 1]) non_decreasing = false;
    if (m[i] > 2 * m[i - 1]) jitter_decay = false;
  }
  if (non_increasing && mlast <= mfirst / 4) return Truth::True;
  if (jitter_decay && mlast <= mfirst / 4) return Truth::True;
  if (non_decreasing && mlast >= 1e-6) return Truth::False;
  if (mlast >= 4 * mfirst && mlast >= 1e-6) return Truth::False;
  return Truth::Unknown;
}

std::optional<Ordering> trend_sign(const std::vector<SamplePoint>& points, int window) {
  if (ends_in_overflow(points)) return std::nullopt;
  std::vector<double> w = valid_window(points, window);
  if (w.size() < 3) return std::nullopt;
  bool all_zero = std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; });
  if (all_zero) return Ordering::Equal;
  int sign = w.front() > 0 ? 1 : w.front() < 0 ? -1 : 0;
  if (sign == 0) return std::nullopt;
  for (double v : w)
    if ((v > 0 ? 1 : v < 0 ? -1 : 0) != sign) return std::nullopt;
  bool non_increasing = true, non_decreasing = true;
  for (std::size_t i = 1; i < w.size(); ++i) {
    double a = std::abs(w[i - 1]), b = std::abs(w[i]);
    if (b > a) non_increasing = false;
    if (b < a) non_decreasing = false;
  }
  if (!non_increasing && !non_decreasing) return std::nullopt;
  return sign > 0 ? Ordering::Greater : Ordering::Less;
}

std::optional<Scalar> trend_stabilized(const std::vector<SamplePoint>& points, int window) {
  std::vector<const SamplePoint*> valid;
  for (const auto& p : points)
    if (p.value) valid.push_back(&p);
  if (static_cast<int>(valid.size()) < window) return std::nullopt;
  valid.erase(valid.begin(), valid.end() - window);
  double last = valid.back()->value->to_double();
  for (const auto* p : valid) {
    double v = p->value->to_double();
    if (std::abs(v - last) > 1e-9 * std::max(1.0, std::abs(last))) return std::nullopt;
  }
  return *valid.back()->value;
}

namespace {

std::string horizons_note(const std::vector<SamplePoint>& points) {
  std::string s = "samples:";
  for (const auto& p : points) {
    s += " [" + std::to_string(p.horizon) + "] ";
    if (p.value)
      s += format_double(p.value->to_double());
    else
      s += p.overflow ? "overflow" : "undefined";
  }
  return s;
}

}  // namespace

CompareVerdict germ_compare(const Germ& g1, const Germ& g2, const GermConfig& cfg) {
  ExprPtr diff = ex::sub(g1.body(), g2.body());
  if (auto nf = normalize_germ(diff, "n")) {
    if (auto sign = nf->eventual_sign()) {
      CompareVerdict v;
      v.grade = EvidenceGrade::Symbolic;
      v.order = *sign > 0 ? Ordering::Greater : *sign < 0 ? Ordering::Less : Ordering::Equal;
      v.note = "dominant term of difference: " + nf_to_string(*nf);
      return v;
    }
  }
  // Sampling tier: evidence only. Overridden indices shift the usable window.
  std::vector<SamplePoint> points;
  for (long long h : cfg.schedule.horizons) {
    for (long long idx : {h, h + 1}) {
      SamplePoint p;
      p.horizon = idx;
      try {
        Scalar a = g1.sample(idx);
        Scalar b = g2.sample(idx);
        p.value = a - b;
      } catch (const NotRepresentable&) {
        p.overflow = true;
      } catch (const DomainError&) {
      }
      points.push_back(std::move(p));
    }
  }
  CompareVerdict v;
  v.grade = EvidenceGrade::Numeric;
  v.order = trend_sign(points, 8);
  v.note = horizons_note(points);
  return v;
}

BoolVerdict germ_is_null(const Germ& g, const GermConfig& cfg) {
  if (auto nf = normalize_germ(g.body(), "n")) {
    if (auto z = nf->tends_to_zero()) {
      BoolVerdict v;
      v.value = *z ? Truth::True : Truth::False;
      v.grade = EvidenceGrade::Symbolic;
      v.note = "dominance normal form: " + nf_to_string(*nf);
      return v;
    }
  }
  std::vector<SamplePoint> points = sample_germ(g, cfg.schedule);
  BoolVerdict v;
  v.value = trend_is_null(points, 8);
  v.grade = EvidenceGrade::Numeric;
  v.note = horizons_note(points);
  return v;
}

std::string LimitResult::str() const {
  switch (kind) {
    case Kind::Value: return value.str();
    case Kind::PlusInfinity: return "infinity";
    case Kind::MinusInfinity: return "-infinity";
    case Kind::Unknown: return "unknown";
  }
  return "?";
}

LimitResult germ_limit(const Germ& g, const GermConfig& cfg) {
  if (auto nf = normalize_germ(g.body(), "n")) {
    auto div = nf->diverges();
    if (div && *div) {
      auto sign = nf->eventual_sign();
      if (sign) {
        LimitResult r;
        r.kind = *sign > 0 ? LimitResult::Kind::PlusInfinity : LimitResult::Kind::MinusInfinity;
        r.grade = EvidenceGrade::Symbolic;
        return r;
      }
    } else if (div && !*div) {
      if (auto value = nf->finite_limit()) {
        LimitResult r;
        r.kind = LimitResult::Kind::Value;
        r.value = *value;
        r.grade = EvidenceGrade::Symbolic;
        return r;
      }
    }
  }
  std::vector<SamplePoint> points = sample_germ(g, cfg.schedule);
  LimitResult r;
  r.grade = EvidenceGrade::Numeric;
  if (auto v = trend_stabilized(points, 8)) {
    r.kind = LimitResult::Kind::Value;
    r.value = *v;
    return r;
  }
  // Monotone blow-up with a consistent sign reads as a numeric infinity.
  std::vector<double> w = valid_window(points, 8);
  if (ends_in_overflow(points) || (w.size() >= 3 && std::abs(w.back()) > 1e6)) {
    bool growing = w.size() >= 3;
    for (std::size_t i = 1; i < w.size(); ++i)
      if (std::abs(w[i]) < std::abs(w[i - 1])) growing = false;
    int sign = w.empty() ? 0 : (w.back() > 0 ? 1 : w.back() < 0 ? -1 : 0);
    for (double v : w)
      if ((v > 0 ? 1 : -1) != sign) sign = 0;
    if (growing && sign != 0) {
      r.kind = sign > 0 ? LimitResult::Kind::PlusInfinity : LimitResult::Kind::MinusInfinity;
      return r;
    }
  }
  r.kind = LimitResult::Kind::Unknown;
  return r;
}

namespace {

// |f(1/n)| * n^r as a germ.
Germ order_probe(const ExprPtr& body_n, const Rational& r) {
  ExprPtr probe = ex::mul(ex::call(FnTag::Abs, body_n), ex::pow(ex::var("n"), ex::num(r)));
  return Germ::from_expr(probe, "n");
}

}  // namespace

CauchyOrderResult cauchy_order(const ExprPtr& f_of_i, const GermConfig& cfg) {
  std::set<std::string> vars = free_variables(f_of_i);
  std::string var = vars.empty() ? "i" : *vars.begin();
  if (vars.size() > 1) throw UsageError("order expression must have a single variable");
  ExprPtr body_n = substitute(f_of_i, var, ex::div(ex::num(1), ex::var("n")));

  CauchyOrderResult result;
  const Rational tol = Rational(1, 1 << 20);

  auto is_null_at = [&](const Rational& r) {
    return germ_is_null(order_probe(body_n, r), cfg);
  };

  std::optional<Rational> symbolic_order;
  bool symbolic_infinite = false;
  if (auto nf = normalize_germ(body_n, "n")) {
    if (nf->terms.empty()) {
      result.note = "order of the zero germ is undefined";
      return result;
    }
    const NfKey& dom = nf->terms.front().key;
    if (dom.exp_rate < 0) {
      symbolic_infinite = true;
    } else if (dom.exp_rate > 0) {
      result.note = "f grows exponentially as i -> 0+: no finite order";
      return result;
    } else {
      symbolic_order = -dom.n_pow;
    }
  }

  if (symbolic_infinite) {
    BoolVerdict check = is_null_at(cfg.r_max);
    result.kind = CauchyOrderResult::Kind::PlusInfinity;
    result.grade = EvidenceGrade::Symbolic;
    result.note = "null for every tested r up to r_max";
    if (check.value == Truth::False) {
      result.kind = CauchyOrderResult::Kind::Unknown;
      result.note = "dominance and sampling disagree at r_max";
    }
    return result;
  }

  if (symbolic_order && (*symbolic_order < 0 || *symbolic_order > cfg.r_max)) {
    // Outside the bisection window; report the exact dominance answer.
    result.kind = CauchyOrderResult::Kind::Finite;
    result.order = *symbolic_order;
    result.grade = EvidenceGrade::Symbolic;
    result.note = "outside [0, r_max]; dominance only";
    return result;
  }

  // Bisection on [0, r_max]; the invariant is null(lo) && !null(hi).
  BoolVerdict at_zero = is_null_at(Rational(0));
  BoolVerdict at_max = is_null_at(cfg.r_max);
  if (at_max.value == Truth::True) {
    if (symbolic_order) {
      result.kind = CauchyOrderResult::Kind::Unknown;
      result.note = "dominance gives a finite order but sampling is null at r_max";
      return result;
    }
    result.kind = CauchyOrderResult::Kind::PlusInfinity;
    result.grade = EvidenceGrade::Numeric;
    result.note = "null for every tested r up to r_max";
    return result;
  }
  if (at_zero.value == Truth::False && symbolic_order && *symbolic_order == 0) {
    // Appreciable f: the dichotomy point is 0 itself.
    result.kind = CauchyOrderResult::Kind::Finite;
    result.order = Rational(0);
    result.grade = EvidenceGrade::Symbolic;
    result.bisection_width = Rational(0);
  } else if (at_zero.value != Truth::True) {
    result.note = "ratio not null at r = 0: not an infinitesimal of nonnegative order";
    return result;
  } else {
    Rational lo(0), hi = cfg.r_max;
    bool inconsistent = false;
    while (hi - lo > tol) {
      Rational mid = (lo + hi) / 2;
      BoolVerdict p = is_null_at(mid);
      if (p.value == Truth::True) {
        lo = mid;
      } else if (p.value == Truth::False) {
        hi = mid;
      } else {
        inconsistent = true;
        break;
      }
    }
    result.kind = CauchyOrderResult::Kind::Finite;
    result.bisection_width = hi - lo;
    if (symbolic_order) {
      result.order = *symbolic_order;
      result.grade = EvidenceGrade::Symbolic;
      if (*symbolic_order < lo - tol || *symbolic_order > hi + tol) {
        result.kind = CauchyOrderResult::Kind::Unknown;
        result.note = "dominance order and bisection disagree";
        return result;
      }
    } else {
      result.order = (lo + hi) / 2;
      result.grade = EvidenceGrade::Numeric;
      if (inconsistent) result.note = "sampling verdicts inconsistent near the boundary";
    }
  }

  // Regularity: does |f|/i^a itself have a limit at the dichotomy point?
  LimitResult at_order = germ_limit(order_probe(body_n, result.order), cfg);
  result.regular = at_order.kind != LimitResult::Kind::Unknown;
  return result;
}

}  // namespace bcalc
