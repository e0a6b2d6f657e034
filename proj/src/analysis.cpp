#include "bcalc/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace bcalc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

DomainSpec DomainSpec::parse(const std::string& text) {
  std::string t = trim(text);
  if (t.size() < 3) throw UsageError("bad domain '" + text + "'");
  DomainSpec d;
  char open = t.front(), close = t.back();
  if (open != '(' && open != '[') throw UsageError("domain must start with ( or [");
  if (close != ')' && close != ']') throw UsageError("domain must end with ) or ]");
  d.lower_open = open == '(';
  d.upper_open = close == ')';
  std::string inner = t.substr(1, t.size() - 2);
  std::size_t comma = inner.find(',');
  if (comma == std::string::npos) throw UsageError("domain needs two endpoints");
  std::string lo = trim(inner.substr(0, comma));
  std::string hi = trim(inner.substr(comma + 1));
  auto endpoint = [&](const std::string& s, bool is_lower) -> std::optional<Rational> {
    if (s == "inf" || s == "+inf" || s == "-inf" || s == "infinity" || s == "-infinity") {
      bool neg = s[0] == '-';
      if (is_lower != neg) throw UsageError("infinite endpoint on the wrong side in '" + text + "'");
      return std::nullopt;
    }
    std::optional<Rational> q = rat_from_decimal(s);
    if (!q) {
      // allow simple ratios like 1/2
      std::size_t slash = s.find('/');
      if (slash != std::string::npos) {
        auto n = rat_from_decimal(trim(s.substr(0, slash)));
        auto m = rat_from_decimal(trim(s.substr(slash + 1)));
        if (n && m && *m != 0) return Rational(*n / *m);
      }
      throw UsageError("bad domain endpoint '" + s + "'");
    }
    return q;
  };
  d.lower = endpoint(lo, true);
  d.upper = endpoint(hi, false);
  if (!d.lower) d.lower_open = true;
  if (!d.upper) d.upper_open = true;
  if (d.lower && d.upper && !(*d.lower < *d.upper))
    throw UsageError("domain endpoints must satisfy lower < upper");
  return d;
}

std::string DomainSpec::str() const {
  std::string s = lower_open ? "(" : "[";
  s += lower ? rat_to_string(*lower) : "-inf";
  s += ",";
  s += upper ? rat_to_string(*upper) : "inf";
  s += upper_open ? ")" : "]";
  return s;
}

bool DomainSpec::contains(const Rational& x, bool closure) const {
  if (lower) {
    if (lower_open && !closure ? !(x > *lower) : !(x >= *lower)) return false;
  }
  if (upper) {
    if (upper_open && !closure ? !(x < *upper) : !(x <= *upper)) return false;
  }
  return true;
}

std::string ProbePoint::str() const {
  switch (kind) {
    case Kind::Standard: return "standard:" + rat_to_string(at);
    case Kind::BoundaryInfinitesimal:
      return "boundary:" + rat_to_string(at) + (direction > 0 ? "+" : "-");
    case Kind::InfinitePoint: return direction > 0 ? "infinite:+" : "infinite:-";
  }
  return "?";
}

// ---- derivative as st of the increment quotient ----

DerivativeResult derivative_st(const ExprPtr& e, const std::string& var, const Scalar& x0,
                               const AnalysisConfig& cfg) {
  LcBackend lc{cfg.trunc, cfg.precision};
  LeviCivitaNumber eps = LeviCivitaNumber::eps(cfg.trunc);
  LeviCivitaNumber center = LeviCivitaNumber::constant(x0, cfg.trunc);
  LeviCivitaNumber f0 = eval(e, lc, var, center);

  auto one_sided = [&](int dir) -> Scalar {
    LeviCivitaNumber h = dir > 0 ? eps : lc_neg(eps);
    LeviCivitaNumber fx = eval(e, lc, var, lc_add(center, h));
    LeviCivitaNumber quotient = lc_mul(lc_sub(fx, f0), lc_invert(h));
    if (!quotient.is_finite())
      throw DomainError("increment quotient has negative order (infinite derivative)");
    return lc_standard_part(quotient);
  };

  DerivativeResult r;
  std::optional<Scalar> above, below;
  std::string fail_note;
  try {
    above = one_sided(+1);
  } catch (const CalcError& err) {
    fail_note = err.what();
  }
  try {
    below = one_sided(-1);
  } catch (const CalcError& err) {
    fail_note = err.what();
  }
  r.from_above = above;
  r.from_below = below;
  if (above && below && *above == *below) {
    r.kind = DerivativeResult::Kind::Value;
    r.value = *above;
    return r;
  }
  r.kind = DerivativeResult::Kind::NonDifferentiable;
  if (above && below) {
    r.note = "one-sided quotients disagree: st = " + above->str() + " from above, " +
             below->str() + " from below";
  } else {
    r.note = fail_note.empty() ? "quotient undefined" : fail_note;
  }
  return r;
}

// ---- witness machinery ----

namespace {

bool is_constant_expr(const ExprPtr& e) { return free_variables(e).empty(); }

// Inverts u(x) = w symbolically for the monotone grammar shapes
// {a*x+b, c*x^p, c/x^p, log, exp, sqrt} and their compositions.
std::optional<ExprPtr> invert_around(const ExprPtr& u, const std::string& var,
                                     const ExprPtr& w) {
  if (const auto* v = std::get_if<Expr::Var>(&u->node)) {
    return v->name == var ? std::optional<ExprPtr>(w) : std::nullopt;
  }
  if (const auto* neg = std::get_if<Expr::Neg>(&u->node)) {
    return invert_around(neg->arg, var, ex::neg(w));
  }
  if (const auto* call = std::get_if<Expr::Call>(&u->node)) {
    switch (call->fn) {
      case FnTag::Log: return invert_around(call->arg, var, ex::call(FnTag::Exp, w));
      case FnTag::Exp: return invert_around(call->arg, var, ex::call(FnTag::Log, w));
      case FnTag::Sqrt: return invert_around(call->arg, var, ex::pow(w, ex::num(2)));
      default: return std::nullopt;
    }
  }
  const auto* b = std::get_if<Expr::Binary>(&u->node);
  if (!b) return std::nullopt;
  bool lconst = is_constant_expr(b->lhs);
  bool rconst = is_constant_expr(b->rhs);
  switch (b->op) {
    case BinOp::Add:
      if (lconst) return invert_around(b->rhs, var, ex::sub(w, b->lhs));
      if (rconst) return invert_around(b->lhs, var, ex::sub(w, b->rhs));
      return std::nullopt;
    case BinOp::Sub:
      if (lconst) return invert_around(b->rhs, var, ex::sub(b->lhs, w));
      if (rconst) return invert_around(b->lhs, var, ex::add(w, b->rhs));
      return std::nullopt;
    case BinOp::Mul:
      if (lconst) return invert_around(b->rhs, var, ex::div(w, b->lhs));
      if (rconst) return invert_around(b->lhs, var, ex::div(w, b->rhs));
      return std::nullopt;
    case BinOp::Div:
      if (lconst) return invert_around(b->rhs, var, ex::div(b->lhs, w));
      if (rconst) return invert_around(b->lhs, var, ex::mul(w, b->rhs));
      return std::nullopt;
    case BinOp::Pow: {
      std::optional<Rational> p = try_constant_rational(b->rhs);
      if (!p || *p == 0) return std::nullopt;
      return invert_around(b->lhs, var, ex::pow(w, ex::num(Rational(1) / *p)));
    }
  }
  return std::nullopt;
}

void collect_trig_args(const ExprPtr& e, const std::string& var, std::vector<ExprPtr>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Neg>) {
          collect_trig_args(node.arg, var, out);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_trig_args(node.lhs, var, out);
          collect_trig_args(node.rhs, var, out);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          if ((node.fn == FnTag::Sin || node.fn == FnTag::Cos) &&
              free_variables(node.arg).count(var))
            out.push_back(node.arg);
          collect_trig_args(node.arg, var, out);
        }
      },
      e->node);
}

struct CandidatePair {
  ExprPtr x_n;
  ExprPtr xp_n;
  std::string family;
};

ExprPtr two_pi_n() {
  return ex::mul(ex::num(2), ex::mul(ex::constant(SymConst::Pi), ex::var("n")));
}

ExprPtr approach_body(const ProbePoint& p) {
  switch (p.kind) {
    case ProbePoint::Kind::Standard:
      return ex::num(p.at);
    case ProbePoint::Kind::BoundaryInfinitesimal: {
      ExprPtr step = ex::div(ex::num(1), ex::var("n"));
      return p.direction > 0 ? ex::add(ex::num(p.at), step) : ex::sub(ex::num(p.at), step);
    }
    case ProbePoint::Kind::InfinitePoint:
      return p.direction > 0 ? ex::var("n") : ex::neg(ex::var("n"));
  }
  return ex::var("n");
}

// Oscillation family: for each trig subterm sin/cos(u(x)) whose inner
// argument is unbounded along the approach, walk one quarter period:
// x_n = u^{-1}(2 pi n), x'_n = u^{-1}(2 pi n + pi/2).
std::vector<CandidatePair> oscillation_candidates(const ExprPtr& e, const std::string& var,
                                                  const ProbePoint& p,
                                                  const GermConfig& germ_cfg) {
  std::vector<CandidatePair> out;
  std::vector<ExprPtr> args;
  collect_trig_args(e, var, args);
  for (const ExprPtr& u : args) {
    // Direction of u along the approach path decides the target sign.
    ExprPtr u_along = substitute(u, var, approach_body(p));
    LimitResult lim;
    try {
      lim = germ_limit(Germ::from_expr(u_along, "n"), germ_cfg);
    } catch (const CalcError&) {
      continue;
    }
    int sign;
    if (lim.kind == LimitResult::Kind::PlusInfinity)
      sign = 1;
    else if (lim.kind == LimitResult::Kind::MinusInfinity)
      sign = -1;
    else
      continue;  // bounded inner argument: no oscillation witness here
    ExprPtr w = two_pi_n();
    ExprPtr quarter = ex::div(ex::constant(SymConst::Pi), ex::num(2));
    ExprPtr w0 = sign > 0 ? w : ex::neg(w);
    ExprPtr w1 = sign > 0 ? ex::add(w, quarter) : ex::neg(ex::add(w, quarter));
    std::optional<ExprPtr> x0 = invert_around(u, var, w0);
    std::optional<ExprPtr> x1 = invert_around(u, var, w1);
    if (x0 && x1) out.push_back({*x0, *x1, "oscillation"});
  }
  return out;
}

std::vector<CandidatePair> shift_candidates(const ProbePoint& p) {
  std::vector<CandidatePair> out;
  ExprPtr n = ex::var("n");
  if (p.kind == ProbePoint::Kind::InfinitePoint) {
    ExprPtr base = p.direction > 0 ? n : ex::neg(n);
    ExprPtr s1 = ex::add(n, ex::div(ex::num(1), n));
    ExprPtr s2 = ex::add(n, ex::pow(n, ex::num(Rational(-1, 2))));
    out.push_back({base, p.direction > 0 ? s1 : ex::neg(s1), "infinite-shift"});
    out.push_back({base, p.direction > 0 ? s2 : ex::neg(s2), "infinite-shift"});
  } else if (p.kind == ProbePoint::Kind::BoundaryInfinitesimal) {
    ExprPtr step1 = ex::div(ex::num(1), n);
    ExprPtr step2 = ex::div(ex::num(2), n);
    ExprPtr a = ex::num(p.at);
    if (p.direction > 0)
      out.push_back({ex::add(a, step1), ex::add(a, step2), "boundary-shrink"});
    else
      out.push_back({ex::sub(a, step1), ex::sub(a, step2), "boundary-shrink"});
  }
  return out;
}

// Eventual strict bound check: germ vs a rational constant.
bool eventually_within(const Germ& g, const DomainSpec& dom, const GermConfig& cfg) {
  try {
    if (dom.lower) {
      CompareVerdict v = germ_compare(g, Germ::from_expr(ex::num(*dom.lower), "n"), cfg);
      if (!(v.order == Ordering::Greater)) return false;
    }
    if (dom.upper) {
      CompareVerdict v = germ_compare(g, Germ::from_expr(ex::num(*dom.upper), "n"), cfg);
      if (!(v.order == Ordering::Less)) return false;
    }
  } catch (const CalcError&) {
    return false;
  }
  return true;
}

bool approaches_probe(const Germ& g, const ProbePoint& p, const GermConfig& cfg) {
  LimitResult lim;
  try {
    lim = germ_limit(g, cfg);
  } catch (const CalcError&) {
    return false;
  }
  if (p.kind == ProbePoint::Kind::InfinitePoint) {
    return lim.kind == (p.direction > 0 ? LimitResult::Kind::PlusInfinity
                                        : LimitResult::Kind::MinusInfinity);
  }
  if (lim.kind != LimitResult::Kind::Value) return false;
  return (lim.value - Scalar(p.at)).abs().to_double() <= 1e-9;
}

}  // namespace

MicroVerdict microcontinuity_at(const ExprPtr& e, const std::string& var, const ProbePoint& p,
                                const DomainSpec& dom, const AnalysisConfig& cfg) {
  MicroVerdict verdict;
  verdict.probe = p;

  if (p.kind == ProbePoint::Kind::Standard) {
    if (!dom.contains(p.at, /*closure=*/true))
      throw UsageError("probe " + p.str() + " outside domain " + dom.str());
    LcBackend lc{cfg.trunc, cfg.precision};
    LeviCivitaNumber center = LeviCivitaNumber::constant(Scalar(p.at), cfg.trunc);
    LeviCivitaNumber f0 = eval(e, lc, var, center);
    std::optional<ExtOrder> min_order;
    bool decided = true;
    for (int dir : {+1, -1}) {
      // Only sides that stay inside the domain closure are admissible.
      if (dir > 0 && dom.upper && p.at == *dom.upper) continue;
      if (dir < 0 && dom.lower && p.at == *dom.lower) continue;
      LeviCivitaNumber h = dir > 0 ? LeviCivitaNumber::eps(cfg.trunc)
                                   : lc_neg(LeviCivitaNumber::eps(cfg.trunc));
      LeviCivitaNumber delta;
      try {
        delta = lc_sub(eval(e, lc, var, lc_add(center, h)), f0);
      } catch (const CalcError& err) {
        decided = false;
        verdict.note = err.what();
        break;
      }
      if (delta.is_zero()) continue;
      ExtOrder ord = lc_order(delta);
      if (!(ord.value > 0)) {
        verdict.kind = MicroVerdict::Kind::Refuted;
        verdict.delta_order = ord;
        verdict.note = "increment has order " + ord.str() + " at the standard point";
        return verdict;
      }
      if (!min_order || ord.value < min_order->value) min_order = ord;
    }
    if (decided) {
      verdict.kind = MicroVerdict::Kind::Microcontinuous;
      verdict.delta_order = min_order;  // absent when the increment vanished
      verdict.note = min_order ? "series increment has order " + min_order->str()
                               : "increment is identically 0";
    }
    return verdict;
  }

  // Germ probes: witness-pair families.
  std::vector<CandidatePair> candidates = oscillation_candidates(e, var, p, cfg.germ);
  std::vector<CandidatePair> shifts = shift_candidates(p);
  candidates.insert(candidates.end(), shifts.begin(), shifts.end());

  int examined = 0;
  for (const CandidatePair& cand : candidates) {
    Germ gx, gxp;
    try {
      gx = Germ::from_expr(cand.x_n, "n");
      gxp = Germ::from_expr(cand.xp_n, "n");
    } catch (const CalcError&) {
      continue;
    }
    ++examined;
    // The pair must be infinitely close (certified), approach the probe
    // point, and live inside the domain.
    BoolVerdict close = germ_is_null(Germ::from_expr(ex::sub(cand.x_n, cand.xp_n), "n"), cfg.germ);
    if (close.value != Truth::True || close.grade != EvidenceGrade::Symbolic) continue;
    if (!approaches_probe(gx, p, cfg.germ) || !approaches_probe(gxp, p, cfg.germ)) continue;
    if (!eventually_within(gx, dom, cfg.germ) || !eventually_within(gxp, dom, cfg.germ)) continue;

    ExprPtr gap_body = ex::sub(substitute(e, var, cand.x_n), substitute(e, var, cand.xp_n));
    Germ gap;
    try {
      gap = Germ::from_expr(gap_body, "n");
    } catch (const CalcError&) {
      continue;
    }
    BoolVerdict nullness = germ_is_null(gap, cfg.germ);
    if (nullness.value == Truth::False && nullness.grade == EvidenceGrade::Symbolic) {
      verdict.kind = MicroVerdict::Kind::Refuted;
      WitnessPair w;
      w.x_text = to_string(cand.x_n);
      w.xp_text = to_string(cand.xp_n);
      w.gap = gap;
      w.family = cand.family;
      verdict.witness = std::move(w);
      verdict.gap_limit = germ_limit(Germ::from_expr(ex::call(FnTag::Abs, gap_body), "n"), cfg.germ);
      verdict.note = "gap certified non-null: " + nullness.note;
      return verdict;
    }
  }
  verdict.kind = MicroVerdict::Kind::Unknown;
  verdict.note = "no witness family refuted (" + std::to_string(examined) +
                 " candidate pairs examined)";
  return verdict;
}

std::optional<double> resample_gap(const MicroVerdict& v, const AnalysisConfig& cfg) {
  if (!v.witness) return std::nullopt;
  long long horizon = cfg.germ.schedule.horizons.back();
  if (v.witness->gap.oscillatory() ||
      free_variables(v.witness->gap.body()).count("n")) {
    // Trig phases beyond ~2^26 lose the gap to double rounding.
    horizon = std::min(horizon, 1LL << 26);
  }
  try {
    return std::abs(v.witness->gap.sample(horizon).to_double());
  } catch (const CalcError&) {
    return std::nullopt;
  }
}

UniformReport classify_uniform(const ExprPtr& e, const std::string& var, const DomainSpec& dom,
                               int grid_size, const AnalysisConfig& cfg) {
  if (grid_size < 3) throw UsageError("grid size must be at least 3");
  UniformReport report;

  // Standard grid: interior points of a finite window, plus closed endpoints.
  Rational lo = dom.lower ? *dom.lower : (dom.upper ? *dom.upper - 20 : Rational(-10));
  Rational hi = dom.upper ? *dom.upper : (dom.lower ? *dom.lower + 20 : Rational(10));
  std::vector<Rational> grid;
  for (int i = 1; i <= grid_size; ++i) grid.push_back(lo + (hi - lo) * Rational(i, grid_size + 1));
  if (dom.lower && !dom.lower_open) grid.insert(grid.begin(), *dom.lower);
  if (dom.upper && !dom.upper_open) grid.push_back(*dom.upper);

  bool any_unknown = false;
  auto run_probe = [&](const ProbePoint& p) {
    MicroVerdict v;
    try {
      v = microcontinuity_at(e, var, p, dom, cfg);
    } catch (const CalcError& err) {
      v.probe = p;
      v.kind = MicroVerdict::Kind::Unknown;
      v.note = err.what();
    }
    report.probes.push_back(std::move(v));
    const MicroVerdict& back = report.probes.back();
    if (back.kind == MicroVerdict::Kind::Refuted && !report.refuting_probe)
      report.refuting_probe = report.probes.size() - 1;
    if (back.kind == MicroVerdict::Kind::Unknown && p.kind == ProbePoint::Kind::Standard)
      any_unknown = true;
  };

  for (const Rational& x : grid) run_probe(ProbePoint::standard(x));
  if (dom.lower && dom.lower_open) run_probe(ProbePoint::boundary(*dom.lower, +1));
  if (dom.upper && dom.upper_open) run_probe(ProbePoint::boundary(*dom.upper, -1));
  if (!dom.lower) run_probe(ProbePoint::infinite(-1));
  if (!dom.upper) run_probe(ProbePoint::infinite(+1));

  if (report.refuting_probe) {
    report.verdict = UniformReport::Kind::NotUniform;
    report.note = "refuted at " + report.probes[*report.refuting_probe].probe.str();
  } else if (any_unknown) {
    report.verdict = UniformReport::Kind::Unknown;
    report.note = "some standard probes could not be certified";
  } else {
    report.verdict = UniformReport::Kind::UniformOnProbes;
    report.note = "every standard probe certified, no germ probe refuted (evidence, not proof)";
  }
  return report;
}

// ---- Euler/de Moivre cosine ----

EulerReport euler_cosine(const Scalar& v, int k_max, long long horizon, int precision) {
  if (k_max < 0) throw UsageError("k_max must be nonnegative");
  if (horizon < 10LL * std::max(1, k_max)) throw UsageError("horizon must be at least 10*k_max");
  EulerReport report;
  ExprPtr n = ex::var("n");
  ExprPtr vz = v.is_exact() ? ex::num(v.rational())
                            : ex::num(*rat_from_decimal(format_double(v.to_double())));
  ExprPtr z = ex::div(vz, n);  // arc z with n z = v
  Scalar sign(Rational(1));
  Scalar partial(Rational(0));
  Rational fact(1);
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) fact *= Rational((2 * k - 1) * 2 * k);
    // T_k(n) = n(n-1)...(n-2k+1)/(2k)! cos^(n-2k)(z) sin^(2k)(z)
    ExprPtr falling = ex::num(1);
    for (int j = 0; j < 2 * k; ++j) falling = ex::mul(falling, ex::sub(n, ex::num(j)));
    ExprPtr cos_pow = ex::pow(ex::call(FnTag::Cos, z), ex::sub(n, ex::num(2 * k)));
    ExprPtr sin_pow = ex::pow(ex::call(FnTag::Sin, z), ex::num(2 * k));
    ExprPtr body = ex::div(ex::mul(falling, ex::mul(cos_pow, sin_pow)), ex::num(fact));
    Scalar t_k = Germ::from_expr(body, "n").sample(horizon);
    EulerRow row;
    row.k = k;
    row.t_k = t_k;
    row.target = scalar_pow(v, Rational(2 * k)) / Scalar(fact);
    row.error = std::abs(t_k.to_double() - row.target.to_double());
    report.rows.push_back(row);
    partial += sign * t_k;
    sign = -sign;
  }
  report.partial_sum = partial;
  report.cos_v = scalar_fn(FnTag::Cos, v.is_exact() ? v : Scalar::approx(v.to_double(), precision));
  report.partial_error = std::abs(partial.to_double() - report.cos_v.to_double());
  return report;
}

}  // namespace bcalc
