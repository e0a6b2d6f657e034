// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Invoked by ctest as: acceptance <path-to-bcalc> <source-dir>
// (the paths feed the CLI/schema criterion; everything else is in-process).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bcalc/analysis.hpp"
#include "test_util.hpp"

using namespace bcalc;
using namespace bcalc::testutil;

namespace {

struct Criterion {
  int number;
  std::string name;
  std::function<std::string()> run;  // empty string = pass, else failure detail
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string g_bcalc_path;
std::string g_source_dir;

#define REQUIRE_OR(cond, msg)                        \
  do {                                               \
    if (!(cond)) return std::string("failed: ") + msg; \
  } while (0)

// ---- criterion 1: Cauchy orders ----

std::string criterion_orders() {
  double t0 = now_seconds();
  CauchyOrderResult inf = cauchy_order(parse_expr("exp(-1/i)"));
  REQUIRE_OR(inf.kind == CauchyOrderResult::Kind::PlusInfinity, "exp(-1/i) should have order infinity");
  REQUIRE_OR(now_seconds() - t0 < 5.0, "exp(-1/i) run exceeded 5 s");

  t0 = now_seconds();
  CauchyOrderResult zero = cauchy_order(parse_expr("1/log(i)"));
  REQUIRE_OR(zero.kind == CauchyOrderResult::Kind::Finite && zero.order == 0,
             "1/log(i) should have order 0");
  REQUIRE_OR(now_seconds() - t0 < 5.0, "1/log(i) run exceeded 5 s");

  const Rational tol(1, 1 << 20);
  for (int i = 0; i < 20; ++i) {
    Rational q = Rational(rand_int(1, 64), rand_int(8, 12));  // in (0, 8]
    ExprPtr e = ex::pow(ex::var("i"), ex::num(q));
    t0 = now_seconds();
    CauchyOrderResult r = cauchy_order(e);
    REQUIRE_OR(r.kind == CauchyOrderResult::Kind::Finite, "i^q order should be finite");
    REQUIRE_OR(r.order == q, "i^" + rat_to_string(q) + " order not exact: got " +
                                 rat_to_string(r.order));
    REQUIRE_OR(r.bisection_width <= tol, "bisection width above 2^-20");
    REQUIRE_OR(now_seconds() - t0 < 5.0, "i^q run exceeded 5 s");
  }
  return "";
}

// ---- criterion 2: order laws ----

std::string criterion_order_laws() {
  for (int i = 0; i < 1000; ++i) {
    LeviCivitaNumber a = rand_nonzero_lc(-4, 8);
    LeviCivitaNumber b = rand_nonzero_lc(-4, 8);
    LeviCivitaNumber prod = lc_mul(a, b);
    REQUIRE_OR(!prod.is_zero(), "product of nonzero elements vanished");
    REQUIRE_OR(lc_order(prod).value == lc_order(a).value + lc_order(b).value,
               "order(ab) != order(a)+order(b)");
    if (lc_order(a).value != lc_order(b).value) {
      LeviCivitaNumber sum = lc_add(a, b);
      Rational expected = std::min(lc_order(a).value, lc_order(b).value);
      REQUIRE_OR(!sum.is_zero() && lc_order(sum).value == expected,
                 "order(a+b) != min order when leading orders differ");
    }
  }
  // Theorem 1 reproduction: eps^a < eps^b iff a > b (higher order is smaller)
  for (int i = 0; i < 200; ++i) {
    Rational a = Rational(rand_int(1, 32), rand_int(1, 4));
    Rational b = Rational(rand_int(1, 32), rand_int(1, 4));
    if (a == b) continue;
    LeviCivitaNumber ea = LeviCivitaNumber::monomial(Scalar(Rational(1)), a);
    LeviCivitaNumber eb = LeviCivitaNumber::monomial(Scalar(Rational(1)), b);
    bool less = lc_compare(ea, eb) == Ordering::Less;
    REQUIRE_OR(less == (a > b), "cmp(eps^a, eps^b) != (a > b)");
  }
  return "";
}

// ---- criterion 3: st homomorphism ----

std::string criterion_st_homomorphism() {
  for (int i = 0; i < 1000; ++i) {
    LeviCivitaNumber a = rand_lc(0, 8);
    LeviCivitaNumber b = rand_lc(0, 8);
    REQUIRE_OR(lc_standard_part(lc_add(a, b)) == lc_standard_part(a) + lc_standard_part(b),
               "st(a+b) != st(a)+st(b)");
    REQUIRE_OR(lc_standard_part(lc_mul(a, b)) == lc_standard_part(a) * lc_standard_part(b),
               "st(ab) != st(a)st(b)");
  }
  for (int i = 0; i < 50; ++i) {
    LeviCivitaNumber inf = rand_nonzero_lc(-6, -1);
    try {
      lc_standard_part(inf);
      return "st accepted an infinite element";
    } catch (const DomainError&) {
    }
  }
  return "";
}

// ---- criterion 4: derivative agreement ----

std::string criterion_derivatives() {
  struct Entry {
    const char* text;
    Rational points[5];
  };
  const Entry catalog[] = {
      {"x^2", {Rational(-2), Rational(-1, 2), Rational(1, 3), Rational(1), Rational(5, 2)}},
      {"x^3", {Rational(-2), Rational(-1, 2), Rational(1, 3), Rational(1), Rational(5, 2)}},
      {"exp(x)", {Rational(-1), Rational(-1, 3), Rational(0), Rational(1, 2), Rational(1)}},
      {"sin(x)", {Rational(-1), Rational(0), Rational(1, 3), Rational(1, 2), Rational(2)}},
      {"cos(x)", {Rational(-1), Rational(0), Rational(1, 3), Rational(1, 2), Rational(2)}},
      {"log(1+x)", {Rational(-1, 2), Rational(0), Rational(1, 3), Rational(1), Rational(3)}},
      {"sqrt(1+x)", {Rational(0), Rational(3), Rational(5, 4), Rational(8), Rational(21, 4)}},
      {"sin(x)*exp(x)", {Rational(-1), Rational(0), Rational(1, 2), Rational(1), Rational(2)}},
      {"1/(1+x^2)", {Rational(-2), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(3)}},
      {"x^(5/2)", {Rational(1, 4), Rational(1), Rational(9, 4), Rational(4), Rational(25, 4)}},
  };
  const double h = 1e-6;
  for (const auto& entry : catalog) {
    ExprPtr e = parse_expr(entry.text);
    for (const Rational& x0 : entry.points) {
      DerivativeResult st = derivative_st(e, "x", Scalar(x0));
      REQUIRE_OR(st.kind == DerivativeResult::Kind::Value,
                 std::string(entry.text) + " not differentiable at " + rat_to_string(x0));
      Scalar dual = derivative_dual(e, "x", Scalar(x0));
      REQUIRE_OR(st.value == dual, std::string(entry.text) + " at " + rat_to_string(x0) +
                                       ": lc " + st.value.str() + " != dual " + dual.str());
      double x0d = rat_to_double(x0);
      double fp = eval_scalar(e, "x", Scalar::approx(x0d + h)).to_double();
      double fm = eval_scalar(e, "x", Scalar::approx(x0d - h)).to_double();
      double central = (fp - fm) / (2 * h);
      REQUIRE_OR(std::abs(st.value.to_double() - central) <=
                     1e-5 * std::max(1.0, std::abs(central)),
                 std::string(entry.text) + " disagrees with central differences");
    }
  }
  // the exponential example in approximate mode
  for (double x0 : {-1.0, 0.25, 1.0, 2.0}) {
    DerivativeResult r = derivative_st(parse_expr("exp(x)"), "x", Scalar::approx(x0));
    REQUIRE_OR(r.kind == DerivativeResult::Kind::Value, "exp not differentiable");
    REQUIRE_OR(std::abs(r.value.to_double() - std::exp(x0)) <= 1e-12 * std::exp(x0),
               "derivative of exp misses e^{x0} beyond 1e-12");
  }
  return "";
}

// ---- criterion 5: microcontinuity scenarios ----

std::string criterion_microcontinuity() {
  double t0 = now_seconds();
  AnalysisConfig cfg;

  UniformReport osc = classify_uniform(parse_expr("sin(1/x)"), "x", DomainSpec::parse("(0,1)"),
                                       11, cfg);
  REQUIRE_OR(osc.verdict == UniformReport::Kind::NotUniform, "sin(1/x) on (0,1) not refuted");
  REQUIRE_OR(osc.refuting_probe.has_value(), "sin(1/x): no refuting probe recorded");
  const MicroVerdict& oref = osc.probes[*osc.refuting_probe];
  REQUIRE_OR(oref.witness.has_value() && oref.witness->family == "oscillation",
             "sin(1/x): expected an oscillation witness");
  REQUIRE_OR(oref.gap_limit.kind == LimitResult::Kind::Value &&
                 std::abs(oref.gap_limit.value.to_double() - 1.0) < 1e-6,
             "sin(1/x): gap limit != 1");
  std::optional<double> resampled = resample_gap(oref, cfg);
  REQUIRE_OR(resampled && std::abs(*resampled - 1.0) < 1e-6, "sin(1/x): resampled gap != 1");

  UniformReport quad = classify_uniform(parse_expr("x^2"), "x", DomainSpec::parse("(-inf,inf)"),
                                        11, cfg);
  REQUIRE_OR(quad.verdict == UniformReport::Kind::NotUniform, "x^2 on R not refuted");
  const MicroVerdict& qref = quad.probes[*quad.refuting_probe];
  REQUIRE_OR(qref.probe.kind == ProbePoint::Kind::InfinitePoint,
             "x^2: refutation should sit at an infinite point");
  REQUIRE_OR(qref.gap_limit.kind == LimitResult::Kind::Value &&
                 std::abs(qref.gap_limit.value.to_double() - 2.0) < 1e-6,
             "x^2: gap limit != 2");
  std::optional<double> qres = resample_gap(qref, cfg);
  REQUIRE_OR(qres && std::abs(*qres - 2.0) < 1e-6, "x^2: resampled gap != 2");

  UniformReport unit = classify_uniform(parse_expr("x^2"), "x", DomainSpec::parse("[0,1]"),
                                        11, cfg);
  REQUIRE_OR(unit.verdict == UniformReport::Kind::UniformOnProbes,
             "x^2 on [0,1] should be uniform on probes");
  for (const auto& probe : unit.probes) {
    REQUIRE_OR(probe.kind == MicroVerdict::Kind::Microcontinuous,
               "x^2 on [0,1]: a probe failed to certify");
    if (probe.delta_order)
      REQUIRE_OR(probe.delta_order->value >= 1, "x^2 on [0,1]: increment order below 1");
  }

  REQUIRE_OR(now_seconds() - t0 < 10.0, "microcontinuity scenarios exceeded 10 s");
  return "";
}

// ---- criterion 6: sum theorem ----

// Independent oracle, computed before consulting the engine: adaptive Simpson
// for the sine-integral tail over [1, 1000] plus an integrated-by-parts
// remainder (error < 2e-9).
double simpson_rec(double a, double b, double fa, double fm, double fb, double whole,
                   double eps, int depth) {
  auto f = [](double t) { return std::sin(t) / t; };
  double m = 0.5 * (a + b);
  double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * eps)
    return left + right + (left + right - whole) / 15;
  return simpson_rec(a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson_rec(m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double quadrature_oracle() {
  auto f = [](double t) { return std::sin(t) / t; };
  const double X = 1000.0;
  double total = 0.0;
  for (double a = 1.0; a < X; a += 9.0) {
    double b = std::min(a + 9.0, X);
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    total += simpson_rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 1e-12, 40);
  }
  return total + std::cos(X) / X - std::sin(X) / (X * X);
}

std::string criterion_sum_theorem() {
  const double oracle = quadrature_oracle();  // pi/2 - Si(1)
  REQUIRE_OR(std::abs(oracle - 0.6247132564277136) < 1e-5, "quadrature oracle self-check");

  ExprPtr abel = parse_expr("sin(k*x)/k", std::set<std::string>{"k", "x"});
  SumTheoremReport r = sum_theorem_diagonal(abel, Germ::from_text("1/n"));
  REQUIRE_OR(!r.tail_flagged, "Abel tails hit the cap");
  REQUIRE_OR(r.diagonal_limit.has_value(), "no diagonal limit estimate");
  REQUIRE_OR(std::abs(*r.diagonal_limit - oracle) < 0.01,
             "diagonal limit " + format_double(*r.diagonal_limit) + " misses the oracle " +
                 format_double(oracle));
  REQUIRE_OR(r.diagonal_null == Truth::False, "Abel diagonal should not be null");
  REQUIRE_OR(r.verdict1853 == Truth::False, "verdict1853 should be violated");
  REQUIRE_OR(r.verdict1821 == Truth::True, "verdict1821 should be satisfied");

  ExprPtr control = parse_expr("1/(k*(k+1))", std::set<std::string>{"k", "x"});
  SumTheoremReport c = sum_theorem_diagonal(control, Germ::from_text("1/n"));
  REQUIRE_OR(c.diagonal_null == Truth::True, "telescoping diagonal should be null");
  REQUIRE_OR(c.verdict1821 == Truth::True && c.verdict1853 == Truth::True,
             "telescoping control should satisfy both verdicts");
  return "";
}

// ---- criterion 7: Euler cosine ----

std::string criterion_euler() {
  for (long long v : {1, 2}) {
    EulerReport r = euler_cosine(Scalar(Rational(v)), 4, 1000000);
    for (const auto& row : r.rows)
      REQUIRE_OR(row.error <= 1e-4, "v=" + std::to_string(v) + " k=" + std::to_string(row.k) +
                                        ": |T_k - target| = " + format_double(row.error));
    EulerReport full = euler_cosine(Scalar(Rational(v)), 8, 1000000);
    REQUIRE_OR(full.partial_error <= 1e-6,
               "v=" + std::to_string(v) + ": partial sum misses cos v by " +
                   format_double(full.partial_error));
    EulerReport ten = euler_cosine(Scalar(Rational(v)), 4, 10000000);
    for (std::size_t k = 1; k < ten.rows.size(); ++k)
      REQUIRE_OR(ten.rows[k].error < r.rows[k].error,
                 "v=" + std::to_string(v) + ": error did not decrease at 10x horizon");
  }
  return "";
}

// ---- criterion 8: Frechet reduced power ----

std::string criterion_frechet() {
  Germ g = Germ::from_text("1/n + 1/2");
  Germ modified = g.with_override(3, Scalar(Rational(999))).with_override(8, Scalar(Rational(0)));
  CompareVerdict eq = germ_compare(g, modified);
  REQUIRE_OR(eq.order == Ordering::Equal, "finite modification should compare Equal");

  CompareVerdict undecided = germ_compare(Germ::from_text("(-1)^n/n"), Germ::zero());
  REQUIRE_OR(!undecided.order.has_value(), "(-1)^n/n vs 0 should be Unknown");

  CompareVerdict adv = germ_compare(Germ::from_text("n^(1/10)"), Germ::from_text("log(n)^3"));
  REQUIRE_OR(adv.order == Ordering::Greater && adv.grade == EvidenceGrade::Symbolic,
             "n^(1/10) vs log(n)^3 should be Greater at Symbolic grade");
  for (long long h : HorizonSchedule::defaults().horizons) {
    double a = Germ::from_text("n^(1/10)").sample(h).to_double();
    double b = Germ::from_text("log(n)^3").sample(h).to_double();
    REQUIRE_OR(a < b, "sampling was expected to favor log(n)^3 at every default horizon");
  }
  return "";
}

// ---- criterion 9: parser and CLI schema ----

std::string criterion_parser_and_cli() {
  const char* corpus[] = {
      "x", "x^2", "x^2+1", "sin(x)*exp(x)", "1/2*x", "sin(1/x)", "x^(3/2)", "x^-1",
      "-x", "-(x+1)", "2-x-1", "2-(x-1)", "x*(x+1)", "(x+1)*(x-1)", "x/(1+x^2)",
      "x^x", "2^x", "e^x", "pi*x", "sqrt(1+x)", "log(1+x)", "abs(x)", "cos(x)^2",
      "x^2^3", "(x^2)^3", "1/(2*pi*x)", "exp(-1/x)", "1/log(x)", "x*sin(1/x)",
      "x - 1/6*x^3", "3.25*x", "x/3", "0.5+x", "-1/2*x", "(1+x)^(1/3)",
      "sin(cos(x))", "exp(x)/x", "log(x)^3", "x^(1/10)", "1/(x*(x+1))",
      "sqrt(x)+sqrt(1+x)", "abs(x-1/2)", "e", "pi", "42", "x-x", "x*x*x",
      "sin(2*pi*x)", "cos(pi/2*x)", "exp(x^2)/exp(x)",
  };
  int count = 0;
  for (const char* text : corpus) {
    ExprPtr once = parse_expr(text);
    ExprPtr twice = parse_expr(to_string(once));
    REQUIRE_OR(structurally_equal(once, twice), std::string("round trip failed for ") + text);
    ++count;
  }
  REQUIRE_OR(count >= 50, "round-trip corpus smaller than 50");

  const char* malformed[] = {
      "",      "2*",    "2*+3", "sin(",  "sin(x", ")",    "x+",   "1..2", "x^",    "(x",
      "x)",    "foo(x)", "x**2", "2 3",   "sin x", "*x",   "x//2", "x^^2", "abs()", "pi(2)",
  };
  int malformed_count = 0;
  for (const char* text : malformed) {
    try {
      parse_expr(text);
      return std::string("malformed input accepted: '") + text + "'";
    } catch (const ParseError& err) {
      REQUIRE_OR(err.offset() <= std::string(text).size() + 1,
                 std::string("offset out of range for '") + text + "'");
      ++malformed_count;
    }
  }
  REQUIRE_OR(malformed_count == 20, "expected 20 positioned parse errors");

  if (g_bcalc_path.empty() || g_source_dir.empty())
    return "CLI schema check needs the bcalc path and source dir arguments";
  std::string cmd = "python3 '" + g_source_dir + "/tests/validate_json.py' '" + g_bcalc_path +
                    "' '" + g_source_dir + "/schemas/output.schema.json' > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE_OR(rc == 0, "CLI JSON schema validation battery failed");
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_bcalc_path = argv[1];
  if (argc > 2) g_source_dir = argv[2];

  std::vector<Criterion> criteria = {
      {1, "Cauchy orders (exp(-1/i), 1/log(i), i^q exact)", criterion_orders},
      {2, "order laws on 1000 random series pairs", criterion_order_laws},
      {3, "st is a ring homomorphism; errors on infinite elements", criterion_st_homomorphism},
      {4, "derivative agreement: st route = dual route = finite differences", criterion_derivatives},
      {5, "microcontinuity: sin(1/x), x^2 on R, x^2 on [0,1]", criterion_microcontinuity},
      {6, "sum theorem: Abel diagonal vs quadrature oracle + control", criterion_sum_theorem},
      {7, "Euler cosine terms at infinite index", criterion_euler},
      {8, "Frechet reduced power: overrides, sign ambiguity, scale tower", criterion_frechet},
      {9, "parser round trips, positioned errors, CLI schema", criterion_parser_and_cli},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    double t0 = now_seconds();
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed = now_seconds() - t0;
    if (detail.empty()) {
      std::printf("criterion %d [%s]: PASS (%.2fs)\n", c.number, c.name.c_str(), elapsed);
    } else {
      std::printf("criterion %d [%s]: FAIL — %s\n", c.number, c.name.c_str(), detail.c_str());
      ++failures;
    }
  }
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
