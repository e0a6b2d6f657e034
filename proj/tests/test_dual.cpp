#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bcalc/dual.hpp"
#include "bcalc/levi_civita.hpp"
#include "test_util.hpp"

using namespace bcalc;
using namespace bcalc::testutil;

namespace {
DualNumber dn(long long a, long long b) { return {Scalar(Rational(a)), Scalar(Rational(b))}; }
bool dual_eq(const DualNumber& x, const DualNumber& y) {
  return x.real == y.real && x.slope == y.slope;
}
}  // namespace

TEST_CASE("ring basics and nilpotency") {
  for (int i = 0; i < 100; ++i) {
    Scalar a{rand_rational()}, b{rand_rational()};
    DualNumber x{a, b};
    DualNumber sq = dual_mul(x, x);
    CHECK(sq.real == a * a);
    CHECK(sq.slope == Scalar(Rational(2)) * a * b);  // (a+b d)^2 = a^2 + 2ab d
  }
  CHECK(dual_eq(dual_mul(dn(0, 1), dn(0, 1)), dn(0, 0)));  // d*d = 0
}

TEST_CASE("division via conjugate, checked by multiplying back") {
  DualNumber q = dual_div(dn(1, 1), dn(1, -1));
  CHECK(dual_eq(q, dn(1, 2)));  // (1+d)/(1-d) = 1+2d
  CHECK(dual_eq(dual_mul(q, dn(1, -1)), dn(1, 1)));
  for (int i = 0; i < 200; ++i) {
    DualNumber x{Scalar(rand_rational()), Scalar(rand_rational())};
    DualNumber y{Scalar(rand_nonzero_rational()), Scalar(rand_rational())};
    CHECK(dual_eq(dual_mul(dual_div(x, y), y), x));
  }
  CHECK_THROWS_AS(dual_div(dn(1, 0), dn(0, 5)), DomainError);
}

TEST_CASE("ring laws on random triples") {
  for (int i = 0; i < 300; ++i) {
    DualNumber x{Scalar(rand_rational()), Scalar(rand_rational())};
    DualNumber y{Scalar(rand_rational()), Scalar(rand_rational())};
    DualNumber z{Scalar(rand_rational()), Scalar(rand_rational())};
    CHECK(dual_eq(dual_add(x, y), dual_add(y, x)));
    CHECK(dual_eq(dual_mul(x, y), dual_mul(y, x)));
    CHECK(dual_eq(dual_mul(dual_mul(x, y), z), dual_mul(x, dual_mul(y, z))));
    CHECK(dual_eq(dual_mul(x, dual_add(y, z)), dual_add(dual_mul(x, y), dual_mul(x, z))));
  }
}

TEST_CASE("any product with two slope-only factors vanishes") {
  for (int i = 0; i < 100; ++i) {
    DualNumber p{Scalar(Rational(0)), Scalar(rand_rational())};
    DualNumber q{Scalar(Rational(0)), Scalar(rand_rational())};
    DualNumber r{Scalar(rand_rational()), Scalar(rand_rational())};
    DualNumber prod = dual_mul(dual_mul(p, q), r);
    CHECK(prod.real.is_zero());
    CHECK(prod.slope.is_zero());
  }
}

TEST_CASE("elementary lifts") {
  DualNumber d{Scalar(Rational(0)), Scalar(Rational(1))};
  CHECK(dual_eq(dual_elementary(FnTag::Exp, d), dn(1, 1)));
  CHECK(dual_eq(dual_elementary(FnTag::Sin, d), dn(0, 1)));
  DualNumber onep{Scalar(Rational(1)), Scalar(Rational(1))};
  CHECK(dual_eq(dual_elementary(FnTag::Log, onep), dn(0, 1)));
  CHECK_THROWS_AS(dual_elementary(FnTag::Log, dn(-1, 1)), DomainError);
}

TEST_CASE("derivatives: exact cases") {
  CHECK(derivative_dual(parse_expr("x^2"), "x", Scalar(Rational(3))) == Scalar(Rational(6)));
  Scalar e1 = derivative_dual(parse_expr("exp(x)"), "x", Scalar(Rational(1)));
  CHECK(std::abs(e1.to_double() - std::exp(1.0)) < 1e-15);
}

TEST_CASE("derivative vs central difference on the smooth catalog") {
  struct Case {
    const char* text;
    double x0;
  };
  const Case cases[] = {
      {"x^2", 0.7},          {"x^3", -1.3},        {"exp(x)", 0.5},
      {"sin(x)", 1.1},       {"cos(x)", 0.3},      {"log(1+x)", 0.25},
      {"sqrt(1+x)", 1.25},   {"sin(x)*exp(x)", 0.5}, {"1/(1+x^2)", 0.8},
      {"x^(5/2)", 2.25},
  };
  const double h = 1e-6;
  for (const auto& c : cases) {
    ExprPtr e = parse_expr(c.text);
    Scalar d = derivative_dual(e, "x", Scalar::approx(c.x0));
    double fp = eval_scalar(e, "x", Scalar::approx(c.x0 + h)).to_double();
    double fm = eval_scalar(e, "x", Scalar::approx(c.x0 - h)).to_double();
    double central = (fp - fm) / (2 * h);
    CHECK_MESSAGE(std::abs(d.to_double() - central) <=
                      1e-5 * std::max(1.0, std::abs(central)),
                  c.text, " at ", c.x0, ": dual=", d.to_double(), " fd=", central);
  }
}

TEST_CASE("sin(x)*exp(x) derivative at 1/2 matches finite differences within 1e-5") {
  ExprPtr e = parse_expr("sin(x)*exp(x)");
  Scalar d = derivative_dual(e, "x", Scalar(Rational(1, 2)));
  const double h = 1e-6;
  double fp = eval_scalar(e, "x", Scalar::approx(0.5 + h)).to_double();
  double fm = eval_scalar(e, "x", Scalar::approx(0.5 - h)).to_double();
  double central = (fp - fm) / (2 * h);
  CHECK(std::abs(d.to_double() - central) / std::abs(central) < 1e-5);
}
