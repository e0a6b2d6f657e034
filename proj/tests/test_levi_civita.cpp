#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bcalc/levi_civita.hpp"
#include "test_util.hpp"

using namespace bcalc;
using namespace bcalc::testutil;

namespace {
const Rational T(8);
LeviCivitaNumber eps() { return LeviCivitaNumber::eps(T); }
LeviCivitaNumber lc_const(long long v) {
  return LeviCivitaNumber::constant(Scalar(Rational(v)), T);
}
}  // namespace

TEST_CASE("arithmetic and the order of sums") {
  LeviCivitaNumber e1 = eps();
  LeviCivitaNumber e2 = lc_mul(eps(), eps());
  LeviCivitaNumber sum = lc_add(e1, e2);
  CHECK(lc_order(sum) == ExtOrder::finite(Rational(1)));  // order of a sum: the minimum
  CHECK(lc_order(lc_mul(e1, e2)) == ExtOrder::finite(Rational(3)));
  CHECK(lc_sub(lc_add(lc_const(1), e1), lc_add(lc_const(1), e1)).is_zero());
}

TEST_CASE("inversion") {
  CHECK(lc_equal(lc_invert(eps()), LeviCivitaNumber::monomial(Scalar(Rational(1)), Rational(-1), T)));
  // 1/(1+eps) = 1 - eps + eps^2 - ... up to the cutoff
  LeviCivitaNumber inv = lc_invert(lc_add(lc_const(1), eps()));
  for (int k = 0; k < 8; ++k)
    CHECK(inv.coeff_at(Rational(k)) == Scalar(Rational(k % 2 == 0 ? 1 : -1)));
  // 2*eps^2 inverts to (1/2) eps^-2
  LeviCivitaNumber a = LeviCivitaNumber::monomial(Scalar(Rational(2)), Rational(2), T);
  CHECK(lc_equal(lc_invert(a), LeviCivitaNumber::monomial(Scalar(Rational(1, 2)), Rational(-2), T)));
  CHECK_THROWS_AS(lc_invert(LeviCivitaNumber(T)), DomainError);
}

TEST_CASE("a * invert(a) = 1 modulo the cutoff on random elements") {
  for (int i = 0; i < 300; ++i) {
    LeviCivitaNumber a = rand_nonzero_lc(-4, 6);
    LeviCivitaNumber prod = lc_mul(a, lc_invert(a));
    CHECK(lc_equal(prod, lc_const(1)));
  }
}

TEST_CASE("rational powers") {
  CHECK(lc_equal(lc_pow_rational(eps(), Rational(1, 2)),
                 LeviCivitaNumber::monomial(Scalar(Rational(1)), Rational(1, 2), T)));
  CHECK(lc_equal(lc_pow_rational(LeviCivitaNumber::monomial(Scalar(Rational(1)), Rational(3), T),
                                 Rational(1, 2)),
                 LeviCivitaNumber::monomial(Scalar(Rational(1)), Rational(3, 2), T)));
  // sqrt(4+eps): verified by squaring back (derived oracle)
  LeviCivitaNumber root = lc_pow_rational(lc_add(lc_const(4), eps()), Rational(1, 2));
  CHECK(root.coeff_at(Rational(0)) == Scalar(Rational(2)));
  CHECK(root.coeff_at(Rational(1)) == Scalar(Rational(1, 4)));
  CHECK(root.coeff_at(Rational(2)) == Scalar(Rational(-1, 64)));
  CHECK(lc_equal(lc_mul(root, root), lc_add(lc_const(4), eps())));
  CHECK_THROWS_AS(lc_pow_rational(lc_neg(eps()), Rational(1, 2)), DomainError);
}

TEST_CASE("sqrt inverts squaring exactly on random positive elements") {
  for (int i = 0; i < 200; ++i) {
    LeviCivitaNumber a = rand_nonzero_lc(-2, 4);
    if (a.leading_coeff().sign() < 0) a = lc_neg(a);
    LeviCivitaNumber sq = lc_mul(a, a);
    LeviCivitaNumber r = lc_pow_rational(sq, Rational(1, 2));
    CHECK(lc_equal(r, a));  // exact: the root of a perfect square is rational
    CHECK(lc_equal(lc_mul(r, r), sq));
  }
}

TEST_CASE("elementary functions") {
  LeviCivitaNumber expe = lc_elementary(FnTag::Exp, eps());
  Rational fact(1);
  for (int k = 0; k < 8; ++k) {
    if (k > 0) fact *= k;
    CHECK(expe.coeff_at(Rational(k)) == Scalar(Rational(1) / fact));
    CHECK(expe.coeff_at(Rational(k)).is_exact());
  }
  LeviCivitaNumber sine = lc_elementary(FnTag::Sin, eps());
  CHECK(sine.coeff_at(Rational(1)) == Scalar(Rational(1)));
  CHECK(sine.coeff_at(Rational(2)) == Scalar(Rational(0)));
  CHECK(sine.coeff_at(Rational(3)) == Scalar(Rational(-1, 6)));
  CHECK(sine.coeff_at(Rational(5)) == Scalar(Rational(1, 120)));
  CHECK_THROWS_AS(lc_elementary(FnTag::Sin, lc_invert(eps())), NotRepresentable);
  CHECK_THROWS_AS(lc_elementary(FnTag::Log, eps()), DomainError);
}

TEST_CASE("sin^2 + cos^2 = 1 up to the cutoff") {
  LeviCivitaNumber s = lc_elementary(FnTag::Sin, eps());
  LeviCivitaNumber c = lc_elementary(FnTag::Cos, eps());
  CHECK(lc_equal(lc_add(lc_mul(s, s), lc_mul(c, c)), lc_const(1)));
  // at an appreciable argument the identity holds within double rounding
  LeviCivitaNumber a = lc_add(lc_const(1), eps());
  LeviCivitaNumber s2 = lc_elementary(FnTag::Sin, a);
  LeviCivitaNumber c2 = lc_elementary(FnTag::Cos, a);
  LeviCivitaNumber one = lc_add(lc_mul(s2, s2), lc_mul(c2, c2));
  for (const auto& term : lc_sub(one, lc_const(1)).terms())
    CHECK(std::abs(term.coeff.to_double()) < 1e-12);
}

TEST_CASE("comparison: higher order is smaller") {
  LeviCivitaNumber e2 = lc_mul(eps(), eps());
  CHECK(lc_compare(e2, eps()) == Ordering::Less);
  CHECK(lc_compare(eps(), LeviCivitaNumber::constant(Scalar(Rational(1, 1000000)), T)) ==
        Ordering::Less);
  LeviCivitaNumber huge = LeviCivitaNumber::constant(Scalar(rat_pow_int(Rational(10), 100)), T);
  CHECK(lc_compare(lc_invert(eps()), huge) == Ordering::Greater);
  CHECK(lc_compare(lc_neg(eps()), LeviCivitaNumber(T)) == Ordering::Less);
}

TEST_CASE("order and standard part") {
  LeviCivitaNumber a = LeviCivitaNumber::from_terms(
      {{Rational(2), Scalar(Rational(3))}, {Rational(5), Scalar(Rational(1))}}, T);
  CHECK(lc_order(a) == ExtOrder::finite(Rational(2)));
  CHECK(lc_order(LeviCivitaNumber::monomial(Scalar(Rational(1)), Rational(3, 2), T)) ==
        ExtOrder::finite(Rational(3, 2)));
  CHECK(lc_order(lc_const(5)) == ExtOrder::finite(Rational(0)));
  CHECK_THROWS_AS(lc_order(LeviCivitaNumber(T)), DomainError);

  LeviCivitaNumber b = LeviCivitaNumber::from_terms({{Rational(0), Scalar(Rational(3))},
                                                     {Rational(1), Scalar(Rational(5))},
                                                     {Rational(2), Scalar(Rational(-1))}},
                                                    T);
  CHECK(lc_standard_part(b) == Scalar(Rational(3)));
  CHECK(lc_standard_part(eps()) == Scalar(Rational(0)));
  CHECK_THROWS_AS(lc_standard_part(lc_invert(eps())), DomainError);
}

TEST_CASE("ordered field laws on random triples (exact coefficients)") {
  for (int i = 0; i < 300; ++i) {
    LeviCivitaNumber a = rand_lc(-4, 6), b = rand_lc(-4, 6), c = rand_lc(-4, 6);
    CHECK(lc_equal(lc_add(a, b), lc_add(b, a)));
    CHECK(lc_equal(lc_mul(a, b), lc_mul(b, a)));
    CHECK(lc_equal(lc_add(lc_add(a, b), c), lc_add(a, lc_add(b, c))));
    CHECK(lc_equal(lc_mul(lc_mul(a, b), c), lc_mul(a, lc_mul(b, c))));
    CHECK(lc_equal(lc_mul(a, lc_add(b, c)), lc_add(lc_mul(a, b), lc_mul(a, c))));
  }
}

TEST_CASE("order laws") {
  for (int i = 0; i < 500; ++i) {
    LeviCivitaNumber a = rand_nonzero_lc(-4, 8), b = rand_nonzero_lc(-4, 8);
    LeviCivitaNumber prod = lc_mul(a, b);
    if (!prod.is_zero())
      CHECK(lc_order(prod).value == lc_order(a).value + lc_order(b).value);
    LeviCivitaNumber sum = lc_add(a, b);
    if (!sum.is_zero()) {
      Rational min_order = std::min(lc_order(a).value, lc_order(b).value);
      CHECK(lc_order(sum).value >= min_order);
      if (lc_order(a).value != lc_order(b).value)
        CHECK(lc_order(sum).value == min_order);
    }
  }
}

TEST_CASE("st is a ring homomorphism on finite elements") {
  for (int i = 0; i < 500; ++i) {
    LeviCivitaNumber a = rand_lc(0, 8), b = rand_lc(0, 8);
    CHECK(lc_standard_part(lc_add(a, b)) == lc_standard_part(a) + lc_standard_part(b));
    CHECK(lc_standard_part(lc_mul(a, b)) == lc_standard_part(a) * lc_standard_part(b));
  }
}

TEST_CASE("monotonicity: a < b and c <= d implies a+c < b+d") {
  for (int i = 0; i < 300; ++i) {
    LeviCivitaNumber a = rand_lc(-4, 6), b = rand_lc(-4, 6);
    LeviCivitaNumber c = rand_lc(-4, 6), d = rand_lc(-4, 6);
    if (lc_compare(a, b) != Ordering::Less) std::swap(a, b);
    if (lc_compare(a, b) != Ordering::Less) continue;
    if (lc_compare(c, d) == Ordering::Greater) std::swap(c, d);
    CHECK(lc_compare(lc_add(a, c), lc_add(b, d)) == Ordering::Less);
  }
}

TEST_CASE("text format round trip") {
  const char* samples[] = {"3 + 5*eps - eps^2", "eps^(3/2)", "eps^-1", "0", "1",
                           "-eps", "(1/2)*eps^-2 + 3", "2*eps^(1/2) - (7/3)*eps^4"};
  for (const char* text : samples) {
    LeviCivitaNumber a = lc_parse(text);
    CHECK(lc_equal(lc_parse(lc_to_string(a)), a));
  }
  CHECK(lc_to_string(lc_parse("3 + 5*eps - eps^2")) == "3 + 5*eps - eps^2");
  CHECK(lc_standard_part(lc_parse("3 + 5*eps - eps^2")) == Scalar(Rational(3)));
}
