#pragma once

#include <vector>

#include "bcalc/eval.hpp"
#include "bcalc/scalar.hpp"

namespace bcalc {

enum class LcClass { Zero, Infinitesimal, AppreciableFinite, Infinite };

// Truncated left-finite series sum c_q * eps^q with strictly increasing
// rational exponents q < trunc and nonzero coefficients. eps is a fixed
// positive infinitesimal; negative exponents are the infinite elements.
// Results of every operation are valid modulo eps^trunc.
class LeviCivitaNumber {
 public:
  struct Term {
    Rational exponent;
    Scalar coeff;
  };

  explicit LeviCivitaNumber(Rational trunc = Rational(8)) : trunc_(std::move(trunc)) {}

  static LeviCivitaNumber constant(Scalar c, Rational trunc = Rational(8));
  static LeviCivitaNumber eps(Rational trunc = Rational(8));
  static LeviCivitaNumber monomial(Scalar c, Rational exponent, Rational trunc = Rational(8));
  static LeviCivitaNumber from_terms(std::vector<Term> terms, Rational trunc);

  const std::vector<Term>& terms() const { return terms_; }
  const Rational& trunc() const { return trunc_; }
  bool is_zero() const { return terms_.empty(); }

  // Leading (lowest) exponent; DomainError on zero.
  const Rational& leading_exponent() const;
  const Scalar& leading_coeff() const;

  LcClass classify() const;
  bool is_finite() const {
    return terms_.empty() || rat_sign(terms_.front().exponent) >= 0;
  }

  // Coefficient at a given exponent (0 if absent).
  Scalar coeff_at(const Rational& exponent) const;

 private:
  friend LeviCivitaNumber lc_normalize(std::vector<Term> terms, Rational trunc);
  std::vector<Term> terms_;
  Rational trunc_;
};

using LcTerm = LeviCivitaNumber::Term;

LeviCivitaNumber lc_neg(const LeviCivitaNumber& a);
LeviCivitaNumber lc_add(const LeviCivitaNumber& a, const LeviCivitaNumber& b);
LeviCivitaNumber lc_sub(const LeviCivitaNumber& a, const LeviCivitaNumber& b);
LeviCivitaNumber lc_mul(const LeviCivitaNumber& a, const LeviCivitaNumber& b);

// Leading-monomial inversion plus geometric series; DomainError on 0.
LeviCivitaNumber lc_invert(const LeviCivitaNumber& a);

LeviCivitaNumber lc_div(const LeviCivitaNumber& a, const LeviCivitaNumber& b);

// (c eps^q (1+u))^p via c^p eps^{qp} and the binomial series in u. Non-integer
// p requires a positive leading coefficient.
LeviCivitaNumber lc_pow_rational(const LeviCivitaNumber& a, const Rational& p);

// Taylor expansion of f at the standard part; exact rational coefficients for
// pure infinitesimal arguments of sin/cos/exp. Infinite arguments raise
// NotRepresentable (no series form; callers fall back to the germ model).
LeviCivitaNumber lc_elementary(FnTag f, const LeviCivitaNumber& a);

// Total order: sign of a-b is the sign of its leading coefficient.
Ordering lc_compare(const LeviCivitaNumber& a, const LeviCivitaNumber& b);
int lc_sign(const LeviCivitaNumber& a);

// Equality modulo the common cutoff.
bool lc_equal(const LeviCivitaNumber& a, const LeviCivitaNumber& b);

// Leading exponent as the Cauchy order; DomainError on 0 (order undefined).
ExtOrder lc_order(const LeviCivitaNumber& a);

// Coefficient at exponent 0; DomainError on infinite elements.
Scalar lc_standard_part(const LeviCivitaNumber& a);

// Text form "3 + 5*eps - eps^2", "eps^(3/2)", "2*eps^-1".
std::string lc_to_string(const LeviCivitaNumber& a);
LeviCivitaNumber lc_parse(const std::string& text, const Rational& trunc = Rational(8));

// Expression evaluation backend over the field.
struct LcBackend {
  using Value = LeviCivitaNumber;
  Rational trunc = Rational(8);
  int precision = 15;

  Value from_rational(const Rational& q) const {
    return LeviCivitaNumber::constant(Scalar(q), trunc);
  }
  Value constant(SymConst c) const {
    return LeviCivitaNumber::constant(
        c == SymConst::Pi ? Scalar::pi_value(precision) : Scalar::e_value(precision), trunc);
  }
  Value neg(const Value& v) const { return lc_neg(v); }
  Value add(const Value& a, const Value& b) const { return lc_add(a, b); }
  Value sub(const Value& a, const Value& b) const { return lc_sub(a, b); }
  Value mul(const Value& a, const Value& b) const { return lc_mul(a, b); }
  Value div(const Value& a, const Value& b) const { return lc_div(a, b); }
  Value pow_rational(const Value& v, const Rational& q) const { return lc_pow_rational(v, q); }
  Value pow_general(const Value& base, const Value& expo) const {
    return lc_elementary(FnTag::Exp, lc_mul(expo, lc_elementary(FnTag::Log, base)));
  }
  Value call(FnTag f, const Value& v) const { return lc_elementary(f, v); }
};

}  // namespace bcalc
