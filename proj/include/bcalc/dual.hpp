#pragma once

#include "bcalc/eval.hpp"
#include "bcalc/scalar.hpp"

namespace bcalc {

// a + b*delta with delta^2 = 0. First-order infinitesimal ring; the slope
// component carries the derivative through arithmetic.
struct DualNumber {
  Scalar real;
  Scalar slope;

  static DualNumber constant(Scalar a) { return {std::move(a), Scalar(Rational(0))}; }
  static DualNumber variable(Scalar a) { return {std::move(a), Scalar(Rational(1))}; }
};

DualNumber dual_neg(const DualNumber& x);
DualNumber dual_add(const DualNumber& x, const DualNumber& y);
DualNumber dual_sub(const DualNumber& x, const DualNumber& y);
DualNumber dual_mul(const DualNumber& x, const DualNumber& y);
// Conjugate division; DomainError when y.real = 0 (zero divisor).
DualNumber dual_div(const DualNumber& x, const DualNumber& y);
DualNumber dual_pow_rational(const DualNumber& x, const Rational& q);
// f(a + b delta) = f(a) + f'(a) b delta with table-driven f'.
DualNumber dual_elementary(FnTag f, const DualNumber& x);

struct DualBackend {
  using Value = DualNumber;
  int precision = 15;

  Value from_rational(const Rational& q) const { return DualNumber::constant(Scalar(q)); }
  Value constant(SymConst c) const {
    return DualNumber::constant(c == SymConst::Pi ? Scalar::pi_value(precision)
                                                  : Scalar::e_value(precision));
  }
  Value neg(const Value& v) const { return dual_neg(v); }
  Value add(const Value& a, const Value& b) const { return dual_add(a, b); }
  Value sub(const Value& a, const Value& b) const { return dual_sub(a, b); }
  Value mul(const Value& a, const Value& b) const { return dual_mul(a, b); }
  Value div(const Value& a, const Value& b) const { return dual_div(a, b); }
  Value pow_rational(const Value& v, const Rational& q) const { return dual_pow_rational(v, q); }
  Value pow_general(const Value& base, const Value& expo) const {
    if (base.real.sign() <= 0) throw DomainError("general power needs a positive base");
    return dual_elementary(FnTag::Exp, dual_mul(expo, dual_elementary(FnTag::Log, base)));
  }
  Value call(FnTag f, const Value& v) const { return dual_elementary(f, v); }
};

// Slope component of e evaluated at x0 + delta.
Scalar derivative_dual(const ExprPtr& e, const std::string& var, const Scalar& x0,
                       int precision = 15);

}  // namespace bcalc
