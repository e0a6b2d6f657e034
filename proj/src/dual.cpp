#include "bcalc/dual.hpp"

namespace bcalc {

DualNumber dual_neg(const DualNumber& x) { return {-x.real, -x.slope}; }

DualNumber dual_add(const DualNumber& x, const DualNumber& y) {
  return {x.real + y.real, x.slope + y.slope};
}

DualNumber dual_sub(const DualNumber& x, const DualNumber& y) {
  return {x.real - y.real, x.slope - y.slope};
}

DualNumber dual_mul(const DualNumber& x, const DualNumber& y) {
  // (a + b d)(c + e d) = ac + (ae + bc) d
  return {x.real * y.real, x.real * y.slope + x.slope * y.real};
}

DualNumber dual_div(const DualNumber& x, const DualNumber& y) {
  if (y.real.is_zero()) throw DomainError("division by a zero-divisor dual number");
  return {x.real / y.real, (x.slope * y.real - x.real * y.slope) / (y.real * y.real)};
}

DualNumber dual_pow_rational(const DualNumber& x, const Rational& q) {
  if (q == 0) return DualNumber::constant(Scalar(Rational(1)));
  if (x.real.is_zero()) {
    if (q < 0) throw DomainError("0 raised to a negative power");
    if (q == 1) return x;
    if (q > 1) return DualNumber::constant(Scalar(Rational(0)));
    throw DomainError("fractional power at 0 has no slope");
  }
  Scalar value = scalar_pow(x.real, q);
  // d/dx x^q = q x^{q-1}; reuse the computed power when exact division works.
  Scalar derivative = Scalar(Rational(rat_num(q), rat_den(q))) * scalar_pow(x.real, q - 1);
  return {value, derivative * x.slope};
}

DualNumber dual_elementary(FnTag f, const DualNumber& x) {
  if (f == FnTag::Abs) {
    int s = x.real.sign();
    if (s == 0) throw NotRepresentable("abs is not differentiable at 0");
    return s > 0 ? x : dual_neg(x);
  }
  Scalar value = scalar_fn(f, x.real);
  Scalar derivative = scalar_fn_derivative(f, x.real);
  return {value, derivative * x.slope};
}

Scalar derivative_dual(const ExprPtr& e, const std::string& var, const Scalar& x0, int precision) {
  DualNumber y = eval(e, DualBackend{precision}, var, DualNumber::variable(x0));
  return y.slope;
}

}  // namespace bcalc
