#pragma once

#include <string>
#include <variant>

#include "bcalc/rational.hpp"

namespace bcalc {

enum class Ordering { Less, Equal, Greater };

// Floating value with the number of decimal digits it claims to carry.
// Construction rejects NaN/inf: every Approx in the engine is finite.
struct Approx {
  double value = 0.0;
  int precision_hint = 15;

  Approx() = default;
  Approx(double v, int hint);

  static Approx checked(double v, int hint);
};

// Order of an infinitesimal: a finite rational, or +infinity (e^{-1/i} class).
struct ExtOrder {
  bool infinite = false;
  Rational value;  // meaningful only when !infinite

  static ExtOrder finite(Rational q) { return ExtOrder{false, std::move(q)}; }
  static ExtOrder plus_infinity() { return ExtOrder{true, Rational(0)}; }

  bool operator==(const ExtOrder& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
  std::string str() const { return infinite ? "infinity" : rat_to_string(value); }
};

enum class FnTag { Sin, Cos, Exp, Log, Sqrt, Abs };

const char* fn_name(FnTag f);

// Coefficient domain shared by every backend: exact rational by default,
// approximate real once a transcendental value enters. Mixed arithmetic
// promotes to Approx with the smaller precision hint.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(Rational q) : v_(std::move(q)) {}
  Scalar(Approx a) : v_(a) {}
  explicit Scalar(long long n) : v_(Rational(n)) {}

  static Scalar approx(double v, int hint = 15) { return Scalar(Approx(v, hint)); }
  static Scalar pi_value(int hint = 15);
  static Scalar e_value(int hint = 15);

  bool is_exact() const { return std::holds_alternative<Rational>(v_); }
  bool is_zero() const;
  int sign() const;
  const Rational& rational() const { return std::get<Rational>(v_); }
  const Approx& approx_value() const { return std::get<Approx>(v_); }
  int precision_hint() const { return is_exact() ? 15 : approx_value().precision_hint; }
  double to_double() const;

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;  // DomainError on zero divisor
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  Ordering compare(const Scalar& o) const;
  bool operator==(const Scalar& o) const { return compare(o) == Ordering::Equal; }
  bool operator<(const Scalar& o) const { return compare(o) == Ordering::Less; }

  Scalar abs() const { return sign() < 0 ? -*this : *this; }

  // Decimal string: exact rationals as "p" / "p/q", approximations via
  // shortest round-trip formatting.
  std::string str() const;

 private:
  std::variant<Rational, Approx> v_;
};

// base^e. Exact when representable (integer exponents of modest size,
// extractable roots); otherwise evaluated in double precision.
Scalar scalar_pow(const Scalar& base, const Rational& e);

// Elementary function application with exact special cases (sin 0 = 0,
// exp 0 = 1, log 1 = 0, perfect-square sqrt, ...).
Scalar scalar_fn(FnTag f, const Scalar& x);

// Closed-form derivative of the elementary function at x (sin -> cos(x), ...).
// Abs is rejected: it has no derivative table entry at 0.
Scalar scalar_fn_derivative(FnTag f, const Scalar& x);

std::string format_double(double v);

}  // namespace bcalc
