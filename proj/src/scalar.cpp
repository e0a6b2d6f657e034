#include "bcalc/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace bcalc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;

// Exact operands carry unbounded precision; only approximations limit it.
int min_hint(const Scalar& a, const Scalar& b) {
  if (a.is_exact()) return b.precision_hint();
  if (b.is_exact()) return a.precision_hint();
  return a.precision_hint() < b.precision_hint() ? a.precision_hint() : b.precision_hint();
}

}  // namespace

Approx::Approx(double v, int hint) : value(v), precision_hint(hint < 15 ? 15 : hint) {
  if (!std::isfinite(v)) throw NotRepresentable("approximate value overflowed double range");
}

Approx Approx::checked(double v, int hint) { return Approx(v, hint); }

const char* fn_name(FnTag f) {
  switch (f) {
    case FnTag::Sin: return "sin";
    case FnTag::Cos: return "cos";
    case FnTag::Exp: return "exp";
    case FnTag::Log: return "log";
    case FnTag::Sqrt: return "sqrt";
    case FnTag::Abs: return "abs";
  }
  return "?";
}

Scalar Scalar::pi_value(int hint) { return Scalar(Approx(kPi, hint)); }
Scalar Scalar::e_value(int hint) { return Scalar(Approx(kE, hint)); }

bool Scalar::is_zero() const {
  return is_exact() ? rational() == 0 : approx_value().value == 0.0;
}

int Scalar::sign() const {
  if (is_exact()) return rat_sign(rational());
  double v = approx_value().value;
  return v > 0 ? 1 : v < 0 ? -1 : 0;
}

double Scalar::to_double() const {
  return is_exact() ? rat_to_double(rational()) : approx_value().value;
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-rational()));
  return Scalar(Approx(-approx_value().value, approx_value().precision_hint));
}

Scalar Scalar::operator+(const Scalar& o) const {
  if (is_exact() && o.is_exact()) return Scalar(Rational(rational() + o.rational()));
  return Scalar(Approx(to_double() + o.to_double(), min_hint(*this, o)));
}

Scalar Scalar::operator-(const Scalar& o) const {
  if (is_exact() && o.is_exact()) return Scalar(Rational(rational() - o.rational()));
  return Scalar(Approx(to_double() - o.to_double(), min_hint(*this, o)));
}

Scalar Scalar::operator*(const Scalar& o) const {
  if (is_exact() && o.is_exact()) return Scalar(Rational(rational() * o.rational()));
  return Scalar(Approx(to_double() * o.to_double(), min_hint(*this, o)));
}

Scalar Scalar::operator/(const Scalar& o) const {
  if (o.is_zero()) throw DomainError("division by zero");
  if (is_exact() && o.is_exact()) return Scalar(Rational(rational() / o.rational()));
  return Scalar(Approx(to_double() / o.to_double(), min_hint(*this, o)));
}

Ordering Scalar::compare(const Scalar& o) const {
  if (is_exact() && o.is_exact()) {
    if (rational() < o.rational()) return Ordering::Less;
    if (rational() == o.rational()) return Ordering::Equal;
    return Ordering::Greater;
  }
  double a = to_double();
  double b = o.to_double();
  if (a < b) return Ordering::Less;
  if (a > b) return Ordering::Greater;
  return Ordering::Equal;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string Scalar::str() const {
  if (is_exact()) return rat_to_string(rational());
  return format_double(approx_value().value);
}

Scalar scalar_pow(const Scalar& base, const Rational& e) {
  if (rat_is_integer(e) && rat_num(e) == 0) return Scalar(Rational(1));
  if (base.is_zero()) {
    if (e < 0) throw DomainError("0 raised to a negative power");
    return Scalar(Rational(0));
  }
  if (base.is_exact()) {
    const Rational& b = base.rational();
    if (b == 1) return Scalar(Rational(1));
    if (rat_is_integer(e)) {
      BigInt k = rat_num(e);
      if (b == -1) return Scalar(Rational(k % 2 == 0 ? 1 : -1));
      if (abs(k) <= 64) return Scalar(rat_pow_int(b, k.convert_to<long long>()));
    } else if (std::optional<Rational> exact = exact_pow(b, e)) {
      return Scalar(std::move(*exact));
    }
    if (b < 0 && !rat_is_integer(e) && rat_den(e) % 2 == 0)
      throw DomainError("even root of a negative value");
  } else if (base.sign() < 0 && !rat_is_integer(e)) {
    if (rat_den(e) % 2 == 0) throw DomainError("even root of a negative value");
  }
  double b = base.to_double();
  double r;
  if (b < 0) {
    // Odd root of a negative base (exponent num/den both odd-compatible).
    double mag = std::pow(-b, rat_to_double(e));
    bool odd_num = rat_num(e) % 2 != 0;
    r = odd_num ? -mag : mag;
  } else {
    r = std::pow(b, rat_to_double(e));
  }
  if (!std::isfinite(r)) throw NotRepresentable("power overflowed double range");
  return Scalar(Approx(r, base.precision_hint()));
}

Scalar scalar_fn(FnTag f, const Scalar& x) {
  switch (f) {
    case FnTag::Abs:
      return x.abs();
    case FnTag::Sin:
      if (x.is_zero()) return Scalar(Rational(0));
      return Scalar(Approx(std::sin(x.to_double()), x.precision_hint()));
    case FnTag::Cos:
      if (x.is_zero()) return Scalar(Rational(1));
      return Scalar(Approx(std::cos(x.to_double()), x.precision_hint()));
    case FnTag::Exp:
      if (x.is_zero()) return Scalar(Rational(1));
      return Scalar(Approx(std::exp(x.to_double()), x.precision_hint()));
    case FnTag::Log: {
      if (x.sign() <= 0)
        throw DomainError(std::string("log of non-positive value ") + x.str());
      if (x.is_exact() && x.rational() == 1) return Scalar(Rational(0));
      return Scalar(Approx(std::log(x.to_double()), x.precision_hint()));
    }
    case FnTag::Sqrt: {
      if (x.sign() < 0) throw DomainError(std::string("sqrt of negative value ") + x.str());
      return scalar_pow(x, Rational(1, 2));
    }
  }
  throw CalcError("unreachable function tag");
}

Scalar scalar_fn_derivative(FnTag f, const Scalar& x) {
  switch (f) {
    case FnTag::Sin: return scalar_fn(FnTag::Cos, x);
    case FnTag::Cos: return -scalar_fn(FnTag::Sin, x);
    case FnTag::Exp: return scalar_fn(FnTag::Exp, x);
    case FnTag::Log:
      if (x.sign() <= 0) throw DomainError("log' at non-positive value");
      return Scalar(Rational(1)) / x;
    case FnTag::Sqrt: {
      if (x.sign() <= 0) throw DomainError("sqrt' at non-positive value");
      return Scalar(Rational(1)) / (Scalar(Rational(2)) * scalar_fn(FnTag::Sqrt, x));
    }
    case FnTag::Abs:
      throw NotRepresentable("abs has no derivative table entry");
  }
  throw CalcError("unreachable function tag");
}

}  // namespace bcalc
