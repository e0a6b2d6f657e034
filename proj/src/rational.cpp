#include "bcalc/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace bcalc {

Rational rat_pow_int(const Rational& base, long long e) {
  if (e == 0) return Rational(1);
  if (base == 0) {
    if (e < 0) throw DomainError("0 raised to a negative power");
    return Rational(0);
  }
  bool invert = e < 0;
  unsigned long long k = invert ? static_cast<unsigned long long>(-(e + 1)) + 1ULL
                                : static_cast<unsigned long long>(e);
  Rational acc(1);
  Rational b = base;
  while (k > 0) {
    if (k & 1ULL) acc *= b;
    b *= b;
    k >>= 1;
  }
  if (invert) acc = Rational(1) / acc;
  return acc;
}

BigInt rat_floor(const Rational& q) {
  BigInt n = rat_num(q);
  BigInt d = rat_den(q);
  BigInt t = n / d;
  if (n < 0 && t * d != n) --t;
  return t;
}

std::optional<BigInt> exact_root(const BigInt& x, unsigned k) {
  if (k == 0) return std::nullopt;
  if (k == 1) return x;
  if (x < 0) return std::nullopt;
  if (x == 0 || x == 1) return x;
  // Only tiny bases can have roots of very large index.
  if (k > 4096) return std::nullopt;
  // Newton iteration on integers, then verify.
  BigInt r = BigInt(1) << static_cast<unsigned>(msb(x) / k + 1);
  while (true) {
    BigInt rk1 = pow(r, k - 1);
    BigInt next = ((k - 1) * r * rk1 + x) / (k * rk1);
    if (next >= r) break;
    r = next;
  }
  if (pow(r, k) == x) return r;
  return std::nullopt;
}

std::optional<Rational> exact_pow(const Rational& base, const Rational& e) {
  if (base == 0) {
    if (e <= 0) return std::nullopt;
    return Rational(0);
  }
  BigInt en = rat_num(e);
  BigInt ed = rat_den(e);
  if (ed > 64) {
    // Roots of that index exist only for trivial bases, handled above.
    if (base == 1) return Rational(1);
    return std::nullopt;
  }
  unsigned k = ed.convert_to<unsigned>();
  BigInt n = rat_num(base);
  BigInt d = rat_den(base);
  bool neg = n < 0;
  if (neg) {
    if (k % 2 == 0) return std::nullopt;
    n = -n;
  }
  std::optional<BigInt> rn = exact_root(n, k);
  std::optional<BigInt> rd = exact_root(d, k);
  if (!rn || !rd) return std::nullopt;
  Rational root(*rn, *rd);
  if (neg) root = -root;
  // Guard against absurd exact blow-ups: |en| * digits stays modest.
  if (abs(en) > 4096) return std::nullopt;
  return rat_pow_int(root, en.convert_to<long long>());
}

double rat_to_double(const Rational& q) { return q.convert_to<double>(); }

std::string rat_to_string(const Rational& q) {
  std::string s = rat_num(q).str();
  if (!rat_is_integer(q)) {
    s += "/";
    s += rat_den(q).str();
  }
  return s;
}

std::optional<Rational> rat_from_decimal(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  BigInt mantissa = 0;
  long long frac_digits = 0;
  bool any_digit = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    mantissa = mantissa * 10 + (text[i] - '0');
    any_digit = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      mantissa = mantissa * 10 + (text[i] - '0');
      ++frac_digits;
      any_digit = true;
    }
  }
  if (!any_digit) return std::nullopt;
  long long exp10 = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      eneg = text[i] == '-';
      ++i;
    }
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      exp10 = exp10 * 10 + (text[i] - '0');
      if (exp10 > 100000) return std::nullopt;
    }
    if (eneg) exp10 = -exp10;
  }
  if (i != text.size()) return std::nullopt;
  Rational value(mantissa);
  long long shift = exp10 - frac_digits;
  if (shift != 0) value *= rat_pow_int(Rational(10), shift);
  if (neg) value = -value;
  return value;
}

}  // namespace bcalc
