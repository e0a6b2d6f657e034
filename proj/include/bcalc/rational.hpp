#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

#include "bcalc/errors.hpp"

namespace bcalc {

// Exact arbitrary-precision arithmetic. cpp_rational keeps values canonical:
// denominator > 0, gcd(|num|, den) = 1, zero is 0/1.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& q) { return numerator(q); }
inline BigInt rat_den(const Rational& q) { return denominator(q); }

inline bool rat_is_integer(const Rational& q) { return rat_den(q) == 1; }

inline int rat_sign(const Rational& q) { return q.sign(); }

Rational rat_pow_int(const Rational& base, long long e);

// Floor of a rational as a big integer (round toward -inf).
BigInt rat_floor(const Rational& q);

// Exact k-th root of a non-negative integer, if one exists.
std::optional<BigInt> exact_root(const BigInt& x, unsigned k);

// base^(p/q) as an exact rational, when the roots exist. Negative bases
// are allowed only for odd root indices.
std::optional<Rational> exact_pow(const Rational& base, const Rational& e);

// May overflow to +-inf for huge values; never NaN for finite rationals.
double rat_to_double(const Rational& q);

// "p" for integers, "p/q" otherwise.
std::string rat_to_string(const Rational& q);

// Parses "123", "-4", "3.25", "1e-3" style literals exactly. Returns nullopt
// on malformed input.
std::optional<Rational> rat_from_decimal(const std::string& text);

}  // namespace bcalc
