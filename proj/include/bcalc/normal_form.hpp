#pragma once

#include <optional>
#include <vector>

#include "bcalc/expr.hpp"

namespace bcalc {

// Exact positive-structure coefficient: rat * prod(base^g) * pi^a * e^b,
// with every radical exponent g strictly inside (0,1) and bases >= 2 from
// trial-division factoring. Addition merges only identical radical shapes,
// which keeps sums like 2*sqrt(2) + 3*sqrt(2) exact.
struct NfCoeff {
  Rational rat{1};
  std::vector<std::pair<BigInt, Rational>> radicals;
  Rational pi_pow{0};
  Rational e_pow{0};

  static NfCoeff from_rational(const Rational& q);  // q != 0
  bool same_shape(const NfCoeff& o) const;
  NfCoeff mul(const NfCoeff& o) const;
  NfCoeff negated() const;
  // Fails (nullopt) for non-integer powers of negative values.
  std::optional<NfCoeff> pow(const Rational& k) const;
  std::optional<NfCoeff> inverse() const { return pow(Rational(-1)); }
  std::optional<Rational> as_rational() const;
  // c == r * pi for rational r.
  std::optional<Rational> as_pi_multiple() const;
  // c == e^b with rational b (rat == 1, no radicals, no pi).
  std::optional<Rational> as_e_power() const;
  double to_double() const;
  int sign() const { return rat_sign(rat); }
};

// Dominance key, compared lexicographically: exp(r n) beats n^p beats log^q.
struct NfKey {
  Rational exp_rate{0};
  Rational n_pow{0};
  Rational log_pow{0};

  bool operator==(const NfKey& o) const = default;
  bool is_zero() const { return exp_rate == 0 && n_pow == 0 && log_pow == 0; }
  NfKey plus(const NfKey& o) const {
    return {exp_rate + o.exp_rate, n_pow + o.n_pow, log_pow + o.log_pow};
  }
  NfKey scaled(const Rational& k) const { return {exp_rate * k, n_pow * k, log_pow * k}; }
};

bool key_less(const NfKey& a, const NfKey& b);

struct NfTerm {
  NfKey key;
  NfCoeff coeff;
};

// Sum of terms, sorted by descending dominance. `cutoff`, when present, marks
// an asymptotic truncation: contributions with key <= cutoff may be missing
// (they are dominated by every kept term; kept terms at or below the cutoff
// are dropped). Exact inputs with exact operations carry no cutoff.
struct NormalForm {
  std::vector<NfTerm> terms;
  std::optional<NfKey> cutoff;

  bool exactly_zero() const { return terms.empty() && !cutoff; }

  // Sign of the value for all sufficiently large n: +1/-1, 0 for the exact
  // zero germ, nullopt when the dominant group cannot be decided soundly.
  std::optional<int> eventual_sign() const;

  // Decides |value| -> 0. nullopt when the truncation hides the answer.
  std::optional<bool> tends_to_zero() const;

  // True when the value grows without bound (dominant key > 0).
  std::optional<bool> diverges() const;

  // Finite limit as n -> infinity, when every term has key <= 0 and the
  // constant group is intact. Exact when the constant group is rational.
  std::optional<Scalar> finite_limit() const;

  const NfTerm* dominant() const { return terms.empty() ? nullptr : &terms.front(); }
};

// Dominance-grammar normalizer: sums/products/quotients/powers over
// c * n^p * log(n)^q * exp(r n), elementary calls expanded by exact Taylor
// series at null arguments, trig constant-folded through exact 2*pi*n
// periodicity. Returns nullopt for anything outside the grammar (unresolved
// trig, (-1)^n, nested exp, ...): those route to the sampling tier.
std::optional<NormalForm> normalize_germ(const ExprPtr& body, const std::string& var);

std::string nf_to_string(const NormalForm& nf);

}  // namespace bcalc
