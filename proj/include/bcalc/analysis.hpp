#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcalc/dual.hpp"
#include "bcalc/germ.hpp"
#include "bcalc/levi_civita.hpp"

namespace bcalc {

// Interval with rational endpoints; an absent endpoint is infinite.
struct DomainSpec {
  std::optional<Rational> lower;
  std::optional<Rational> upper;
  bool lower_open = true;
  bool upper_open = true;

  // "(0,1)", "[0,1]", "(0,inf)", "(-inf,inf)".
  static DomainSpec parse(const std::string& text);
  std::string str() const;
  bool contains(const Rational& x, bool closure = false) const;
};

struct AnalysisConfig {
  Rational trunc = Rational(8);
  int precision = 15;
  GermConfig germ;
};

// f'(x0) = st(dy/dx) with a nilpotent-free series increment, checked from
// both sides. An infinite quotient or mismatched one-sided standard parts
// reports non-differentiability evidence instead of a value.
struct DerivativeResult {
  enum class Kind { Value, NonDifferentiable } kind = Kind::Value;
  Scalar value;
  std::optional<Scalar> from_above;
  std::optional<Scalar> from_below;
  std::string note;
};

DerivativeResult derivative_st(const ExprPtr& e, const std::string& var, const Scalar& x0,
                               const AnalysisConfig& cfg = {});

struct ProbePoint {
  enum class Kind { Standard, BoundaryInfinitesimal, InfinitePoint } kind = Kind::Standard;
  Rational at;        // Standard: the point; Boundary: the endpoint
  int direction = 1;  // Boundary: +1 approaches from above; Infinite: sign of the end

  static ProbePoint standard(Rational x0) { return {Kind::Standard, std::move(x0), 0}; }
  static ProbePoint boundary(Rational a, int dir) {
    return {Kind::BoundaryInfinitesimal, std::move(a), dir};
  }
  static ProbePoint infinite(int dir) { return {Kind::InfinitePoint, Rational(0), dir}; }
  std::string str() const;
};

struct WitnessPair {
  std::string x_text;   // x_n as an expression in n
  std::string xp_text;  // the infinitely close partner x'_n
  Germ gap;             // f(x_n) - f(x'_n)
  std::string family;   // oscillation / infinite-shift / boundary-shrink
};

struct MicroVerdict {
  enum class Kind { Microcontinuous, Refuted, Unknown } kind = Kind::Unknown;
  ProbePoint probe;
  std::optional<ExtOrder> delta_order;  // standard probes: order of the increment
  std::optional<WitnessPair> witness;   // refutations
  LimitResult gap_limit;                // limit of |gap|
  std::string note;
};

// Standard probes certify via the series backend (increment order >= 1 after
// the classical order-0 check); germ probes run the witness-pair families and
// refute only on a symbolically certified non-null gap.
MicroVerdict microcontinuity_at(const ExprPtr& e, const std::string& var, const ProbePoint& p,
                                const DomainSpec& dom, const AnalysisConfig& cfg = {});

// Re-samples the witness gap at a float-safe horizon (trig phases larger than
// ~2^26 lose the gap in double rounding).
std::optional<double> resample_gap(const MicroVerdict& v, const AnalysisConfig& cfg = {});

struct UniformReport {
  enum class Kind { UniformOnProbes, NotUniform, Unknown } verdict = Kind::Unknown;
  std::vector<MicroVerdict> probes;
  std::optional<std::size_t> refuting_probe;  // index into probes
  std::string note;
};

// Pointwise layer (standard grid) plus the uniform layer (every admissible
// boundary/infinite germ probe). Positive verdicts are evidence, not proof.
UniformReport classify_uniform(const ExprPtr& e, const std::string& var, const DomainSpec& dom,
                               int grid_size, const AnalysisConfig& cfg = {});

// ---- Cauchy 1821-vs-1853 sum theorem diagnostics ----

struct SumThmConfig {
  std::vector<long long> horizons = {16, 32, 64, 128, 256};
  double tail_tolerance = 1e-9;
  long long cap_multiplier = 10000;  // K(n) <= cap * n
  int grid_size = 5;
  DomainSpec domain;  // pointwise layer; defaults to (0,1)
  int precision = 15;

  SumThmConfig() { domain = DomainSpec::parse("(0,1)"); }
};

struct DiagonalRow {
  long long n = 0;
  double x = 0;          // x_seq sampled at n
  double remainder = 0;  // period-smoothed tail sum
  long long k_stop = 0;
  bool converged = false;
};

struct PointwiseRow {
  double x = 0;
  Truth converges = Truth::Unknown;
  double sum = 0;
};

struct SumTheoremReport {
  std::vector<DiagonalRow> rows;
  Truth diagonal_null = Truth::Unknown;
  std::optional<double> diagonal_limit;
  std::vector<PointwiseRow> pointwise;
  Truth verdict1821 = Truth::Unknown;  // convergence at standard points
  Truth verdict1853 = Truth::Unknown;  // the "toujours" layer: diagonal included
  bool tail_flagged = false;
  std::string note;
};

// term is an expression in k and x; x_seq the variable quantity substituted
// for x along the diagonal.
SumTheoremReport sum_theorem_diagonal(const ExprPtr& term, const Germ& x_seq,
                                      const SumThmConfig& cfg = {});

// ---- Euler/de Moivre cosine at an infinite index ----

struct EulerRow {
  int k = 0;
  Scalar t_k;      // de Moivre coefficient sampled at the horizon
  Scalar target;   // v^{2k} / (2k)!
  double error = 0;
};

struct EulerReport {
  std::vector<EulerRow> rows;
  Scalar partial_sum;  // sum (-1)^k T_k, k = 0..k_max
  Scalar cos_v;
  double partial_error = 0;
};

EulerReport euler_cosine(const Scalar& v, int k_max, long long horizon, int precision = 15);

}  // namespace bcalc
