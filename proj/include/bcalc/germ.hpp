#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcalc/eval.hpp"
#include "bcalc/normal_form.hpp"

namespace bcalc {

enum class Truth { True, False, Unknown };
enum class EvidenceGrade { Symbolic, Numeric };

const char* truth_name(Truth t);
const char* grade_name(EvidenceGrade g);

// Ascending sampling horizons for the numeric tier.
struct HorizonSchedule {
  std::vector<long long> horizons;

  static HorizonSchedule defaults();  // 2^10, 2^14, ..., 2^46
  bool valid() const;
};

struct BoolVerdict {
  Truth value = Truth::Unknown;
  EvidenceGrade grade = EvidenceGrade::Numeric;
  std::string note;
};

struct CompareVerdict {
  std::optional<Ordering> order;  // nullopt = Unknown
  EvidenceGrade grade = EvidenceGrade::Numeric;
  std::string note;
};

// A variable quantity: an expression in the index n modulo eventual equality.
// Finitely many index overrides never change any verdict (Frechet filter).
class Germ {
 public:
  static Germ from_expr(ExprPtr body, const std::string& var = "n");
  static Germ from_text(const std::string& text);
  static Germ zero();

  const ExprPtr& body() const { return body_; }
  bool oscillatory() const { return oscillatory_; }

  Germ with_override(long long index, Scalar value) const;
  long long max_override_index() const;

  // Term-by-term evaluation; DomainError at finitely many indices is
  // legitimate (callers skip those).
  Scalar sample(const Rational& n) const;
  Scalar sample(long long n) const { return sample(Rational(n)); }

 private:
  ExprPtr body_;
  bool oscillatory_ = false;
  std::vector<std::pair<long long, Scalar>> overrides_;
};

struct GermConfig {
  HorizonSchedule schedule = HorizonSchedule::defaults();
  int precision = 15;
  Rational r_max = Rational(64);
};

// Tier 1 dominance comparison when the difference normalizes, else sampled
// evidence (consistent sign + monotone |difference| over the last horizons).
CompareVerdict germ_compare(const Germ& g1, const Germ& g2, const GermConfig& cfg = {});

// |g| eventually below every positive rational.
BoolVerdict germ_is_null(const Germ& g, const GermConfig& cfg = {});

struct LimitResult {
  enum class Kind { Value, PlusInfinity, MinusInfinity, Unknown } kind = Kind::Unknown;
  Scalar value;  // for Kind::Value
  EvidenceGrade grade = EvidenceGrade::Numeric;
  std::string str() const;
};

LimitResult germ_limit(const Germ& g, const GermConfig& cfg = {});

struct CauchyOrderResult {
  enum class Kind { Finite, PlusInfinity, Unknown } kind = Kind::Unknown;
  Rational order;                 // exact for symbolic verdicts
  EvidenceGrade grade = EvidenceGrade::Numeric;
  bool regular = true;            // false when the ratio at r = order has no limit
  Rational bisection_width = Rational(0);
  std::string note;
};

// Cauchy's order of the infinitesimal f(i) as i -> 0+: the unique a with
// f/i^r null for r < a and unbounded for r > a. Works on |f(1/n)| germs;
// symbolic dominance answers are exact, and the [0, r_max] bisection at
// tolerance 2^-20 cross-checks them.
CauchyOrderResult cauchy_order(const ExprPtr& f_of_i, const GermConfig& cfg = {});

// Numeric trend tests shared with the sum-theorem diagonal: verdicts from a
// short series of magnitudes at growing horizons. Exposed for reuse/testing.
struct SamplePoint {
  long long horizon = 0;
  std::optional<Scalar> value;  // nullopt: evaluation failed at this index
  bool overflow = false;
};

Truth trend_is_null(const std::vector<SamplePoint>& points, int window = 4);
std::optional<Ordering> trend_sign(const std::vector<SamplePoint>& points, int window = 4);
std::optional<Scalar> trend_stabilized(const std::vector<SamplePoint>& points, int window = 4);

// Two samples per horizon (h and h+1): power-of-two schedules alone would
// never see parity effects such as (-1)^n.
std::vector<SamplePoint> sample_germ(const Germ& g, const HorizonSchedule& schedule);

}  // namespace bcalc
