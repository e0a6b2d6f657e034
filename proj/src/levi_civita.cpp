#include "bcalc/levi_civita.hpp"

#include <algorithm>
#include <map>

namespace bcalc {

namespace {

// Safety bound on series loops; hit only by absurd truncation/exponent combos.
constexpr int kMaxSeriesIterations = 20000;

}  // namespace

// Re-truncation to a fixed cutoff (always sound; series loops rely on it to
// terminate, since bare multiplication lets the cutoff grow).
static LeviCivitaNumber lc_with_trunc(const LeviCivitaNumber& a, const Rational& trunc) {
  return lc_normalize(a.terms(), trunc);
}

LeviCivitaNumber lc_normalize(std::vector<LcTerm> terms, Rational trunc) {
  std::sort(terms.begin(), terms.end(),
            [](const LcTerm& a, const LcTerm& b) { return a.exponent < b.exponent; });
  std::vector<LcTerm> out;
  for (auto& t : terms) {
    if (t.exponent >= trunc) continue;
    if (!out.empty() && out.back().exponent == t.exponent) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const LcTerm& t) { return t.coeff.is_zero(); });
  LeviCivitaNumber r(std::move(trunc));
  r.terms_ = std::move(out);
  return r;
}

LeviCivitaNumber LeviCivitaNumber::constant(Scalar c, Rational trunc) {
  return lc_normalize({{Rational(0), std::move(c)}}, std::move(trunc));
}

LeviCivitaNumber LeviCivitaNumber::eps(Rational trunc) {
  return lc_normalize({{Rational(1), Scalar(Rational(1))}}, std::move(trunc));
}

LeviCivitaNumber LeviCivitaNumber::monomial(Scalar c, Rational exponent, Rational trunc) {
  return lc_normalize({{std::move(exponent), std::move(c)}}, std::move(trunc));
}

LeviCivitaNumber LeviCivitaNumber::from_terms(std::vector<Term> terms, Rational trunc) {
  return lc_normalize(std::move(terms), std::move(trunc));
}

const Rational& LeviCivitaNumber::leading_exponent() const {
  if (terms_.empty()) throw DomainError("leading exponent of 0 is undefined");
  return terms_.front().exponent;
}

const Scalar& LeviCivitaNumber::leading_coeff() const {
  if (terms_.empty()) throw DomainError("leading coefficient of 0 is undefined");
  return terms_.front().coeff;
}

LcClass LeviCivitaNumber::classify() const {
  if (terms_.empty()) return LcClass::Zero;
  int s = rat_sign(terms_.front().exponent);
  if (s > 0) return LcClass::Infinitesimal;
  if (s == 0) return LcClass::AppreciableFinite;
  return LcClass::Infinite;
}

Scalar LeviCivitaNumber::coeff_at(const Rational& exponent) const {
  for (const auto& t : terms_) {
    if (t.exponent == exponent) return t.coeff;
    if (t.exponent > exponent) break;
  }
  return Scalar(Rational(0));
}

LeviCivitaNumber lc_neg(const LeviCivitaNumber& a) {
  std::vector<LcTerm> terms;
  terms.reserve(a.terms().size());
  for (const auto& t : a.terms()) terms.push_back({t.exponent, -t.coeff});
  return lc_normalize(std::move(terms), a.trunc());
}

LeviCivitaNumber lc_add(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
  Rational trunc = std::min(a.trunc(), b.trunc());
  std::vector<LcTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return lc_normalize(std::move(terms), std::move(trunc));
}

LeviCivitaNumber lc_sub(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
  return lc_add(a, lc_neg(b));
}

LeviCivitaNumber lc_mul(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
  // Error propagation: a*db + b*da gives validity min(qa+Tb, qb+Ta). This is
  // symmetric under reassociation, so products of triples stay term-exact
  // below the common cutoff even for infinite elements.
  Rational trunc = (a.is_zero() || b.is_zero())
                       ? std::min(a.trunc(), b.trunc())
                       : std::min(a.leading_exponent() + b.trunc(),
                                  b.leading_exponent() + a.trunc());
  // Ascending accumulation keeps coefficient rounding identical to the dual
  // backend's real*slope' + slope*real' order.
  std::map<Rational, Scalar> acc;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      Rational e = ta.exponent + tb.exponent;
      if (e >= trunc) continue;
      auto it = acc.find(e);
      if (it == acc.end()) {
        acc.emplace(std::move(e), ta.coeff * tb.coeff);
      } else {
        it->second += ta.coeff * tb.coeff;
      }
    }
  }
  std::vector<LcTerm> terms;
  terms.reserve(acc.size());
  for (auto& [e, c] : acc) terms.push_back({e, c});
  return lc_normalize(std::move(terms), std::move(trunc));
}

LeviCivitaNumber lc_invert(const LeviCivitaNumber& a) {
  if (a.is_zero()) throw DomainError("inversion of 0");
  const Rational& q = a.leading_exponent();
  const Scalar& c = a.leading_coeff();
  Rational result_trunc = a.trunc() - 2 * q;
  // a = c eps^q (1 + u): split off the leading monomial.
  Rational work_trunc = a.trunc() + (q > 0 ? q : Rational(-q)) + 1;
  std::vector<LcTerm> u_terms;
  bool first = true;
  for (const auto& t : a.terms()) {
    if (first) {
      first = false;
      continue;
    }
    u_terms.push_back({t.exponent - q, t.coeff / c});
  }
  LeviCivitaNumber u = lc_normalize(std::move(u_terms), work_trunc);
  LeviCivitaNumber series = LeviCivitaNumber::constant(Scalar(Rational(1)), work_trunc);
  LeviCivitaNumber power = series;
  LeviCivitaNumber neg_u = lc_neg(u);
  int iterations = 0;
  while (!u.is_zero()) {
    power = lc_with_trunc(lc_mul(power, neg_u), work_trunc);
    if (power.is_zero()) break;
    series = lc_add(series, power);
    if (++iterations > kMaxSeriesIterations)
      throw NotRepresentable("inverse series failed to terminate under truncation");
  }
  std::vector<LcTerm> out;
  Scalar inv_c = Scalar(Rational(1)) / c;
  for (const auto& t : series.terms()) out.push_back({t.exponent - q, t.coeff * inv_c});
  return lc_normalize(std::move(out), std::move(result_trunc));
}

LeviCivitaNumber lc_div(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  return lc_mul(a, lc_invert(b));
}

LeviCivitaNumber lc_pow_rational(const LeviCivitaNumber& a, const Rational& p) {
  if (p == 0) return LeviCivitaNumber::constant(Scalar(Rational(1)), a.trunc());
  if (a.is_zero()) {
    if (p < 0) throw DomainError("0 raised to a negative power");
    return LeviCivitaNumber(a.trunc());
  }
  if (rat_is_integer(p) && abs(rat_num(p)) <= 16) {
    // Small integer powers by repeated multiplication (works for any sign
    // of the leading coefficient).
    long long k = rat_num(p).convert_to<long long>();
    const LeviCivitaNumber& base = a;
    LeviCivitaNumber acc = LeviCivitaNumber::constant(Scalar(Rational(1)), a.trunc());
    for (long long i = 0; i < (k < 0 ? -k : k); ++i) acc = lc_mul(acc, base);
    return k < 0 ? lc_invert(acc) : acc;
  }
  const Rational& q = a.leading_exponent();
  const Scalar& c = a.leading_coeff();
  if (!rat_is_integer(p) && c.sign() <= 0)
    throw DomainError("non-integer power requires a positive leading coefficient");
  Rational shift = (p - 1) * q;
  Rational result_trunc = a.trunc() + (shift < 0 ? shift : Rational(0));
  Rational work_trunc = a.trunc() + (q > 0 ? q : Rational(-q)) + 1;
  std::vector<LcTerm> u_terms;
  bool first = true;
  for (const auto& t : a.terms()) {
    if (first) {
      first = false;
      continue;
    }
    u_terms.push_back({t.exponent - q, t.coeff / c});
  }
  LeviCivitaNumber u = lc_normalize(std::move(u_terms), work_trunc);
  // Binomial series: (1+u)^p = sum C(p,k) u^k with exact rational C(p,k).
  LeviCivitaNumber series = LeviCivitaNumber::constant(Scalar(Rational(1)), work_trunc);
  LeviCivitaNumber power = series;
  Rational binom(1);
  int k = 0;
  while (!u.is_zero()) {
    ++k;
    binom *= (p - (k - 1)) / k;
    power = lc_with_trunc(lc_mul(power, u), work_trunc);
    if (power.is_zero()) break;
    LeviCivitaNumber scaled = lc_mul(power, LeviCivitaNumber::constant(Scalar(binom), work_trunc));
    series = lc_add(series, scaled);
    if (k > kMaxSeriesIterations)
      throw NotRepresentable("binomial series failed to terminate under truncation");
  }
  Scalar cp = scalar_pow(c, p);
  std::vector<LcTerm> out;
  for (const auto& t : series.terms()) out.push_back({t.exponent + q * p, t.coeff * cp});
  return lc_normalize(std::move(out), std::move(result_trunc));
}

namespace {

// f(s + h) = sum f^(k)(s)/k! h^k for the cyclic/closed-form derivative
// families. The caller guarantees h is infinitesimal.
LeviCivitaNumber taylor_apply(FnTag f, const Scalar& s, const LeviCivitaNumber& h) {
  const Rational& trunc = h.trunc();
  auto kth_coeff = [&](int k) -> Scalar {
    switch (f) {
      case FnTag::Exp:
        return scalar_fn(FnTag::Exp, s);  // divided by k! below
      case FnTag::Sin:
        switch (k % 4) {
          case 0: return scalar_fn(FnTag::Sin, s);
          case 1: return scalar_fn(FnTag::Cos, s);
          case 2: return -scalar_fn(FnTag::Sin, s);
          default: return -scalar_fn(FnTag::Cos, s);
        }
      case FnTag::Cos:
        switch (k % 4) {
          case 0: return scalar_fn(FnTag::Cos, s);
          case 1: return -scalar_fn(FnTag::Sin, s);
          case 2: return -scalar_fn(FnTag::Cos, s);
          default: return scalar_fn(FnTag::Sin, s);
        }
      case FnTag::Log:
        // log^(k)(s)/ ... handled separately (k=0 term is log s).
        return Scalar(Rational(0));
      default:
        throw CalcError("taylor_apply: unsupported function");
    }
  };

  LeviCivitaNumber result = LeviCivitaNumber::constant(
      f == FnTag::Log ? scalar_fn(FnTag::Log, s) : kth_coeff(0), trunc);
  LeviCivitaNumber h_pow = LeviCivitaNumber::constant(Scalar(Rational(1)), trunc);
  Rational factorial(1);
  int k = 0;
  while (true) {
    ++k;
    factorial *= k;
    h_pow = lc_with_trunc(lc_mul(h_pow, h), trunc);
    if (h_pow.is_zero()) break;
    Scalar coeff;
    if (f == FnTag::Log) {
      // (-1)^{k-1} (k-1)! / s^k, divided by k! gives (-1)^{k-1}/(k s^k).
      Scalar sk = scalar_pow(s, Rational(k));
      coeff = Scalar(Rational(k % 2 == 1 ? 1 : -1, k)) / sk;
    } else {
      coeff = kth_coeff(k) * Scalar(Rational(1) / factorial);
    }
    result = lc_add(result, lc_mul(h_pow, LeviCivitaNumber::constant(coeff, trunc)));
    if (k > kMaxSeriesIterations)
      throw NotRepresentable("taylor series failed to terminate under truncation");
  }
  return result;
}

}  // namespace

LeviCivitaNumber lc_elementary(FnTag f, const LeviCivitaNumber& a) {
  switch (f) {
    case FnTag::Abs: {
      int s = lc_sign(a);
      return s < 0 ? lc_neg(a) : a;
    }
    case FnTag::Sqrt: {
      if (!a.is_zero() && a.leading_coeff().sign() < 0)
        throw DomainError("sqrt of a negative series element");
      return lc_pow_rational(a, Rational(1, 2));
    }
    default:
      break;
  }
  if (!a.is_finite())
    throw NotRepresentable(std::string(fn_name(f)) +
                           " at an infinite element has no series form");
  Scalar s = a.coeff_at(Rational(0));
  if (f == FnTag::Log && s.sign() <= 0)
    throw DomainError("log requires a positive standard part");
  std::vector<LcTerm> h_terms;
  for (const auto& t : a.terms())
    if (t.exponent > 0) h_terms.push_back(t);
  LeviCivitaNumber h = lc_normalize(std::move(h_terms), a.trunc());
  return taylor_apply(f, s, h);
}

int lc_sign(const LeviCivitaNumber& a) {
  if (a.is_zero()) return 0;
  return a.leading_coeff().sign();
}

Ordering lc_compare(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
  int s = lc_sign(lc_sub(a, b));
  return s < 0 ? Ordering::Less : s > 0 ? Ordering::Greater : Ordering::Equal;
}

bool lc_equal(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
  return lc_compare(a, b) == Ordering::Equal;
}

ExtOrder lc_order(const LeviCivitaNumber& a) {
  if (a.is_zero()) throw DomainError("order of 0 is undefined");
  return ExtOrder::finite(a.leading_exponent());
}

Scalar lc_standard_part(const LeviCivitaNumber& a) {
  if (!a.is_finite())
    throw DomainError("st undefined on infinite elements");
  return a.coeff_at(Rational(0));
}

std::string lc_to_string(const LeviCivitaNumber& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : a.terms()) {
    Scalar c = t.coeff;
    bool negative = c.sign() < 0;
    if (first) {
      if (negative) {
        out += "-";
        c = -c;
      }
    } else {
      out += negative ? " - " : " + ";
      if (negative) c = -c;
    }
    first = false;
    bool unit_coeff = c.is_exact() && c.rational() == 1;
    if (t.exponent == 0) {
      out += c.str();
      continue;
    }
    if (!unit_coeff) {
      std::string cs = c.str();
      if (cs.find('/') != std::string::npos) cs = "(" + cs + ")";
      out += cs + "*";
    }
    out += "eps";
    if (t.exponent != 1) {
      if (rat_is_integer(t.exponent)) {
        out += "^" + rat_to_string(t.exponent);
      } else {
        out += "^(" + rat_to_string(t.exponent) + ")";
      }
    }
  }
  return out;
}

LeviCivitaNumber lc_parse(const std::string& text, const Rational& trunc) {
  ExprPtr e = parse_expr(text, {"eps"});
  return eval(e, LcBackend{trunc}, "eps", LeviCivitaNumber::eps(trunc));
}

}  // namespace bcalc
