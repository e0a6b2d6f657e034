#include "bcalc/normal_form.hpp"

#include <algorithm>
#include <cmath>

namespace bcalc {

namespace {

constexpr int kSeriesTerms = 8;     // asymptotic expansion depth
constexpr std::size_t kTermCap = 512;
constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;

std::vector<std::pair<BigInt, int>> factor_integer(BigInt x) {
  std::vector<std::pair<BigInt, int>> out;
  auto take = [&](const BigInt& d) {
    int m = 0;
    while (x % d == 0) {
      x /= d;
      ++m;
    }
    if (m > 0) out.emplace_back(d, m);
  };
  take(2);
  take(3);
  for (BigInt d = 5; d <= 65536 && d * d <= x; d += 6) {
    take(d);
    take(d + 2);
  }
  if (x > 1) out.emplace_back(x, 1);
  return out;
}

}  // namespace

NfCoeff NfCoeff::from_rational(const Rational& q) {
  NfCoeff c;
  c.rat = q;
  return c;
}

bool NfCoeff::same_shape(const NfCoeff& o) const {
  return radicals == o.radicals && pi_pow == o.pi_pow && e_pow == o.e_pow;
}

namespace {

// Folds base^exp into coeff with the radical exponent renormalized to (0,1).
void push_radical(NfCoeff& c, const BigInt& base, const Rational& exp) {
  if (exp == 0 || base == 1) return;
  BigInt whole = rat_floor(exp);
  Rational frac = exp - Rational(whole);
  if (whole != 0) {
    if (abs(whole) > 4096) throw NotRepresentable("radical exponent too large");
    c.rat *= rat_pow_int(Rational(base), whole.convert_to<long long>());
  }
  if (frac == 0) return;
  auto it = std::lower_bound(c.radicals.begin(), c.radicals.end(), base,
                             [](const auto& r, const BigInt& b) { return r.first < b; });
  if (it != c.radicals.end() && it->first == base) {
    Rational g = it->second + frac;
    c.radicals.erase(it);
    push_radical(c, base, g);
  } else {
    c.radicals.insert(it, {base, frac});
  }
}

int compare_shapes(const NfCoeff& a, const NfCoeff& b) {
  if (a.pi_pow != b.pi_pow) return a.pi_pow < b.pi_pow ? -1 : 1;
  if (a.e_pow != b.e_pow) return a.e_pow < b.e_pow ? -1 : 1;
  if (a.radicals != b.radicals) return a.radicals < b.radicals ? -1 : 1;
  return 0;
}

}  // namespace

NfCoeff NfCoeff::mul(const NfCoeff& o) const {
  NfCoeff c;
  c.rat = rat * o.rat;
  c.pi_pow = pi_pow + o.pi_pow;
  c.e_pow = e_pow + o.e_pow;
  c.radicals = radicals;
  for (const auto& [base, exp] : o.radicals) push_radical(c, base, exp);
  return c;
}

NfCoeff NfCoeff::negated() const {
  NfCoeff c = *this;
  c.rat = -c.rat;
  return c;
}

std::optional<NfCoeff> NfCoeff::pow(const Rational& k) const {
  if (k == 0) return from_rational(Rational(1));
  NfCoeff c;
  if (rat < 0) {
    if (!rat_is_integer(k)) return std::nullopt;
    c.rat = rat_num(k) % 2 == 0 ? Rational(1) : Rational(-1);
  }
  BigInt num = abs(rat_num(rat));
  BigInt den = rat_den(rat);
  for (const auto& [p, a] : factor_integer(num)) push_radical(c, p, Rational(a) * k);
  for (const auto& [p, a] : factor_integer(den)) push_radical(c, p, Rational(-a) * k);
  for (const auto& [base, exp] : radicals) push_radical(c, base, exp * k);
  c.pi_pow = pi_pow * k;
  c.e_pow = e_pow * k;
  return c;
}

std::optional<Rational> NfCoeff::as_rational() const {
  if (!radicals.empty() || pi_pow != 0 || e_pow != 0) return std::nullopt;
  return rat;
}

std::optional<Rational> NfCoeff::as_pi_multiple() const {
  if (!radicals.empty() || e_pow != 0 || pi_pow != 1) return std::nullopt;
  return rat;
}

std::optional<Rational> NfCoeff::as_e_power() const {
  if (rat != 1 || !radicals.empty() || pi_pow != 0) return std::nullopt;
  return e_pow;
}

double NfCoeff::to_double() const {
  double v = rat_to_double(rat);
  for (const auto& [base, exp] : radicals)
    v *= std::pow(rat_to_double(Rational(base)), rat_to_double(exp));
  if (pi_pow != 0) v *= std::pow(kPi, rat_to_double(pi_pow));
  if (e_pow != 0) v *= std::pow(kE, rat_to_double(e_pow));
  return v;
}

bool key_less(const NfKey& a, const NfKey& b) {
  if (a.exp_rate != b.exp_rate) return a.exp_rate < b.exp_rate;
  if (a.n_pow != b.n_pow) return a.n_pow < b.n_pow;
  return a.log_pow < b.log_pow;
}

namespace {

bool key_leq(const NfKey& a, const NfKey& b) { return !key_less(b, a); }

std::optional<NfKey> max_cutoff(const std::optional<NfKey>& a, const std::optional<NfKey>& b) {
  if (!a) return b;
  if (!b) return a;
  return key_less(*a, *b) ? *b : *a;
}

NormalForm nf_normalize(std::vector<NfTerm> terms, std::optional<NfKey> cutoff) {
  if (cutoff) {
    std::erase_if(terms, [&](const NfTerm& t) { return key_leq(t.key, *cutoff); });
  }
  std::sort(terms.begin(), terms.end(), [](const NfTerm& a, const NfTerm& b) {
    if (!(a.key == b.key)) return key_less(b.key, a.key);  // descending dominance
    return compare_shapes(a.coeff, b.coeff) < 0;
  });
  std::vector<NfTerm> out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().key == t.key && out.back().coeff.same_shape(t.coeff)) {
      out.back().coeff.rat += t.coeff.rat;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const NfTerm& t) { return t.coeff.rat == 0; });
  if (out.size() > kTermCap) throw NotRepresentable("normal form term explosion");
  return {std::move(out), std::move(cutoff)};
}

NormalForm nf_zero() { return {{}, std::nullopt}; }

NormalForm nf_const(NfCoeff c) {
  return {{NfTerm{NfKey{}, std::move(c)}}, std::nullopt};
}

NormalForm nf_one() { return nf_const(NfCoeff::from_rational(Rational(1))); }

NormalForm nf_neg(const NormalForm& a) {
  std::vector<NfTerm> terms;
  terms.reserve(a.terms.size());
  for (const auto& t : a.terms) terms.push_back({t.key, t.coeff.negated()});
  return {std::move(terms), a.cutoff};
}

NormalForm nf_add(const NormalForm& a, const NormalForm& b) {
  std::vector<NfTerm> terms = a.terms;
  terms.insert(terms.end(), b.terms.begin(), b.terms.end());
  return nf_normalize(std::move(terms), max_cutoff(a.cutoff, b.cutoff));
}

NormalForm nf_sub(const NormalForm& a, const NormalForm& b) { return nf_add(a, nf_neg(b)); }

NormalForm nf_mul(const NormalForm& a, const NormalForm& b) {
  if (a.exactly_zero() || b.exactly_zero()) return nf_zero();
  std::vector<NfTerm> terms;
  if (a.terms.size() * b.terms.size() > 4096)
    throw NotRepresentable("normal form product explosion");
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms)
      terms.push_back({ta.key.plus(tb.key), ta.coeff.mul(tb.coeff)});
  std::optional<NfKey> cutoff;
  if (a.cutoff) {
    if (!b.terms.empty()) cutoff = max_cutoff(cutoff, a.cutoff->plus(b.terms.front().key));
    if (b.cutoff) cutoff = max_cutoff(cutoff, a.cutoff->plus(*b.cutoff));
  }
  if (b.cutoff && !a.terms.empty())
    cutoff = max_cutoff(cutoff, b.cutoff->plus(a.terms.front().key));
  return nf_normalize(std::move(terms), cutoff);
}

// The dominant term must be a single shape strictly above the rest.
const NfTerm* strict_dominant(const NormalForm& a) {
  if (a.terms.empty()) return nullptr;
  if (a.terms.size() > 1 && a.terms[1].key == a.terms[0].key) return nullptr;
  return &a.terms[0];
}

std::optional<NormalForm> nf_invert(const NormalForm& b);

// Asymptotic series sum coeff(m) * u^m for null u, m = 0..kSeriesTerms, with
// the truncation recorded. coeff(m) are exact rationals.
template <class CoeffFn>
std::optional<NormalForm> nf_series(const NormalForm& u, CoeffFn coeff) {
  NormalForm acc = nf_zero();
  NormalForm pw = nf_one();
  for (int m = 0; m <= kSeriesTerms; ++m) {
    if (m > 0) {
      pw = nf_mul(pw, u);
      if (pw.exactly_zero()) return acc;
    }
    Rational c = coeff(m);
    if (c != 0) acc = nf_add(acc, nf_mul(nf_const(NfCoeff::from_rational(c)), pw));
  }
  std::optional<NfKey> u_dom;
  if (!u.terms.empty())
    u_dom = u.terms.front().key;
  else if (u.cutoff)
    u_dom = u.cutoff;
  if (!u_dom) return acc;
  NfKey tail = u_dom->scaled(Rational(kSeriesTerms + 1));
  return nf_normalize(std::move(acc.terms), max_cutoff(acc.cutoff, tail));
}

// Splits a = dom * (1 + u) with u null; nullopt when the dominant term is not
// a single strict shape.
struct MonomialSplit {
  NfTerm dom;
  NfCoeff dom_inv;
  NormalForm u;
};

std::optional<MonomialSplit> split_dominant(const NormalForm& a) {
  const NfTerm* dom = strict_dominant(a);
  if (!dom) return std::nullopt;
  std::optional<NfCoeff> inv = dom->coeff.inverse();
  if (!inv) return std::nullopt;
  NormalForm rest = a;
  rest.terms.erase(rest.terms.begin());
  NormalForm dom_inv_nf = {{NfTerm{NfKey{}.plus(dom->key).scaled(Rational(-1)), *inv}},
                           std::nullopt};
  NormalForm u = nf_mul(rest, dom_inv_nf);
  return MonomialSplit{*dom, *inv, std::move(u)};
}

std::optional<NormalForm> nf_invert(const NormalForm& b) {
  if (b.terms.empty()) return std::nullopt;
  auto split = split_dominant(b);
  if (!split) return std::nullopt;
  auto geom = nf_series(nf_neg(split->u), [](int) { return Rational(1); });
  if (!geom) return std::nullopt;
  NormalForm dom_inv = {{NfTerm{split->dom.key.scaled(Rational(-1)), split->dom_inv}},
                        std::nullopt};
  return nf_mul(dom_inv, *geom);
}

std::optional<NormalForm> nf_pow(const NormalForm& a, const Rational& k) {
  if (k == 0) return nf_one();
  if (a.exactly_zero()) {
    if (k < 0) return std::nullopt;
    return nf_zero();
  }
  if (rat_is_integer(k) && abs(rat_num(k)) <= 16) {
    long long e = rat_num(k).convert_to<long long>();
    NormalForm acc = nf_one();
    for (long long i = 0; i < (e < 0 ? -e : e); ++i) acc = nf_mul(acc, a);
    if (e < 0) return nf_invert(acc);
    return acc;
  }
  auto split = split_dominant(a);
  if (!split) return std::nullopt;
  if (split->dom.coeff.sign() < 0) return std::nullopt;  // non-integer power of negative
  std::optional<NfCoeff> dom_pow = split->dom.coeff.pow(k);
  if (!dom_pow) return std::nullopt;
  // Binomial series (1+u)^k.
  Rational binom(1);
  std::vector<Rational> coeffs(kSeriesTerms + 1);
  coeffs[0] = Rational(1);
  for (int m = 1; m <= kSeriesTerms; ++m) {
    binom *= (k - (m - 1)) / m;
    coeffs[m] = binom;
  }
  auto series = nf_series(split->u, [&](int m) { return coeffs[m]; });
  if (!series) return std::nullopt;
  NormalForm dom_nf = {{NfTerm{split->dom.key.scaled(k), *dom_pow}}, std::nullopt};
  return nf_mul(dom_nf, *series);
}

// Exact sin(q*pi) for q with denominator 1, 2, 3, 4, 6; outer nullopt when
// the angle is not in the table, inner nullopt for an exact zero.
std::optional<std::optional<NfCoeff>> sin_of_pi_multiple(const Rational& q) {
  Rational r = q - 2 * Rational(rat_floor(q / 2));  // q mod 2, in [0, 2)
  BigInt den = rat_den(r);
  auto radical_half = [](const BigInt& base, int sign) {
    NfCoeff c = NfCoeff::from_rational(Rational(sign, 2));
    push_radical(c, base, Rational(1, 2));
    return c;
  };
  if (den == 1) return std::optional<NfCoeff>(std::nullopt);  // sin(0), sin(pi)
  int sign = r < 1 ? 1 : -1;
  Rational base = r < 1 ? r : r - 1;  // in (0,1)
  if (den == 2) return std::optional<NfCoeff>(NfCoeff::from_rational(Rational(sign)));
  if (den == 3) return std::optional<NfCoeff>(radical_half(BigInt(3), sign));
  if (den == 4) return std::optional<NfCoeff>(radical_half(BigInt(2), sign));
  if (den == 6) return std::optional<NfCoeff>(NfCoeff::from_rational(Rational(sign, 2)));
  (void)base;
  return std::nullopt;
}

std::optional<std::optional<NfCoeff>> cos_of_pi_multiple(const Rational& q) {
  return sin_of_pi_multiple(q + Rational(1, 2));
}

Rational factorial(int k) {
  Rational f(1);
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::optional<NormalForm> sin_null(const NormalForm& rho) {
  return nf_series(rho, [](int m) {
    if (m % 2 == 0) return Rational(0);
    Rational c = Rational(1) / factorial(m);
    return (m / 2) % 2 == 0 ? c : Rational(-c);
  });
}

std::optional<NormalForm> cos_null(const NormalForm& rho) {
  return nf_series(rho, [](int m) {
    if (m % 2 == 1) return Rational(0);
    Rational c = Rational(1) / factorial(m);
    return (m / 2) % 2 == 0 ? c : Rational(-c);
  });
}

std::optional<NormalForm> exp_null(const NormalForm& rho) {
  return nf_series(rho, [](int m) { return Rational(1) / factorial(m); });
}

std::optional<NormalForm> log1p_null(const NormalForm& w) {
  return nf_series(w, [](int m) {
    if (m == 0) return Rational(0);
    return m % 2 == 1 ? Rational(1, m) : Rational(-1, m);
  });
}

struct GermNormalizer {
  const std::string& var;

  std::optional<NormalForm> run(const ExprPtr& e) {
    return std::visit(
        [&](const auto& node) -> std::optional<NormalForm> {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Expr::Number>) {
            if (node.value == 0) return nf_zero();
            return nf_const(NfCoeff::from_rational(node.value));
          } else if constexpr (std::is_same_v<T, Expr::Const>) {
            NfCoeff c = NfCoeff::from_rational(Rational(1));
            if (node.which == SymConst::Pi)
              c.pi_pow = Rational(1);
            else
              c.e_pow = Rational(1);
            return nf_const(c);
          } else if constexpr (std::is_same_v<T, Expr::Var>) {
            if (node.name != var) return std::nullopt;
            return NormalForm{{NfTerm{NfKey{Rational(0), Rational(1), Rational(0)},
                                      NfCoeff::from_rational(Rational(1))}},
                              std::nullopt};
          } else if constexpr (std::is_same_v<T, Expr::Neg>) {
            auto a = run(node.arg);
            if (!a) return std::nullopt;
            return nf_neg(*a);
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            return binary(node);
          } else {
            return call(node.fn, node.arg);
          }
        },
        e->node);
  }

  std::optional<NormalForm> binary(const Expr::Binary& b) {
    if (b.op == BinOp::Pow) return power(b.lhs, b.rhs);
    auto l = run(b.lhs);
    auto r = run(b.rhs);
    if (!l || !r) return std::nullopt;
    switch (b.op) {
      case BinOp::Add: return nf_add(*l, *r);
      case BinOp::Sub: return nf_sub(*l, *r);
      case BinOp::Mul: return nf_mul(*l, *r);
      case BinOp::Div: {
        auto inv = nf_invert(*r);
        if (!inv) return std::nullopt;
        return nf_mul(*l, *inv);
      }
      default: return std::nullopt;
    }
  }

  std::optional<NormalForm> power(const ExprPtr& base, const ExprPtr& expo) {
    if (std::optional<Rational> k = try_constant_rational(expo)) {
      auto b = run(base);
      if (!b) return std::nullopt;
      return nf_pow(*b, *k);
    }
    // e^u is exp(u); 1^u is 1. Every other variable exponent (notably
    // (-1)^n) is outside the grammar.
    if (const auto* c = std::get_if<Expr::Const>(&base->node)) {
      if (c->which == SymConst::E) {
        auto u = run(expo);
        if (!u) return std::nullopt;
        return exponential(*u);
      }
    }
    if (const auto* n = std::get_if<Expr::Number>(&base->node)) {
      if (n->value == 1) return nf_one();
    }
    return std::nullopt;
  }

  // Splits an argument NF into (even 2k*pi*n drop, phase q*pi, null part);
  // fails outside that shape.
  struct TrigSplit {
    Rational phase_pi;  // constant part as a multiple of pi
    NormalForm rho;     // null remainder
  };

  std::optional<TrigSplit> trig_split(const NormalForm& u) {
    TrigSplit out{Rational(0), nf_zero()};
    std::vector<NfTerm> rho_terms;
    for (const auto& t : u.terms) {
      if (key_less(t.key, NfKey{})) {
        rho_terms.push_back(t);
        continue;
      }
      if (t.key == NfKey{}) {
        if (auto q = t.coeff.as_pi_multiple()) {
          out.phase_pi += *q;
          continue;
        }
        return std::nullopt;  // constant phase not a pi-multiple
      }
      if (t.key == NfKey{Rational(0), Rational(1), Rational(0)}) {
        std::optional<Rational> m = t.coeff.as_pi_multiple();
        if (m && rat_is_integer(*m) && rat_num(*m) % 2 == 0) continue;  // full periods
        return std::nullopt;
      }
      return std::nullopt;  // unbounded non-periodic component
    }
    if (u.cutoff && !key_less(*u.cutoff, NfKey{})) return std::nullopt;
    out.rho = nf_normalize(std::move(rho_terms), u.cutoff);
    return out;
  }

  std::optional<NormalForm> trig(FnTag f, const NormalForm& u) {
    auto split = trig_split(u);
    if (!split) return std::nullopt;
    auto s = sin_of_pi_multiple(split->phase_pi);
    auto c = cos_of_pi_multiple(split->phase_pi);
    if (!s || !c) return std::nullopt;
    auto sr = sin_null(split->rho);
    auto cr = cos_null(split->rho);
    if (!sr || !cr) return std::nullopt;
    // sin(phi + rho) = sin phi cos rho + cos phi sin rho; cos analogous.
    NormalForm first = nf_zero();
    NormalForm second = nf_zero();
    if (f == FnTag::Sin) {
      if (*s) first = nf_mul(nf_const(**s), *cr);
      if (*c) second = nf_mul(nf_const(**c), *sr);
      return nf_add(first, second);
    }
    if (*c) first = nf_mul(nf_const(**c), *cr);
    if (*s) second = nf_mul(nf_const(**s), *sr);
    return nf_sub(first, second);
  }

  std::optional<NormalForm> exponential(const NormalForm& u) {
    Rational rate(0), npow(0), econst(0);
    std::vector<NfTerm> rho_terms;
    for (const auto& t : u.terms) {
      if (key_less(t.key, NfKey{})) {
        rho_terms.push_back(t);
        continue;
      }
      std::optional<Rational> c = t.coeff.as_rational();
      if (!c) return std::nullopt;
      if (t.key == NfKey{}) {
        econst += *c;
      } else if (t.key == NfKey{Rational(0), Rational(1), Rational(0)}) {
        rate += *c;
      } else if (t.key == NfKey{Rational(0), Rational(0), Rational(1)}) {
        npow += *c;  // exp(a log n) = n^a
      } else {
        return std::nullopt;  // exp of n^(1/2) etc: outside the grammar
      }
    }
    if (u.cutoff && !key_less(*u.cutoff, NfKey{})) return std::nullopt;
    auto tail = exp_null(nf_normalize(std::move(rho_terms), u.cutoff));
    if (!tail) return std::nullopt;
    NfCoeff c = NfCoeff::from_rational(Rational(1));
    c.e_pow = econst;
    NormalForm mono = {{NfTerm{NfKey{rate, npow, Rational(0)}, c}}, std::nullopt};
    return nf_mul(mono, *tail);
  }

  std::optional<NormalForm> logarithm(const NormalForm& u) {
    auto split = split_dominant(u);
    if (!split || split->dom.coeff.sign() <= 0) return std::nullopt;
    if (split->dom.key.log_pow != 0) return std::nullopt;  // log(log n) not in grammar
    std::optional<Rational> b = split->dom.coeff.as_e_power();
    if (!b) return std::nullopt;
    auto tail = log1p_null(split->u);
    if (!tail) return std::nullopt;
    std::vector<NfTerm> terms;
    if (split->dom.key.n_pow != 0)
      terms.push_back({NfKey{Rational(0), Rational(0), Rational(1)},
                       NfCoeff::from_rational(split->dom.key.n_pow)});
    if (split->dom.key.exp_rate != 0)
      terms.push_back({NfKey{Rational(0), Rational(1), Rational(0)},
                       NfCoeff::from_rational(split->dom.key.exp_rate)});
    if (*b != 0) terms.push_back({NfKey{}, NfCoeff::from_rational(*b)});
    return nf_add(nf_normalize(std::move(terms), std::nullopt), *tail);
  }

  std::optional<NormalForm> call(FnTag f, const ExprPtr& arg) {
    auto u = run(arg);
    if (!u) return std::nullopt;
    switch (f) {
      case FnTag::Sin:
      case FnTag::Cos:
        return trig(f, *u);
      case FnTag::Exp:
        return exponential(*u);
      case FnTag::Log:
        return logarithm(*u);
      case FnTag::Sqrt:
        return nf_pow(*u, Rational(1, 2));
      case FnTag::Abs: {
        std::optional<int> s = u->eventual_sign();
        if (!s) return std::nullopt;
        return *s < 0 ? nf_neg(*u) : *u;
      }
    }
    return std::nullopt;
  }
};

// Sign of a same-key group of shapes; exact for a single shape, numerically
// decided with a wide relative margin otherwise (a zero crossing of distinct
// pi/e/radical shapes with rational weights does not occur for exact inputs).
std::optional<int> group_sign(const std::vector<NfTerm>& terms, std::size_t begin,
                              std::size_t end) {
  if (end - begin == 1) return terms[begin].coeff.sign();
  double sum = 0.0, mag = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    double v = terms[i].coeff.to_double();
    sum += v;
    mag += std::abs(v);
  }
  if (!std::isfinite(sum) || !std::isfinite(mag)) return std::nullopt;
  if (std::abs(sum) > 1e-9 * mag) return sum > 0 ? 1 : -1;
  return std::nullopt;
}

}  // namespace

std::optional<int> NormalForm::eventual_sign() const {
  if (terms.empty()) {
    if (!cutoff) return 0;
    return std::nullopt;
  }
  std::size_t end = 1;
  while (end < terms.size() && terms[end].key == terms[0].key) ++end;
  return group_sign(terms, 0, end);
}

std::optional<bool> NormalForm::tends_to_zero() const {
  if (terms.empty()) {
    if (!cutoff) return true;
    return key_less(*cutoff, NfKey{}) ? std::optional<bool>(true) : std::nullopt;
  }
  const NfKey& dom = terms.front().key;
  if (key_less(dom, NfKey{})) return true;
  // Dominant group at or above constant order: null only if it cancels, and
  // exact cancellation across shapes does not happen (see group_sign).
  std::size_t end = 1;
  while (end < terms.size() && terms[end].key == dom) ++end;
  std::optional<int> s = group_sign(terms, 0, end);
  if (!s) return std::nullopt;
  return false;
}

std::optional<bool> NormalForm::diverges() const {
  if (terms.empty()) return cutoff ? std::nullopt : std::optional<bool>(false);
  const NfKey& dom = terms.front().key;
  if (!key_less(NfKey{}, dom)) return false;
  std::size_t end = 1;
  while (end < terms.size() && terms[end].key == dom) ++end;
  std::optional<int> s = group_sign(terms, 0, end);
  if (!s) return std::nullopt;
  return true;
}

std::optional<Scalar> NormalForm::finite_limit() const {
  if (!terms.empty() && key_less(NfKey{}, terms.front().key)) return std::nullopt;
  if (cutoff && !key_less(*cutoff, NfKey{})) return std::nullopt;
  // Collect the constant group.
  Scalar value = Scalar(Rational(0));
  bool exact = true;
  for (const auto& t : terms) {
    if (!(t.key == NfKey{})) continue;
    if (std::optional<Rational> q = t.coeff.as_rational()) {
      value += Scalar(*q);
    } else {
      exact = false;
      value += Scalar::approx(t.coeff.to_double());
    }
  }
  (void)exact;
  return value;
}

std::optional<NormalForm> normalize_germ(const ExprPtr& body, const std::string& var) {
  try {
    GermNormalizer norm{var};
    return norm.run(body);
  } catch (const CalcError&) {
    return std::nullopt;  // explosion guards: fall back to sampling
  }
}

std::string nf_to_string(const NormalForm& nf) {
  if (nf.terms.empty()) return nf.cutoff ? "O(...)" : "0";
  std::string out;
  for (std::size_t i = 0; i < nf.terms.size(); ++i) {
    const NfTerm& t = nf.terms[i];
    if (i) out += " + ";
    out += rat_to_string(t.coeff.rat);
    for (const auto& [base, exp] : t.coeff.radicals)
      out += "*" + base.str() + "^(" + rat_to_string(exp) + ")";
    if (t.coeff.pi_pow != 0) out += "*pi^(" + rat_to_string(t.coeff.pi_pow) + ")";
    if (t.coeff.e_pow != 0) out += "*e^(" + rat_to_string(t.coeff.e_pow) + ")";
    if (t.key.n_pow != 0) out += "*n^(" + rat_to_string(t.key.n_pow) + ")";
    if (t.key.log_pow != 0) out += "*log(n)^(" + rat_to_string(t.key.log_pow) + ")";
    if (t.key.exp_rate != 0) out += "*exp(" + rat_to_string(t.key.exp_rate) + "*n)";
  }
  if (nf.cutoff) out += " + O(<cutoff>)";
  return out;
}

}  // namespace bcalc
