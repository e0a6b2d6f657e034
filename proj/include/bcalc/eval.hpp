#pragma once

#include <concepts>

#include "bcalc/expr.hpp"

namespace bcalc {

// A scalar backend interprets the AST node kinds over its own value type.
template <class B>
concept EvalBackend = requires(const B& b, const typename B::Value& v, const Rational& q, FnTag f) {
  typename B::Value;
  { b.from_rational(q) } -> std::convertible_to<typename B::Value>;
  { b.constant(SymConst::Pi) } -> std::convertible_to<typename B::Value>;
  { b.neg(v) } -> std::convertible_to<typename B::Value>;
  { b.add(v, v) } -> std::convertible_to<typename B::Value>;
  { b.sub(v, v) } -> std::convertible_to<typename B::Value>;
  { b.mul(v, v) } -> std::convertible_to<typename B::Value>;
  { b.div(v, v) } -> std::convertible_to<typename B::Value>;
  { b.pow_rational(v, q) } -> std::convertible_to<typename B::Value>;
  { b.pow_general(v, v) } -> std::convertible_to<typename B::Value>;
  { b.call(f, v) } -> std::convertible_to<typename B::Value>;
};

// Structural recursion; backend errors (DomainError, NotRepresentable)
// propagate unchanged. Constant-rational exponents take the exact
// pow_rational route, anything else goes through pow_general.
template <EvalBackend B>
typename B::Value eval(const ExprPtr& e, const B& backend, const std::string& var,
                       const typename B::Value& x) {
  using V = typename B::Value;
  return std::visit(
      [&](const auto& node) -> V {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Number>) {
          return backend.from_rational(node.value);
        } else if constexpr (std::is_same_v<T, Expr::Const>) {
          return backend.constant(node.which);
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          if (node.name != var)
            throw UsageError("unbound variable '" + node.name + "' during evaluation");
          return x;
        } else if constexpr (std::is_same_v<T, Expr::Neg>) {
          return backend.neg(eval(node.arg, backend, var, x));
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          if (node.op == BinOp::Pow) {
            if (std::optional<Rational> q = try_constant_rational(node.rhs))
              return backend.pow_rational(eval(node.lhs, backend, var, x), *q);
            return backend.pow_general(eval(node.lhs, backend, var, x),
                                       eval(node.rhs, backend, var, x));
          }
          V l = eval(node.lhs, backend, var, x);
          V r = eval(node.rhs, backend, var, x);
          switch (node.op) {
            case BinOp::Add: return backend.add(l, r);
            case BinOp::Sub: return backend.sub(l, r);
            case BinOp::Mul: return backend.mul(l, r);
            case BinOp::Div: return backend.div(l, r);
            default: break;
          }
          throw CalcError("unreachable binary op");
        } else {
          return backend.call(node.fn, eval(node.arg, backend, var, x));
        }
      },
      e->node);
}

// Plain scalar semantics: exact rationals until a transcendental value or an
// oversized power forces an approximation. pi/e materialize as Approx here.
struct ScalarBackend {
  using Value = Scalar;
  int precision = 15;

  Value from_rational(const Rational& q) const { return Scalar(q); }
  Value constant(SymConst c) const {
    return c == SymConst::Pi ? Scalar::pi_value(precision) : Scalar::e_value(precision);
  }
  Value neg(const Value& v) const { return -v; }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value div(const Value& a, const Value& b) const { return a / b; }
  Value pow_rational(const Value& base, const Rational& q) const { return scalar_pow(base, q); }
  Value pow_general(const Value& base, const Value& expo) const {
    if (expo.is_exact() && rat_is_integer(expo.rational())) return scalar_pow(base, expo.rational());
    if (base.sign() <= 0)
      throw DomainError("general power needs a positive base");
    return scalar_fn(FnTag::Exp, expo * scalar_fn(FnTag::Log, base));
  }
  Value call(FnTag f, const Value& a) const { return scalar_fn(f, a); }
};

inline Scalar eval_scalar(const ExprPtr& e, const std::string& var, const Scalar& x,
                          int precision = 15) {
  return eval(e, ScalarBackend{precision}, var, x);
}

// Multi-variable evaluation (series terms f(k, x) and similar).
template <EvalBackend B>
typename B::Value eval_bindings(const ExprPtr& e, const B& backend,
                                const std::map<std::string, typename B::Value>& bindings) {
  using V = typename B::Value;
  return std::visit(
      [&](const auto& node) -> V {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Number>) {
          return backend.from_rational(node.value);
        } else if constexpr (std::is_same_v<T, Expr::Const>) {
          return backend.constant(node.which);
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          auto it = bindings.find(node.name);
          if (it == bindings.end())
            throw UsageError("unbound variable '" + node.name + "' during evaluation");
          return it->second;
        } else if constexpr (std::is_same_v<T, Expr::Neg>) {
          return backend.neg(eval_bindings(node.arg, backend, bindings));
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          if (node.op == BinOp::Pow) {
            if (std::optional<Rational> q = try_constant_rational(node.rhs))
              return backend.pow_rational(eval_bindings(node.lhs, backend, bindings), *q);
            return backend.pow_general(eval_bindings(node.lhs, backend, bindings),
                                       eval_bindings(node.rhs, backend, bindings));
          }
          V l = eval_bindings(node.lhs, backend, bindings);
          V r = eval_bindings(node.rhs, backend, bindings);
          switch (node.op) {
            case BinOp::Add: return backend.add(l, r);
            case BinOp::Sub: return backend.sub(l, r);
            case BinOp::Mul: return backend.mul(l, r);
            case BinOp::Div: return backend.div(l, r);
            default: break;
          }
          throw CalcError("unreachable binary op");
        } else {
          return backend.call(node.fn, eval_bindings(node.arg, backend, bindings));
        }
      },
      e->node);
}

}  // namespace bcalc
