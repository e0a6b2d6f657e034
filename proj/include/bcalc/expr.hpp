#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bcalc/scalar.hpp"

namespace bcalc {

enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class SymConst { Pi, E };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable AST for real functions of one named variable. pi and e stay
// symbolic nodes; each backend decides when to materialize them.
struct Expr {
  struct Number {
    Rational value;
  };
  struct Const {
    SymConst which;
  };
  struct Var {
    std::string name;
  };
  struct Neg {
    ExprPtr arg;
  };
  struct Binary {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct Call {
    FnTag fn;
    ExprPtr arg;
  };

  std::variant<Number, Const, Var, Neg, Binary, Call> node;
};

namespace ex {
ExprPtr num(Rational v);
ExprPtr num(long long v);
ExprPtr constant(SymConst c);
ExprPtr var(std::string name);
ExprPtr neg(ExprPtr a);
ExprPtr bin(BinOp op, ExprPtr l, ExprPtr r);
ExprPtr add(ExprPtr l, ExprPtr r);
ExprPtr sub(ExprPtr l, ExprPtr r);
ExprPtr mul(ExprPtr l, ExprPtr r);
ExprPtr div(ExprPtr l, ExprPtr r);
ExprPtr pow(ExprPtr l, ExprPtr r);
ExprPtr call(FnTag f, ExprPtr a);
}  // namespace ex

// Grammar: pow (right-assoc) > unary minus > mul/div > add/sub, parentheses,
// f(arg) application, literals as decimals. An integer-literal / integer-
// literal quotient folds to an exact Rational constant at parse time.
//
// Free variables must be a subset of `allowed`; with the default (empty)
// set, any single identifier is accepted. Throws ParseError / UsageError.
ExprPtr parse_expr(const std::string& text, const std::set<std::string>& allowed = {});

// Round-trip stable: parse_expr(to_string(e)) is structurally equal to e.
std::string to_string(const ExprPtr& e);

std::set<std::string> free_variables(const ExprPtr& e);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// Replaces every occurrence of the named variable.
ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& replacement);

// The exact rational value of a constant subtree (folds +,-,*,/,^, neg),
// or nullopt if the subtree mentions a variable, pi, e, or a function call.
std::optional<Rational> try_constant_rational(const ExprPtr& e);

}  // namespace bcalc
