#include "bcalc/expr.hpp"

#include <cctype>
#include <functional>

namespace bcalc {

namespace ex {

ExprPtr num(Rational v) { return std::make_shared<Expr>(Expr{Expr::Number{std::move(v)}}); }
ExprPtr num(long long v) { return num(Rational(v)); }
ExprPtr constant(SymConst c) { return std::make_shared<Expr>(Expr{Expr::Const{c}}); }
ExprPtr var(std::string name) { return std::make_shared<Expr>(Expr{Expr::Var{std::move(name)}}); }
ExprPtr neg(ExprPtr a) { return std::make_shared<Expr>(Expr{Expr::Neg{std::move(a)}}); }
ExprPtr bin(BinOp op, ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr{Expr::Binary{op, std::move(l), std::move(r)}});
}
ExprPtr add(ExprPtr l, ExprPtr r) { return bin(BinOp::Add, std::move(l), std::move(r)); }
ExprPtr sub(ExprPtr l, ExprPtr r) { return bin(BinOp::Sub, std::move(l), std::move(r)); }
ExprPtr mul(ExprPtr l, ExprPtr r) { return bin(BinOp::Mul, std::move(l), std::move(r)); }
ExprPtr div(ExprPtr l, ExprPtr r) { return bin(BinOp::Div, std::move(l), std::move(r)); }
ExprPtr pow(ExprPtr l, ExprPtr r) { return bin(BinOp::Pow, std::move(l), std::move(r)); }
ExprPtr call(FnTag f, ExprPtr a) { return std::make_shared<Expr>(Expr{Expr::Call{f, std::move(a)}}); }

}  // namespace ex

namespace {

struct Token {
  enum Kind { Number, Ident, Op, LParen, RParen, End } kind;
  std::string text;
  Rational value;  // for Number
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Token::End, "", Rational(0), start};
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = pos_;
      while (j < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[j])) || text_[j] == '.'))
        ++j;
      // exponent suffix: 1e-3 / 2.5E+10
      if (j < text_.size() && (text_[j] == 'e' || text_[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
        if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
          ++k;
          while (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) ++k;
          j = k;
        }
      }
      std::string lit = text_.substr(pos_, j - pos_);
      std::optional<Rational> v = rat_from_decimal(lit);
      if (!v) throw ParseError(start, "a numeric literal");
      pos_ = j;
      return {Token::Number, lit, *v, start};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = pos_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
        ++j;
      std::string id = text_.substr(pos_, j - pos_);
      pos_ = j;
      return {Token::Ident, id, Rational(0), start};
    }
    if (c == '(') {
      ++pos_;
      return {Token::LParen, "(", Rational(0), start};
    }
    if (c == ')') {
      ++pos_;
      return {Token::RParen, ")", Rational(0), start};
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      ++pos_;
      return {Token::Op, std::string(1, c), Rational(0), start};
    }
    throw ParseError(start, "an operator, literal, or identifier");
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

std::optional<FnTag> fn_from_name(const std::string& id) {
  if (id == "sin") return FnTag::Sin;
  if (id == "cos") return FnTag::Cos;
  if (id == "exp") return FnTag::Exp;
  if (id == "log") return FnTag::Log;
  if (id == "sqrt") return FnTag::Sqrt;
  if (id == "abs") return FnTag::Abs;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { advance(); }

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    expect(Token::End, "end of input");
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  void expect(Token::Kind k, const char* what) {
    if (tok_.kind != k) throw ParseError(tok_.offset, what);
    advance();
  }

  bool eat_op(const char* op) {
    if (tok_.kind == Token::Op && tok_.text == op) {
      advance();
      return true;
    }
    return false;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_product();
    while (tok_.kind == Token::Op && (tok_.text == "+" || tok_.text == "-")) {
      BinOp op = tok_.text == "+" ? BinOp::Add : BinOp::Sub;
      advance();
      lhs = ex::bin(op, lhs, parse_product());
    }
    return lhs;
  }

  ExprPtr parse_product() {
    ExprPtr lhs = parse_unary();
    while (tok_.kind == Token::Op && (tok_.text == "*" || tok_.text == "/")) {
      BinOp op = tok_.text == "*" ? BinOp::Mul : BinOp::Div;
      advance();
      ExprPtr rhs = parse_unary();
      // "p/q" over integer literals is an exact rational literal.
      if (op == BinOp::Div) {
        const auto* ln = std::get_if<Expr::Number>(&lhs->node);
        const auto* rn = std::get_if<Expr::Number>(&rhs->node);
        if (ln && rn && rat_is_integer(ln->value) && rat_is_integer(rn->value) &&
            rn->value != 0) {
          lhs = ex::num(Rational(ln->value / rn->value));
          continue;
        }
      }
      lhs = ex::bin(op, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (eat_op("-")) {
      ExprPtr arg = parse_unary();
      // "-12" is the literal -12, so negative literals round-trip.
      if (const auto* n = std::get_if<Expr::Number>(&arg->node)) return ex::num(Rational(-n->value));
      return ex::neg(arg);
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (eat_op("^")) {
      // Right-associative; exponent may carry its own sign: x^-2.
      ExprPtr expo = parse_unary();
      if (std::optional<Rational> c = try_constant_rational(expo)) expo = ex::num(*c);
      return ex::pow(base, expo);
    }
    return base;
  }

  ExprPtr parse_atom() {
    switch (tok_.kind) {
      case Token::Number: {
        Rational v = tok_.value;
        advance();
        return ex::num(std::move(v));
      }
      case Token::Ident: {
        std::string id = tok_.text;
        std::size_t off = tok_.offset;
        advance();
        if (tok_.kind == Token::LParen) {
          std::optional<FnTag> f = fn_from_name(id);
          if (!f) throw ParseError(off, "a known function name (sin, cos, exp, log, sqrt, abs)");
          advance();
          ExprPtr arg = parse_sum();
          expect(Token::RParen, "')'");
          return ex::call(*f, arg);
        }
        if (id == "pi") return ex::constant(SymConst::Pi);
        if (id == "e") return ex::constant(SymConst::E);
        if (fn_from_name(id)) throw ParseError(off, "'(' after function name");
        return ex::var(id);
      }
      case Token::LParen: {
        advance();
        ExprPtr e = parse_sum();
        expect(Token::RParen, "')'");
        if (const auto* n = std::get_if<Expr::Number>(&e->node)) return ex::num(n->value);
        return e;
      }
      default:
        throw ParseError(tok_.offset, "an operand");
    }
  }

  Lexer lexer_;
  Token tok_;
};

void collect_vars(const ExprPtr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          out.insert(node.name);
        } else if constexpr (std::is_same_v<T, Expr::Neg>) {
          collect_vars(node.arg, out);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_vars(node.lhs, out);
          collect_vars(node.rhs, out);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          collect_vars(node.arg, out);
        }
      },
      e->node);
}

int precedence(BinOp op) {
  switch (op) {
    case BinOp::Add:
    case BinOp::Sub: return 1;
    case BinOp::Mul:
    case BinOp::Div: return 2;
    case BinOp::Pow: return 4;
  }
  return 0;
}

// Printer precedence: 3 is unary minus, sitting between '*' and '^'.
void print_node(const ExprPtr& e, int parent_prec, bool right_side, std::string& out);

void print_binary(const Expr::Binary& b, int parent_prec, bool right_side, std::string& out) {
  int prec = precedence(b.op);
  bool need_parens = prec < parent_prec || (prec == parent_prec && right_side);
  if (b.op == BinOp::Pow) need_parens = prec < parent_prec || (prec == parent_prec && !right_side);
  if (need_parens) out += "(";
  const char* sym = b.op == BinOp::Add   ? "+"
                    : b.op == BinOp::Sub ? "-"
                    : b.op == BinOp::Mul ? "*"
                    : b.op == BinOp::Div ? "/"
                                         : "^";
  print_node(b.lhs, prec, false, out);
  out += sym;
  print_node(b.rhs, prec, true, out);
  if (need_parens) out += ")";
}

void print_node(const ExprPtr& e, int parent_prec, bool right_side, std::string& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Number>) {
          // "1/2" reparses as an exact literal on the left of * or /, but
          // needs parentheses on the right and under ^ or unary minus.
          bool need_parens = (node.value < 0 && parent_prec > 0) ||
                             (!rat_is_integer(node.value) &&
                              (parent_prec >= 3 || (parent_prec == 2 && right_side)));
          if (need_parens) out += "(";
          out += rat_to_string(node.value);
          if (need_parens) out += ")";
        } else if constexpr (std::is_same_v<T, Expr::Const>) {
          out += node.which == SymConst::Pi ? "pi" : "e";
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          out += node.name;
        } else if constexpr (std::is_same_v<T, Expr::Neg>) {
          bool need_parens = parent_prec > 3;
          if (need_parens) out += "(";
          out += "-";
          print_node(node.arg, 3, true, out);
          if (need_parens) out += ")";
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          print_binary(node, parent_prec, right_side, out);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          out += fn_name(node.fn);
          out += "(";
          print_node(node.arg, 0, false, out);
          out += ")";
        }
      },
      e->node);
}

}  // namespace

ExprPtr parse_expr(const std::string& text, const std::set<std::string>& allowed) {
  Parser parser(text);
  ExprPtr e = parser.parse();
  std::set<std::string> vars = free_variables(e);
  if (allowed.empty()) {
    if (vars.size() > 1) {
      std::string list;
      for (const auto& v : vars) list += (list.empty() ? "" : ", ") + v;
      throw UsageError("expression must have a single free variable, found: " + list);
    }
  } else {
    for (const auto& v : vars) {
      if (!allowed.count(v))
        throw UsageError("unexpected variable '" + v + "' in expression '" + text + "'");
    }
  }
  return e;
}

std::string to_string(const ExprPtr& e) {
  std::string out;
  print_node(e, 0, false, out);
  return out;
}

std::set<std::string> free_variables(const ExprPtr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  if (const auto* n = std::get_if<Expr::Number>(&a->node))
    return n->value == std::get<Expr::Number>(b->node).value;
  if (const auto* c = std::get_if<Expr::Const>(&a->node))
    return c->which == std::get<Expr::Const>(b->node).which;
  if (const auto* v = std::get_if<Expr::Var>(&a->node))
    return v->name == std::get<Expr::Var>(b->node).name;
  if (const auto* u = std::get_if<Expr::Neg>(&a->node))
    return structurally_equal(u->arg, std::get<Expr::Neg>(b->node).arg);
  if (const auto* bb = std::get_if<Expr::Binary>(&a->node)) {
    const auto& ob = std::get<Expr::Binary>(b->node);
    return bb->op == ob.op && structurally_equal(bb->lhs, ob.lhs) &&
           structurally_equal(bb->rhs, ob.rhs);
  }
  const auto& ca = std::get<Expr::Call>(a->node);
  const auto& cb = std::get<Expr::Call>(b->node);
  return ca.fn == cb.fn && structurally_equal(ca.arg, cb.arg);
}

ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& replacement) {
  return std::visit(
      [&](const auto& node) -> ExprPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          return node.name == var ? replacement : e;
        } else if constexpr (std::is_same_v<T, Expr::Neg>) {
          ExprPtr a = substitute(node.arg, var, replacement);
          return a == node.arg ? e : ex::neg(a);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          ExprPtr l = substitute(node.lhs, var, replacement);
          ExprPtr r = substitute(node.rhs, var, replacement);
          return (l == node.lhs && r == node.rhs) ? e : ex::bin(node.op, l, r);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          ExprPtr a = substitute(node.arg, var, replacement);
          return a == node.arg ? e : ex::call(node.fn, a);
        } else {
          return e;
        }
      },
      e->node);
}

std::optional<Rational> try_constant_rational(const ExprPtr& e) {
  return std::visit(
      [&](const auto& node) -> std::optional<Rational> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Number>) {
          return node.value;
        } else if constexpr (std::is_same_v<T, Expr::Neg>) {
          if (auto v = try_constant_rational(node.arg)) return Rational(-*v);
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          auto l = try_constant_rational(node.lhs);
          auto r = try_constant_rational(node.rhs);
          if (!l || !r) return std::nullopt;
          switch (node.op) {
            case BinOp::Add: return Rational(*l + *r);
            case BinOp::Sub: return Rational(*l - *r);
            case BinOp::Mul: return Rational(*l * *r);
            case BinOp::Div:
              if (*r == 0) return std::nullopt;
              return Rational(*l / *r);
            case BinOp::Pow: {
              if (!rat_is_integer(*r) || abs(rat_num(*r)) > 64) return std::nullopt;
              if (*l == 0 && *r < 0) return std::nullopt;
              BigInt k = rat_num(*r);
              return rat_pow_int(*l, k.convert_to<long long>());
            }
          }
          return std::nullopt;
        } else {
          return std::nullopt;
        }
      },
      e->node);
}

}  // namespace bcalc
