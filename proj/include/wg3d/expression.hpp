// A small arithmetic-expression evaluator over the variables x, y, z with
// symbolic differentiation. Supports +,-,*,/,^, parentheses, the constant
// pi, and the functions sin, cos, tan, exp, log, sqrt.
#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace wg3d {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Call };

  Kind kind;
  double value = 0.0;       // Const
  int var = 0;              // Var: 0=x, 1=y, 2=z
  std::string func;         // Call
  ExprPtr lhs, rhs;

  static ExprPtr constant(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Const;
    e->value = v;
    return e;
  }
  static ExprPtr variable(int v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->var = v;
    return e;
  }
  static ExprPtr binary(Kind k, ExprPtr a, ExprPtr b) {
    // Constant folding keeps derivative trees small.
    if (a->kind == Kind::Const && b->kind == Kind::Const) {
      switch (k) {
        case Kind::Add: return constant(a->value + b->value);
        case Kind::Sub: return constant(a->value - b->value);
        case Kind::Mul: return constant(a->value * b->value);
        case Kind::Div: return constant(a->value / b->value);
        case Kind::Pow: return constant(std::pow(a->value, b->value));
        default: break;
      }
    }
    if (k == Kind::Add && is_zero(a)) return b;
    if ((k == Kind::Add || k == Kind::Sub) && is_zero(b)) return a;
    if (k == Kind::Mul && (is_zero(a) || is_zero(b))) return constant(0.0);
    if (k == Kind::Mul && is_one(a)) return b;
    if (k == Kind::Mul && is_one(b)) return a;
    if (k == Kind::Div && is_zero(a)) return constant(0.0);
    if (k == Kind::Div && is_one(b)) return a;
    if (k == Kind::Pow && is_one(b)) return a;
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
  }
  static ExprPtr negate(ExprPtr a) {
    if (a->kind == Kind::Const) return constant(-a->value);
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Neg;
    e->lhs = std::move(a);
    return e;
  }
  static ExprPtr call(std::string name, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Call;
    e->func = std::move(name);
    e->lhs = std::move(a);
    return e;
  }

  double eval(double x, double y, double z) const {
    switch (kind) {
      case Kind::Const: return value;
      case Kind::Var: return var == 0 ? x : (var == 1 ? y : z);
      case Kind::Add: return lhs->eval(x, y, z) + rhs->eval(x, y, z);
      case Kind::Sub: return lhs->eval(x, y, z) - rhs->eval(x, y, z);
      case Kind::Mul: return lhs->eval(x, y, z) * rhs->eval(x, y, z);
      case Kind::Div: return lhs->eval(x, y, z) / rhs->eval(x, y, z);
      case Kind::Pow: return std::pow(lhs->eval(x, y, z), rhs->eval(x, y, z));
      case Kind::Neg: return -lhs->eval(x, y, z);
      case Kind::Call: {
        double a = lhs->eval(x, y, z);
        if (func == "sin") return std::sin(a);
        if (func == "cos") return std::cos(a);
        if (func == "tan") return std::tan(a);
        if (func == "exp") return std::exp(a);
        if (func == "log") return std::log(a);
        if (func == "sqrt") return std::sqrt(a);
        throw std::invalid_argument("expression: unknown function " + func);
      }
    }
    return 0.0;
  }

  /// Symbolic derivative with respect to variable d (0=x, 1=y, 2=z).
  ExprPtr diff(int d) const {
    switch (kind) {
      case Kind::Const: return constant(0.0);
      case Kind::Var: return constant(var == d ? 1.0 : 0.0);
      case Kind::Add: return binary(Kind::Add, lhs->diff(d), rhs->diff(d));
      case Kind::Sub: return binary(Kind::Sub, lhs->diff(d), rhs->diff(d));
      case Kind::Mul:
        return binary(Kind::Add, binary(Kind::Mul, lhs->diff(d), rhs),
                      binary(Kind::Mul, lhs, rhs->diff(d)));
      case Kind::Div:
        return binary(Kind::Div,
                      binary(Kind::Sub, binary(Kind::Mul, lhs->diff(d), rhs),
                             binary(Kind::Mul, lhs, rhs->diff(d))),
                      binary(Kind::Mul, rhs, rhs));
      case Kind::Pow: {
        if (rhs->kind != Kind::Const)
          throw std::invalid_argument("expression: only constant exponents are differentiable");
        // d/dx u^n = n u^(n-1) u'
        return binary(Kind::Mul,
                      binary(Kind::Mul, constant(rhs->value),
                             binary(Kind::Pow, lhs, constant(rhs->value - 1.0))),
                      lhs->diff(d));
      }
      case Kind::Neg: return negate(lhs->diff(d));
      case Kind::Call: {
        ExprPtr outer;
        if (func == "sin") outer = call("cos", lhs);
        else if (func == "cos") outer = negate(call("sin", lhs));
        else if (func == "tan")
          outer = binary(Kind::Div, constant(1.0),
                         binary(Kind::Pow, call("cos", lhs), constant(2.0)));
        else if (func == "exp") outer = call("exp", lhs);
        else if (func == "log") outer = binary(Kind::Div, constant(1.0), lhs);
        else if (func == "sqrt")
          outer = binary(Kind::Div, constant(0.5), call("sqrt", lhs));
        else throw std::invalid_argument("expression: unknown function " + func);
        return binary(Kind::Mul, outer, lhs->diff(d));
      }
    }
    return constant(0.0);
  }

  bool is_constant_zero() const { return kind == Kind::Const && value == 0.0; }

 private:
  static bool is_zero(const ExprPtr& e) { return e->kind == Kind::Const && e->value == 0.0; }
  static bool is_one(const ExprPtr& e) { return e->kind == Kind::Const && e->value == 1.0; }
};

/// Recursive-descent parser. Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?
///   atom   := number | name | name '(' expr ')' | '(' expr ')'
class ExprParser {
 public:
  static ExprPtr parse(const std::string& text) {
    ExprParser p(text);
    ExprPtr e = p.expr();
    p.skip_ws();
    if (p.pos_ != p.text_.size())
      throw std::invalid_argument("expression: trailing input at '" +
                                  p.text_.substr(p.pos_) + "'");
    return e;
  }

 private:
  explicit ExprParser(const std::string& t) : text_(t) {}

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      skip_ws();
      if (accept('+')) e = Expr::binary(Expr::Kind::Add, e, term());
      else if (accept('-')) e = Expr::binary(Expr::Kind::Sub, e, term());
      else return e;
    }
  }
  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      skip_ws();
      if (accept('*')) e = Expr::binary(Expr::Kind::Mul, e, unary());
      else if (accept('/')) e = Expr::binary(Expr::Kind::Div, e, unary());
      else return e;
    }
  }
  ExprPtr unary() {
    skip_ws();
    if (accept('-')) return Expr::negate(unary());
    return power();
  }
  ExprPtr power() {
    ExprPtr base = atom();
    skip_ws();
    if (accept('^')) return Expr::binary(Expr::Kind::Pow, base, unary());
    return base;
  }
  ExprPtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw std::invalid_argument("expression: unexpected end");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(text_.substr(pos_), &used);
      pos_ += used;
      return Expr::constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalnum(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      skip_ws();
      if (accept('(')) {
        ExprPtr arg = expr();
        skip_ws();
        if (!accept(')')) throw std::invalid_argument("expression: missing ')'");
        return Expr::call(name, arg);
      }
      if (name == "x") return Expr::variable(0);
      if (name == "y") return Expr::variable(1);
      if (name == "z") return Expr::variable(2);
      if (name == "pi") return Expr::constant(M_PI);
      throw std::invalid_argument("expression: unknown name '" + name + "'");
    }
    if (accept('(')) {
      ExprPtr e = expr();
      skip_ws();
      if (!accept(')')) throw std::invalid_argument("expression: missing ')'");
      return e;
    }
    throw std::invalid_argument(std::string("expression: unexpected character '") + c + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace wg3d
