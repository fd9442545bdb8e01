// SPDX-License-Identifier: Apache-2.0
#include "eigsur/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace eigsur {

struct ExprBuilder {
  static Expr::Ptr make(Expr::Kind k, double v = 0.0, int param = 0, int exponent = 0,
                        Expr::Ptr a = nullptr, Expr::Ptr b = nullptr) {
    auto e = std::shared_ptr<Expr>(new Expr(k));
    e->value_ = v;
    e->param_ = param;
    e->exponent_ = exponent;
    e->left_ = std::move(a);
    e->right_ = std::move(b);
    return e;
  }
};

Expr::Ptr Expr::number(double v) { return ExprBuilder::make(Kind::Number, v); }

Expr::Ptr Expr::param(int index) {
  if (index < 1) throw ExprError("parameter index must be positive");
  return ExprBuilder::make(Kind::Param, 0.0, index);
}

Expr::Ptr Expr::neg(Ptr a) {
  if (a->kind() == Kind::Number) return number(-a->number());
  if (a->kind() == Kind::Neg) return a->left();
  return ExprBuilder::make(Kind::Neg, 0, 0, 0, std::move(a));
}

Expr::Ptr Expr::add(Ptr a, Ptr b) {
  if (a->kind() == Kind::Number && b->kind() == Kind::Number) return number(a->number() + b->number());
  if (a->isNumber(0)) return b;
  if (b->isNumber(0)) return a;
  return ExprBuilder::make(Kind::Add, 0, 0, 0, std::move(a), std::move(b));
}

Expr::Ptr Expr::sub(Ptr a, Ptr b) {
  if (a->kind() == Kind::Number && b->kind() == Kind::Number) return number(a->number() - b->number());
  if (b->isNumber(0)) return a;
  if (a->isNumber(0)) return neg(std::move(b));
  return ExprBuilder::make(Kind::Sub, 0, 0, 0, std::move(a), std::move(b));
}

Expr::Ptr Expr::mul(Ptr a, Ptr b) {
  if (a->kind() == Kind::Number && b->kind() == Kind::Number) return number(a->number() * b->number());
  if (a->isNumber(0) || b->isNumber(0)) return number(0);
  if (a->isNumber(1)) return b;
  if (b->isNumber(1)) return a;
  return ExprBuilder::make(Kind::Mul, 0, 0, 0, std::move(a), std::move(b));
}

Expr::Ptr Expr::div(Ptr a, Ptr b) {
  if (a->kind() == Kind::Number && b->kind() == Kind::Number && b->number() != 0)
    return number(a->number() / b->number());
  if (a->isNumber(0)) return number(0);
  if (b->isNumber(1)) return a;
  return ExprBuilder::make(Kind::Div, 0, 0, 0, std::move(a), std::move(b));
}

Expr::Ptr Expr::pow(Ptr a, int exponent) {
  if (exponent == 0) return number(1);
  if (exponent == 1) return a;
  if (a->kind() == Kind::Number) return number(std::pow(a->number(), exponent));
  return ExprBuilder::make(Kind::Pow, 0, 0, exponent, std::move(a));
}

Expr::Ptr Expr::fn(Kind k, Ptr a) {
  if (a->kind() == Kind::Number) {
    double v = a->number();
    switch (k) {
      case Kind::Sin: return number(std::sin(v));
      case Kind::Cos: return number(std::cos(v));
      case Kind::Exp: return number(std::exp(v));
      case Kind::Sqrt: return number(std::sqrt(v));
      case Kind::Abs: return number(std::abs(v));
      default: break;
    }
  }
  return ExprBuilder::make(k, 0, 0, 0, std::move(a));
}

double Expr::eval(std::span<const double> omega) const {
  double v;
  switch (kind_) {
    case Kind::Number: return value_;
    case Kind::Param:
      if (param_ > static_cast<int>(omega.size()))
        throw ExprError("parameter w" + std::to_string(param_) + " out of range for point");
      return omega[param_ - 1];
    case Kind::Neg: return -left_->eval(omega);
    case Kind::Add: return left_->eval(omega) + right_->eval(omega);
    case Kind::Sub: return left_->eval(omega) - right_->eval(omega);
    case Kind::Mul: return left_->eval(omega) * right_->eval(omega);
    case Kind::Div: {
      double den = right_->eval(omega);
      v = left_->eval(omega) / den;
      break;
    }
    case Kind::Pow: v = std::pow(left_->eval(omega), exponent_); break;
    case Kind::Sin: return std::sin(left_->eval(omega));
    case Kind::Cos: return std::cos(left_->eval(omega));
    case Kind::Exp: v = std::exp(left_->eval(omega)); break;
    case Kind::Sqrt: v = std::sqrt(left_->eval(omega)); break;
    case Kind::Abs: return std::abs(left_->eval(omega));
    default: throw ExprError("corrupt expression node");
  }
  if (!std::isfinite(v)) throw ExprError("non-finite value in subexpression " + print());
  return v;
}

Expr::Ptr Expr::diff(int j) const {
  switch (kind_) {
    case Kind::Number: return number(0);
    case Kind::Param: return number(param_ == j ? 1 : 0);
    case Kind::Neg: return neg(left_->diff(j));
    case Kind::Add: return add(left_->diff(j), right_->diff(j));
    case Kind::Sub: return sub(left_->diff(j), right_->diff(j));
    case Kind::Mul:
      return add(mul(left_->diff(j), right_), mul(left_, right_->diff(j)));
    case Kind::Div:
      // (u/v)' = u'/v - u v'/v^2
      return sub(div(left_->diff(j), right_),
                 div(mul(left_, right_->diff(j)), pow(right_, 2)));
    case Kind::Pow:
      return mul(mul(number(exponent_), pow(left_, exponent_ - 1)), left_->diff(j));
    case Kind::Sin: return mul(fn(Kind::Cos, left_), left_->diff(j));
    case Kind::Cos: return neg(mul(fn(Kind::Sin, left_), left_->diff(j)));
    case Kind::Exp: return mul(fn(Kind::Exp, left_), left_->diff(j));
    case Kind::Sqrt:
      return div(left_->diff(j), mul(number(2), fn(Kind::Sqrt, left_)));
    case Kind::Abs:
      throw ExprError("abs is not differentiable");
    default: throw ExprError("corrupt expression node");
  }
}

std::string Expr::print() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Number: os << value_; break;
    case Kind::Param: os << "w" << param_; break;
    case Kind::Neg: os << "(-" << left_->print() << ")"; break;
    case Kind::Add: os << "(" << left_->print() << "+" << right_->print() << ")"; break;
    case Kind::Sub: os << "(" << left_->print() << "-" << right_->print() << ")"; break;
    case Kind::Mul: os << "(" << left_->print() << "*" << right_->print() << ")"; break;
    case Kind::Div: os << "(" << left_->print() << "/" << right_->print() << ")"; break;
    case Kind::Pow: os << "(" << left_->print() << ")^" << exponent_; break;
    case Kind::Sin: os << "sin(" << left_->print() << ")"; break;
    case Kind::Cos: os << "cos(" << left_->print() << ")"; break;
    case Kind::Exp: os << "exp(" << left_->print() << ")"; break;
    case Kind::Sqrt: os << "sqrt(" << left_->print() << ")"; break;
    case Kind::Abs: os << "abs(" << left_->print() << ")"; break;
  }
  return os.str();
}

namespace {

// Recursive-descent parser for
//   expr := term (('+'|'-') term)*
//   term := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base := number | 'w'integer | func '(' expr ')' | '(' expr ')' | '-' base
class Parser {
public:
  Parser(const std::string& text, int d) : text_(text), d_(d) {}

  Expr::Ptr parse() {
    auto e = parseSum();
    skipWs();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExprError("parse error at position " + std::to_string(pos_) + ": " + msg);
  }

  void skipWs() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skipWs();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) { ++pos_; return true; }
    return false;
  }

  Expr::Ptr parseSum() {
    auto e = parseTerm();
    for (;;) {
      if (consume('+')) e = Expr::add(e, parseTerm());
      else if (consume('-')) e = Expr::sub(e, parseTerm());
      else return e;
    }
  }

  Expr::Ptr parseTerm() {
    auto e = parseFactor();
    for (;;) {
      if (consume('*')) e = Expr::mul(e, parseFactor());
      else if (consume('/')) e = Expr::div(e, parseFactor());
      else return e;
    }
  }

  Expr::Ptr parseFactor() {
    auto e = parseBase();
    if (consume('^')) return Expr::pow(e, parseInteger());
    return e;
  }

  int parseInteger() {
    skipWs();
    bool negative = consume('-');
    skipWs();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected integer exponent");
    int v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      v = 10 * v + (text_[pos_++] - '0');
    return negative ? -v : v;
  }

  Expr::Ptr parseBase() {
    char c = peek();
    if (c == '-') { ++pos_; return Expr::neg(parseBase()); }
    if (c == '(') {
      ++pos_;
      auto e = parseSum();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parseNumber();
    if (std::isalpha(static_cast<unsigned char>(c))) return parseIdentOrFunc();
    fail("unexpected character");
  }

  Expr::Ptr parseNumber() {
    skipWs();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' was not an exponent
      }
    }
    if (pos_ == start) fail("expected number");
    return Expr::number(std::stod(text_.substr(start, pos_ - start)));
  }

  Expr::Ptr parseIdentOrFunc() {
    skipWs();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "w") {
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected parameter index after 'w'");
      int idx = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        idx = 10 * idx + (text_[pos_++] - '0');
      if (idx < 1 || idx > d_)
        throw ExprError("parameter index w" + std::to_string(idx) + " out of range 1.." +
                        std::to_string(d_));
      return Expr::param(idx);
    }
    Expr::Kind k;
    if (name == "sin") k = Expr::Kind::Sin;
    else if (name == "cos") k = Expr::Kind::Cos;
    else if (name == "exp") k = Expr::Kind::Exp;
    else if (name == "sqrt") k = Expr::Kind::Sqrt;
    else if (name == "abs") k = Expr::Kind::Abs;
    else fail("unknown symbol '" + name + "'");
    if (!consume('(')) fail("expected '(' after function name");
    auto arg = parseSum();
    if (!consume(')')) fail("expected ')'");
    return Expr::fn(k, arg);
  }

  const std::string& text_;
  int d_;
  size_t pos_ = 0;
};

}  // namespace

Expr::Ptr parseExpr(const std::string& text, int d) {
  if (d < 1) throw ExprError("parameter count must be at least 1");
  return Parser(text, d).parse();
}

}  // namespace eigsur
