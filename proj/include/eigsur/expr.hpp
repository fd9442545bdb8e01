// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>

namespace eigsur {

class ExprError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Immutable expression tree over the coefficient grammar:
///   literals, parameters w1..wd, + - * / ^int, sin cos exp sqrt abs, unary minus.
/// Nodes are shared; trees are safe to evaluate concurrently.
class Expr {
public:
  enum class Kind { Number, Param, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt, Abs };

  using Ptr = std::shared_ptr<const Expr>;

  Kind kind() const { return kind_; }
  double number() const { return value_; }
  int paramIndex() const { return param_; }  // 1-based
  int exponent() const { return exponent_; }
  const Ptr& left() const { return left_; }
  const Ptr& right() const { return right_; }

  // Smart constructors fold constants and drop algebraic no-ops (0*x, x+0, 1*x, x^1).
  static Ptr number(double v);
  static Ptr param(int index);
  static Ptr neg(Ptr a);
  static Ptr add(Ptr a, Ptr b);
  static Ptr sub(Ptr a, Ptr b);
  static Ptr mul(Ptr a, Ptr b);
  static Ptr div(Ptr a, Ptr b);
  static Ptr pow(Ptr a, int exponent);
  static Ptr fn(Kind k, Ptr a);

  double eval(std::span<const double> omega) const;

  /// Exact symbolic derivative with respect to parameter j (1-based).
  /// Differentiating through abs is an error.
  Ptr diff(int j) const;

  std::string print() const;

  bool isNumber(double v) const { return kind_ == Kind::Number && value_ == v; }

private:
  friend struct ExprBuilder;
  Expr(Kind k) : kind_(k) {}

  Kind kind_;
  double value_ = 0.0;
  int param_ = 0;
  int exponent_ = 0;
  Ptr left_, right_;
};

/// Parse `text` against the coefficient grammar. Parameter indices must be in 1..d.
/// Throws ExprError with a character position on malformed input.
Expr::Ptr parseExpr(const std::string& text, int d);

}  // namespace eigsur
