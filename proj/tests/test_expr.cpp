// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "eigsur/expr.hpp"

using namespace eigsur;

namespace {

double ev(const std::string& text, std::vector<double> w, int d = 2) {
  return parseExpr(text, d)->eval(w);
}

// Random expression trees over the grammar, avoiding abs/div/sqrt so that
// evaluation and differentiation stay well-defined on the sample box.
Expr::Ptr randomExpr(std::mt19937& rng, int depth, int d) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  std::uniform_real_distribution<double> num(-2.0, 2.0);
  std::uniform_int_distribution<int> par(1, d);
  switch (pick(rng)) {
    case 0: return Expr::number(num(rng));
    case 1: return Expr::param(par(rng));
    case 2: return Expr::add(randomExpr(rng, depth - 1, d), randomExpr(rng, depth - 1, d));
    case 3: return Expr::sub(randomExpr(rng, depth - 1, d), randomExpr(rng, depth - 1, d));
    case 4: return Expr::mul(randomExpr(rng, depth - 1, d), randomExpr(rng, depth - 1, d));
    case 5: return Expr::fn(Expr::Kind::Sin, randomExpr(rng, depth - 1, d));
    case 6: return Expr::fn(Expr::Kind::Cos, randomExpr(rng, depth - 1, d));
    default: return Expr::pow(randomExpr(rng, depth - 1, d), 2);
  }
}

}  // namespace

TEST_CASE("parse basics") {
  CHECK(ev("w1+1", {0.3, 0.4}) == doctest::Approx(1.3));
  CHECK(ev("sin(w1)*w2", {0.5, 2.0}) == doctest::Approx(std::sin(0.5) * 2.0));
  CHECK(ev("sqrt(w1^2+w2^2)", {0.3, 0.4}) == doctest::Approx(0.5));
  CHECK(ev("1", {7.0, 8.0}) == 1.0);
  CHECK(ev("2e-3", {0, 0}) == doctest::Approx(2e-3));
  CHECK(ev(" w1 * ( w2 - 1 ) ", {2, 3}) == doctest::Approx(4));
  CHECK(ev("-w1^2", {2, 0}) == doctest::Approx(4));  // '-' binds the base, then '^'
  CHECK(ev("w1^-1", {4, 0}) == doctest::Approx(0.25));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parseExpr("w3", 2), ExprError);
  CHECK_THROWS_AS(parseExpr("w1+", 2), ExprError);
  CHECK_THROWS_AS(parseExpr("foo(w1)", 2), ExprError);
  CHECK_THROWS_AS(parseExpr("sin w1", 2), ExprError);
  CHECK_THROWS_AS(parseExpr("w1^w2", 2), ExprError);  // exponent must be an integer
  CHECK_THROWS_AS(parseExpr("", 2), ExprError);
}

TEST_CASE("eval reports non-finite results") {
  CHECK_THROWS_AS(ev("1/w1", {0.0, 0.0}), ExprError);
  CHECK_THROWS_AS(ev("sqrt(w1)", {-1.0, 0.0}), ExprError);
}

TEST_CASE("simple derivatives") {
  CHECK(parseExpr("w1+1", 2)->diff(1)->print() == "1");
  auto d = parseExpr("sin(w1)*w2", 2)->diff(1);
  std::vector<double> w{0.7, 1.3};
  CHECK(d->eval(w) == doctest::Approx(std::cos(0.7) * 1.3).epsilon(1e-14));
  CHECK(parseExpr("w2", 2)->diff(1)->eval(w) == 0.0);
  CHECK_THROWS_AS(parseExpr("abs(w1)", 2)->diff(1), ExprError);
}

TEST_CASE("derivative matches centered finite differences on 200 random expressions") {
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  int done = 0;
  while (done < 200) {
    auto e = randomExpr(rng, 4, 2);
    std::uniform_int_distribution<int> par(1, 2);
    int j = par(rng);
    double w1 = unif(rng), w2 = unif(rng);
    std::vector<double> w{w1, w2};
    double value = e->eval(w);
    if (std::abs(value) > 1e3) continue;  // keep the finite-difference step meaningful
    auto de = e->diff(j);
    const double h = 1e-6;
    std::vector<double> wp = w, wm = w;
    wp[j - 1] += h;
    wm[j - 1] -= h;
    double fd = (e->eval(wp) - e->eval(wm)) / (2 * h);
    double sym = de->eval(w);
    CHECK(std::abs(sym - fd) <= 1e-5 * (1.0 + std::abs(value) + std::abs(sym)));
    ++done;
  }
}

TEST_CASE("diff is linear as an evaluated function") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    auto e1 = randomExpr(rng, 3, 2);
    auto e2 = randomExpr(rng, 3, 2);
    double a = unif(rng);
    auto combo = Expr::add(Expr::mul(Expr::number(a), e1), e2);
    std::vector<double> w{unif(rng), unif(rng)};
    double lhs = combo->diff(1)->eval(w);
    double rhs = a * e1->diff(1)->eval(w) + e2->diff(1)->eval(w);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("mixed partials commute") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    auto e = randomExpr(rng, 4, 2);
    std::vector<double> w{unif(rng), unif(rng)};
    double d12 = e->diff(1)->diff(2)->eval(w);
    double d21 = e->diff(2)->diff(1)->eval(w);
    CHECK(std::abs(d12 - d21) <= 1e-10 * (1.0 + std::abs(d12)));
  }
}

TEST_CASE("print/parse round trip evaluates identically") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    auto e = randomExpr(rng, 4, 2);
    auto e2 = parseExpr(e->print(), 2);
    for (int s = 0; s < 5; ++s) {
      std::vector<double> w{unif(rng), unif(rng)};
      double v1 = e->eval(w), v2 = e2->eval(w);
      CHECK(std::abs(v1 - v2) <= 1e-15 * (1.0 + std::abs(v1)));
    }
  }
}
