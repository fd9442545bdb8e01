// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "eigsur/problems.hpp"
#include "eigsur/reduction.hpp"
#include "eigsur/sensitivity.hpp"

using namespace eigsur;

namespace {

Vec omega2(double a, double b) {
  Vec w(2);
  w << a, b;
  return w;
}

ColumnProvenance ev(const Vec& w, int k = 1) {
  return {w, ColumnProvenance::Kind::Eigvec, k};
}

}  // namespace

TEST_CASE("subspace extension orthonormalizes and deflates") {
  Subspace s(5);
  Vec v1(5), v2(5), v3(5);
  v1 << 1, 0, 0, 0, 0;
  v2 << 1, 1, 0, 0, 0;
  v3 << 3, -2, 0, 0, 0;  // dependent on span{v1, v2}
  auto flags = s.extend({v1, v2, v3}, {ev(omega2(0, 0)), ev(omega2(0, 0), 2), ev(omega2(1, 1))});
  CHECK(flags == std::vector<bool>{false, false, true});
  CHECK(s.dim() == 2);
  Mat g = s.basis().transpose() * s.basis();
  CHECK((g - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(s.provenance().size() == 2);
}

TEST_CASE("rank never exceeds the ambient dimension") {
  std::mt19937 rng(9);
  Subspace s(6);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 4; ++t) {
    std::vector<Vec> vs;
    std::vector<ColumnProvenance> pr;
    for (int k = 0; k < 3; ++k) {
      Vec v(6);
      for (int i = 0; i < 6; ++i) v[i] = gauss(rng);
      vs.push_back(v);
      pr.push_back(ev(omega2(t, k)));
    }
    s.extend(vs, pr);
  }
  CHECK(s.dim() == 6);
  Mat g = s.basis().transpose() * s.basis();
  CHECK((g - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("incremental projection matches projection from scratch") {
  auto spec = example1(40, RotationMode::Givens);
  std::mt19937 rng(41);
  std::normal_distribution<double> gauss;
  Subspace s(40);
  auto addRandom = [&](int count) {
    std::vector<Vec> vs;
    std::vector<ColumnProvenance> pr;
    for (int k = 0; k < count; ++k) {
      Vec v(40);
      for (int i = 0; i < 40; ++i) v[i] = gauss(rng);
      vs.push_back(v);
      pr.push_back(ev(omega2(0, 0), k));
    }
    s.extend(vs, pr);
  };
  addRandom(3);
  ReducedModel rm = projectPencil(spec.pencil, s);
  addRandom(4);
  updateProjection(rm, s);
  ReducedModel scratch = projectPencil(spec.pencil, s);
  for (size_t i = 0; i < scratch.reducedTermsA.size(); ++i)
    CHECK((rm.reducedTermsA[i] - scratch.reducedTermsA[i]).cwiseAbs().maxCoeff() <= 1e-13);
  for (size_t i = 0; i < scratch.reducedTermsB.size(); ++i)
    CHECK((rm.reducedTermsB[i] - scratch.reducedTermsB[i]).cwiseAbs().maxCoeff() <= 1e-13);
  for (size_t i = 0; i < scratch.tallA.size(); ++i)
    CHECK((rm.tallA[i] - scratch.tallA[i]).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("surrogate reproduces value, gradient, and Hessian at a sample point") {
  auto spec = example1(25, RotationMode::Givens);
  Vec w = omega2(0.3, 0.4);
  const AffinePencil& p = *spec.pencil;
  auto rs = smallestEigpairs(p.assembleA(w), p.assembleB(w), 2, SolveMode::Dense);
  auto ders = eigenvectorDerivativesBordered(p, w, rs.values[0], rs.vectors.col(0));

  Subspace s(25);
  s.extend({rs.vectors.col(0), ders[0].dx, ders[1].dx},
           {ev(w, 1), {w, ColumnProvenance::Kind::Derivative, 1},
            {w, ColumnProvenance::Kind::Derivative, 2}});
  ReducedModel rm = projectPencil(spec.pencil, s);

  auto surro = [&](const Vec& omega) {
    return reducedMinEigpairs(rm, omega, 1).values[0];
  };
  CHECK(surro(w) == doctest::Approx(rs.values[0]).epsilon(1e-11));

  // Gradient and Hessian of the surrogate by finite differences.
  const double h = 1e-5;
  for (int j = 0; j < 2; ++j) {
    Vec wp = w, wm = w;
    wp[j] += h;
    wm[j] -= h;
    double fd = (surro(wp) - surro(wm)) / (2 * h);
    double exact = (j == 0) ? -0.6 : -0.8;
    CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
  }
  Mat Hexp(2, 2);
  Hexp << -1.28, 0.96, 0.96, -0.72;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      Vec wpp = w, wpm = w, wmp = w, wmm = w;
      wpp[j] += h; wpp[k] += h;
      wpm[j] += h; wpm[k] -= h;
      wmp[j] -= h; wmp[k] += h;
      wmm[j] -= h; wmm[k] -= h;
      double fd = (surro(wpp) - surro(wpm) - surro(wmp) + surro(wmm)) / (4 * h * h);
      CHECK(std::abs(fd - Hexp(j, k)) <= 1e-4);
    }

  // Negative control: eigenvector only, the Hessian match is lost.
  Subspace s1(25);
  s1.extend({rs.vectors.col(0)}, {ev(w, 1)});
  ReducedModel rm1 = projectPencil(spec.pencil, s1);
  auto surro1 = [&](const Vec& omega) {
    return reducedMinEigpairs(rm1, omega, 1).values[0];
  };
  CHECK(surro1(w) == doctest::Approx(rs.values[0]).epsilon(1e-11));
  Vec wpp = w, wmm = w;
  wpp[0] += h;
  wmm[0] -= h;
  double fd11 = (surro1(wpp) - 2 * surro1(w) + surro1(wmm)) / (h * h);
  CHECK(std::abs(fd11 - Hexp(0, 0)) > 1e-2);
}

TEST_CASE("surrogate values decrease monotonically as the subspace grows") {
  auto spec = example1(30, RotationMode::Givens);
  std::mt19937 rng(73);
  std::uniform_real_distribution<double> unif(-0.45, 0.45);
  Vec probe = omega2(0.11, -0.27);

  Subspace s(30);
  std::vector<double> values;
  for (int t = 0; t < 6; ++t) {
    Vec w = omega2(unif(rng), unif(rng));
    auto rs = smallestEigpairs(spec.pencil->assembleA(w), spec.pencil->assembleB(w), 1,
                               SolveMode::Dense);
    s.extend({rs.vectors.col(0)}, {ev(w, 1)});
    ReducedModel rm = projectPencil(spec.pencil, s);
    values.push_back(reducedMinEigpairs(rm, probe, 1).values[0]);
  }
  double truth = spec.lambda1(probe);
  for (size_t t = 1; t < values.size(); ++t) CHECK(values[t] <= values[t - 1] + 1e-12);
  for (double v : values) CHECK(v >= truth - 1e-12);
}

TEST_CASE("fast residual equals the assembled residual") {
  auto spec = beamLike(60);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u1(0.15, 0.95), u2(150.0, 900.0);
  Subspace s(60);
  for (int t = 0; t < 3; ++t) {
    Vec w = omega2(u1(rng), u2(rng));
    auto rs = smallestEigpairs(spec.pencil->assembleA(w), spec.pencil->assembleB(w), 2,
                               SolveMode::Dense);
    s.extend({rs.vectors.col(0), rs.vectors.col(1)}, {ev(w, 1), ev(w, 2)});
  }
  ReducedModel rm = projectPencil(spec.pencil, s);
  for (int t = 0; t < 5; ++t) {
    Vec w = omega2(u1(rng), u2(rng));
    auto pairs = reducedMinEigpairs(rm, w, 1);
    double fast = fastResidualNorm(rm, w, pairs.values[0], pairs.coefVectors.col(0));
    Vec lifted = rm.subspace.basis() * pairs.coefVectors.col(0);
    Mat Ad = spec.pencil->assembleADense(w);
    Vec r = Ad * lifted - pairs.values[0] * (spec.pencil->assembleBDense(w) * lifted);
    CHECK(std::abs(fast - r.norm()) <= 1e-14 * (1 + r.norm() + Ad.norm()));
  }
}

TEST_CASE("lifted vectors are B-normalized with a positive leading entry") {
  auto spec = example1(20, RotationMode::Givens);
  Subspace s(20);
  Vec w = omega2(0.2, 0.3);
  auto rs = smallestEigpairs(spec.pencil->assembleA(w), spec.pencil->assembleB(w), 2,
                             SolveMode::Dense);
  s.extend({rs.vectors.col(0), rs.vectors.col(1)}, {ev(w, 1), ev(w, 2)});
  ReducedModel rm = projectPencil(spec.pencil, s);
  auto pairs = reducedMinEigpairs(rm, w, 2);
  Mat B = spec.pencil->assembleBDense(w);
  for (int k = 0; k < 2; ++k) {
    Vec x = pairs.liftedVectors.col(k);
    CHECK(std::sqrt(x.dot(B * x)) == doctest::Approx(1.0).epsilon(1e-11));
    int imax;
    x.cwiseAbs().maxCoeff(&imax);
    CHECK(x[imax] > 0);
  }
}
