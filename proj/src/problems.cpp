// SPDX-License-Identifier: Apache-2.0
#include "eigsur/problems.hpp"

#include <Eigen/QR>
#include <random>

namespace eigsur {

namespace {

SparseMat toSparse(const Mat& m) {
  SparseMat s = m.sparseView();  // drops exact zeros only
  s.makeCompressed();
  return s;
}

PencilTerm term(const std::string& coeff, SparseMat mat, int d) {
  PencilTerm t;
  t.coeffText = coeff;
  t.coeff = parseExpr(coeff, d);
  t.mat = std::move(mat);
  return t;
}

SparseMat tridiag(int n, double diagBase, double off, double diagRamp) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i, diagBase + diagRamp * (i + 1) / n);
    if (i + 1 < n) {
      trip.emplace_back(i, i + 1, off);
      trip.emplace_back(i + 1, i, off);
    }
  }
  SparseMat m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

}  // namespace

ProblemSpec example1(int n, RotationMode mode, unsigned seed) {
  if (n < 2) throw std::runtime_error("example1 needs n >= 2");
  Mat C0 = Mat::Zero(n, n);
  C0(0, 0) = 1;
  C0(1, 1) = 1;
  for (int i = 2; i < n; ++i) C0(i, i) = i + 1;  // 3, 4, ..., n
  Mat C1 = Mat::Zero(n, n);
  C1(0, 0) = 1;
  C1(1, 1) = -1;
  Mat C2 = Mat::Zero(n, n);
  C2(0, 1) = 1;
  C2(1, 0) = 1;

  Mat W = Mat::Identity(n, n);
  if (mode == RotationMode::Givens) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    Mat G(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) G(r, c) = gauss(rng);
    Eigen::HouseholderQR<Mat> qr(G);
    W = qr.householderQ() * Mat::Identity(n, n);
  }

  std::vector<PencilTerm> termsA;
  termsA.push_back(term("1", toSparse(W * C0 * W.transpose()), 2));
  termsA.push_back(term("w1", toSparse(W * C1 * W.transpose()), 2));
  termsA.push_back(term("w2", toSparse(W * C2 * W.transpose()), 2));
  std::vector<PencilTerm> termsB;
  termsB.push_back(term("1", toSparse(Mat::Identity(n, n)), 2));

  ProblemSpec spec;
  spec.name = mode == RotationMode::Identity ? "example1" : "example1-givens";
  spec.pencil = std::make_shared<AffinePencil>(
      2, std::vector<std::array<double, 2>>{{-0.5, 0.5}, {-0.5, 0.5}}, std::move(termsA),
      std::move(termsB));
  spec.lambda1 = [](const Vec& w) { return 1.0 - std::hypot(w[0], w[1]); };
  spec.lambda2 = [n](const Vec& w) {
    double l2 = 1.0 + std::hypot(w[0], w[1]);
    return n > 2 ? std::min(l2, 3.0) : l2;
  };
  return spec;
}

ProblemSpec example3() {
  ProblemSpec spec = example1(2, RotationMode::Identity);
  spec.name = "example3";
  return spec;
}

ProblemSpec syntheticAffine(int n, int m0, int m1, unsigned seed) {
  if (n < 2 || m0 < 1 || m1 < 1) throw std::runtime_error("bad syntheticAffine parameters");
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> pick(0, n - 1);

  auto randomSym = [&](double diagShift) {
    std::vector<Eigen::Triplet<double>> trip;
    // Band plus a few random couplings, then symmetrized.
    Mat dense = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      dense(i, i) = gauss(rng) + diagShift;
      if (i + 1 < n) dense(i, i + 1) = 0.5 * gauss(rng);
    }
    for (int k = 0; k < n; ++k) {
      int i = pick(rng), j = pick(rng);
      dense(std::min(i, j), std::max(i, j)) += 0.3 * gauss(rng);
    }
    Mat sym = 0.5 * (dense + dense.transpose());
    return toSparse(sym);
  };

  const std::vector<std::string> poolA = {"1",        "w1",        "w2",    "sin(w1)",
                                          "cos(w2)",  "w1^2",      "w1*w2", "exp(w1/2)"};
  const std::vector<std::string> poolB = {"1", "w1", "0.5*w2", "w1*w2", "0.25*(w1+w2)"};

  std::vector<PencilTerm> termsA, termsB;
  for (int i = 0; i < m0; ++i)
    termsA.push_back(term(poolA[i % poolA.size()], randomSym(0.0), 2));
  // Diagonally dominant SPD base so B(omega) stays definite: the remaining
  // coefficients are nonnegative on [0,1]^2 and their terms carry margin n on
  // the diagonal as well.
  for (int i = 0; i < m1; ++i) {
    SparseMat base = randomSym(i == 0 ? 2.0 * n : 0.5 * n);
    termsB.push_back(term(poolB[i % poolB.size()], std::move(base), 2));
  }

  ProblemSpec spec;
  spec.name = "synthetic";
  spec.pencil = std::make_shared<AffinePencil>(
      2, std::vector<std::array<double, 2>>{{0.0, 1.0}, {0.0, 1.0}}, std::move(termsA),
      std::move(termsB));
  return spec;
}

ProblemSpec beamLike(int n) {
  if (n < 3) throw std::runtime_error("beamLike needs n >= 3");
  const double h = 1.0 / (n + 1);
  SparseMat K0 = tridiag(n, 2.0 / h, -1.0 / h, 0.0);
  SparseMat K1 = tridiag(n, 2.0 / h, -1.0 / h, 1.0 / h);  // ramped diagonal keeps it SPD
  SparseMat M0 = tridiag(n, 4.0 * h / 6.0, 1.0 * h / 6.0, 0.0);
  SparseMat M1 = tridiag(n, 2.0 * h / 6.0, 0.5 * h / 6.0, 0.0);

  std::vector<PencilTerm> termsA;
  termsA.push_back(term("w2", K0, 2));
  termsA.push_back(term("w2*w1^3", K1, 2));
  std::vector<PencilTerm> termsB;
  termsB.push_back(term("1", M0, 2));
  termsB.push_back(term("w1", M1, 2));

  ProblemSpec spec;
  spec.name = "beam";
  spec.pencil = std::make_shared<AffinePencil>(
      2, std::vector<std::array<double, 2>>{{0.1, 1.0}, {100.0, 1000.0}}, std::move(termsA),
      std::move(termsB));
  return spec;
}

ProblemSpec makeFixture(const std::string& name, int n, unsigned seed) {
  if (name == "example1") return example1(n);
  if (name == "example1-givens") return example1(n, RotationMode::Givens, seed);
  if (name == "example3") return example3();
  if (name == "synthetic") return syntheticAffine(n, 4, 2, seed);
  if (name == "beam") return beamLike(n);
  throw std::runtime_error("unknown fixture '" + name + "'");
}

}  // namespace eigsur
