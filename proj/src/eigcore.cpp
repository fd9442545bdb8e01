// SPDX-License-Identifier: Apache-2.0
#include "eigsur/eigcore.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <stdexcept>

namespace eigsur {

namespace {

void fixSign(Vec& x) {
  int imax = 0;
  double amax = 0;
  for (int i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > amax) { amax = std::abs(x[i]); imax = i; }
  if (x[imax] < 0) x = -x;
}

double matNorm1(const SparseMat& m) {
  double best = 0;
  for (int c = 0; c < m.outerSize(); ++c) {
    double s = 0;
    for (SparseMat::InnerIterator it(m, c); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

// Dense symmetric-definite solve: B = L L^T, standard eigensolve of
// L^{-1} A L^{-T}, back-transform. Returns ascending values and
// B-orthonormal vectors.
std::pair<Vec, Mat> denseSolve(const Mat& A, const Mat& B) {
  Eigen::LLT<Mat> llt(B);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("B is not positive definite (Cholesky failed)");
  Mat L = llt.matrixL();
  Mat C = L.triangularView<Eigen::Lower>().solve(A.transpose()).transpose();
  C = L.triangularView<Eigen::Lower>().solve(C);
  C = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(C);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolve failed");
  Mat X = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
  return {es.eigenvalues(), X};
}

RitzSet denseEigpairs(const Mat& A, const Mat& B, int m, const SolverOptions& opts) {
  auto [values, X] = denseSolve(A, B);
  RitzSet out;
  out.vectors.resize(A.rows(), m);
  double scale = A.cwiseAbs().colwise().sum().maxCoeff() +
                 B.cwiseAbs().colwise().sum().maxCoeff();
  for (int i = 0; i < m; ++i) {
    out.values.push_back(values[i]);
    Vec x = X.col(i);
    fixSign(x);
    out.vectors.col(i) = x;
    double rn = (A * x - values[i] * (B * x)).norm();
    out.residualNorms.push_back(rn);
    out.converged.push_back(rn <= opts.tolEig * std::max(scale, 1e-300));
  }
  return out;
}

struct ShiftInvertOp {
  Eigen::SparseLU<SparseMat> lu;
  const SparseMat& B;
  bool ok = false;

  ShiftInvertOp(const SparseMat& A, const SparseMat& B_, double sigma) : B(B_) {
    SparseMat M = A - sigma * B;
    M.makeCompressed();
    lu.compute(M);
    ok = lu.info() == Eigen::Success;
  }

  Vec apply(const Vec& x) const { return lu.solve(B * x); }
};

RitzSet shiftInvertEigpairs(const SparseMat& A, const SparseMat& B, int m,
                            const SolverOptions& opts) {
  const int n = static_cast<int>(A.rows());
  double sigma = opts.shift;
  auto op = std::make_unique<ShiftInvertOp>(A, B, sigma);
  if (!op->ok) {
    sigma = -matNorm1(A);  // factorization of A singular, move the shift below the spectrum
    op = std::make_unique<ShiftInvertOp>(A, B, sigma);
    if (!op->ok) throw std::runtime_error("shift-invert factorization failed");
  }

  const double scale = matNorm1(A) + matNorm1(B);
  const int targetK = std::min(n, std::max(opts.minKrylov, m + 15));
  const int maxK = std::min(n, std::max(targetK, opts.maxKrylov));

  Mat V(n, maxK);
  Vec v = Vec::Ones(n);
  v.normalize();
  V.col(0) = v;
  int K = 1;
  bool invariant = false;

  Mat Ad(A), Bd(B);  // desk-scale problems; reduced products below stay cheap
  RitzSet out;

  auto rayleighRitz = [&](int k) {
    Mat Vk = V.leftCols(k);
    Mat Ar = Vk.transpose() * (Ad * Vk);
    Mat Br = Vk.transpose() * (Bd * Vk);
    Ar = 0.5 * (Ar + Ar.transpose());
    Br = 0.5 * (Br + Br.transpose());
    auto [vals, Q] = denseSolve(Ar, Br);
    int got = std::min<int>(m, k);
    RitzSet rs;
    rs.vectors.resize(n, got);
    for (int i = 0; i < got; ++i) {
      Vec x = Vk * Q.col(i);  // B-normalized through Br-orthonormality of Q
      fixSign(x);
      rs.values.push_back(vals[i]);
      rs.vectors.col(i) = x;
      double rn = (Ad * x - vals[i] * (Bd * x)).norm();
      rs.residualNorms.push_back(rn);
      rs.converged.push_back(rn <= opts.tolEig * scale);
    }
    return rs;
  };

  while (true) {
    // Expand with one shift-invert application plus MGS and a reorthogonalization pass.
    Vec w = op->apply(V.col(K - 1));
    double norm0 = w.norm();
    for (int pass = 0; pass < 2; ++pass)
      w -= V.leftCols(K) * (V.leftCols(K).transpose() * w);
    if (w.norm() <= 1e-14 * std::max(norm0, 1e-300)) {
      invariant = true;  // Krylov space is invariant; Ritz pairs are exact on it
    } else {
      V.col(K) = w / w.norm();
      ++K;
    }

    if (invariant || K >= targetK) {
      out = rayleighRitz(K);
      if (static_cast<int>(out.values.size()) >= 1 && (out.converged[0] || invariant)) break;
      if (K >= maxK)
        throw std::runtime_error("shift-invert iteration did not converge for the first pair");
    }
    if (invariant) break;
  }

  if (out.values.empty() || !(out.converged[0] || invariant))
    throw std::runtime_error("shift-invert iteration did not converge for the first pair");
  out.krylovBasis = V.leftCols(K);
  while (static_cast<int>(out.values.size()) > m) {
    out.values.pop_back();
    out.converged.pop_back();
    out.residualNorms.pop_back();
  }
  return out;
}

}  // namespace

RitzSet smallestEigpairs(const SparseMat& A, const SparseMat& B, int m, SolveMode mode,
                         SolverOptions opts) {
  if (m < 1 || m > A.rows()) throw std::runtime_error("invalid eigenpair count");
  if (mode == SolveMode::Dense) return denseEigpairs(Mat(A), Mat(B), m, opts);
  return shiftInvertEigpairs(A, B, m, opts);
}

RitzSet smallestEigpairs(const Mat& A, const Mat& B, int m, SolveMode mode, SolverOptions opts) {
  if (mode == SolveMode::Dense) {
    if (m < 1 || m > A.rows()) throw std::runtime_error("invalid eigenpair count");
    return denseEigpairs(A, B, m, opts);
  }
  return smallestEigpairs(SparseMat(A.sparseView()), SparseMat(B.sparseView()), m, mode, opts);
}

std::pair<Vec, Mat> fullSpectrum(const Mat& A, const Mat& B, SolverOptions opts) {
  if (A.rows() > opts.oracleCap)
    throw std::runtime_error("fullSpectrum: dimension exceeds the oracle cap");
  auto [values, X] = denseSolve(A, B);
  for (int i = 0; i < X.cols(); ++i) {
    Vec x = X.col(i);
    fixSign(x);
    X.col(i) = x;
  }
  return {values, X};
}

Vec bNormalize(const Vec& x, const Mat& B) {
  double t = x.dot(B * x);
  if (!(t > 0)) throw std::runtime_error("x^T B x is not positive; cannot B-normalize");
  Vec out = x / std::sqrt(t);
  fixSign(out);
  return out;
}

Vec bNormalize(const Vec& x, const SparseMat& B) {
  double t = x.dot(B * x);
  if (!(t > 0)) throw std::runtime_error("x^T B x is not positive; cannot B-normalize");
  Vec out = x / std::sqrt(t);
  fixSign(out);
  return out;
}

std::pair<Vec, double> residual(const Mat& A, const Mat& B, double lambda, const Vec& x) {
  Vec r = A * x - lambda * (B * x);
  return {r, r.norm()};
}

std::pair<Vec, double> residual(const SparseMat& A, const SparseMat& B, double lambda,
                                const Vec& x) {
  Vec r = A * x - lambda * (B * x);
  return {r, r.norm()};
}

}  // namespace eigsur
