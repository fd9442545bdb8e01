// SPDX-License-Identifier: Apache-2.0
#include "eigsur/sensitivity.hpp"

#include <Eigen/LU>
#include <stdexcept>

namespace eigsur {

namespace {

Mat borderedMatrix(const Mat& A, const Mat& B, double lambda, const Vec& x) {
  const int n = static_cast<int>(A.rows());
  Mat M(n + 1, n + 1);
  M.topLeftCorner(n, n) = lambda * B - A;
  M.topRightCorner(n, 1) = B * x;
  M.bottomLeftCorner(1, n) = (B * x).transpose();
  M(n, n) = 0;
  return M;
}

Vec borderedRhs(const Mat& dA, const Mat& dB, double lambda, const Vec& x) {
  const int n = static_cast<int>(dA.rows());
  Vec rhs(n + 1);
  rhs.head(n) = (dA - lambda * dB) * x;
  rhs[n] = -0.5 * x.dot(dB * x);
  return rhs;
}

}  // namespace

Vec eigenvalueGradient(const AffinePencil& p, const Vec& omega, double lambda, const Vec& x) {
  Vec g(p.paramCount());
  for (int j = 1; j <= p.paramCount(); ++j) {
    auto [dA, dB] = p.assembleDerivative(omega, j);
    g[j - 1] = x.dot((dA - lambda * dB) * x);
  }
  return g;
}

DerivativeResult eigenvectorDerivativeBordered(const Mat& A, const Mat& B, const Mat& dA,
                                               const Mat& dB, double lambda, const Vec& x) {
  const int n = static_cast<int>(A.rows());
  Mat M = borderedMatrix(A, B, lambda, x);
  Eigen::FullPivLU<Mat> lu(M);
  if (!lu.isInvertible())
    throw std::runtime_error("bordered matrix singular; eigenvalue not simple");
  Vec sol = lu.solve(borderedRhs(dA, dB, lambda, x));
  DerivativeResult out;
  out.dx = sol.head(n);
  out.dlambda = sol[n];
  out.conditionEstimate = lu.rcond();
  out.method = DerivativeMethod::Bordered;
  return out;
}

std::vector<DerivativeResult> eigenvectorDerivativesBordered(const AffinePencil& p,
                                                             const Vec& omega, double lambda,
                                                             const Vec& x) {
  Mat A = p.assembleADense(omega);
  Mat B = p.assembleBDense(omega);
  const int n = static_cast<int>(A.rows());
  Mat M = borderedMatrix(A, B, lambda, x);
  Eigen::FullPivLU<Mat> lu(M);  // one factorization, d right-hand sides
  if (!lu.isInvertible())
    throw std::runtime_error("bordered matrix singular; eigenvalue not simple");
  std::vector<DerivativeResult> results;
  for (int j = 1; j <= p.paramCount(); ++j) {
    auto [dA, dB] = p.assembleDerivative(omega, j);
    Vec sol = lu.solve(borderedRhs(dA, dB, lambda, x));
    DerivativeResult r;
    r.dx = sol.head(n);
    r.dlambda = sol[n];
    r.conditionEstimate = lu.rcond();
    r.method = DerivativeMethod::Bordered;
    results.push_back(std::move(r));
  }
  return results;
}

Vec eigenvectorDerivativeSpectral(const Vec& Lambda, const Mat& X, const Mat& dA, const Mat& dB,
                                  int i) {
  const int n = static_cast<int>(Lambda.size());
  if (i < 0 || i >= n) throw std::runtime_error("eigenpair index out of range");
  const Vec xi = X.col(i);
  const double li = Lambda[i];
  Vec dx = -0.5 * xi.dot(dB * xi) * xi;
  const Vec w = (dA - li * dB) * xi;
  for (int k = 0; k < n; ++k) {
    if (k == i) continue;
    double gap = li - Lambda[k];
    if (std::abs(gap) < 1e-12)
      throw std::runtime_error("eigenvalue not simple; spectral expansion undefined");
    dx += (X.col(k).dot(w) / gap) * X.col(k);
  }
  return dx;
}

Mat eigenvalueSecondDerivative(const AffinePencil& p, const Vec& omega, double lambda,
                               const Vec& x, const std::vector<Vec>& dxAll) {
  const int d = p.paramCount();
  if (static_cast<int>(dxAll.size()) != d)
    throw std::runtime_error("need one eigenvector derivative per parameter");
  Vec grad = eigenvalueGradient(p, omega, lambda, x);
  Mat H(d, d);
  for (int j = 1; j <= d; ++j) {
    auto [dAj, dBj] = p.assembleDerivative(omega, j);
    for (int k = 1; k <= d; ++k) {
      auto [ddA, ddB] = p.assembleSecondDerivative(omega, j, k);
      H(j - 1, k - 1) = 2.0 * x.dot((dAj - lambda * dBj) * dxAll[k - 1]) +
                        x.dot((ddA - grad[k - 1] * dBj - lambda * ddB) * x);
    }
  }
  double scale = std::max(H.cwiseAbs().maxCoeff(), 1.0);
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-6 * scale)
    throw std::runtime_error("eigenvalue Hessian asymmetric; derivative inputs inaccurate");
  return 0.5 * (H + H.transpose());
}

DerivativeResult projectedDerivativeGuess(const Mat& krylovBasis, const Mat& A, const Mat& B,
                                          const Mat& dA, const Mat& dB, double lambda,
                                          const Vec& x) {
  const Mat& V = krylovBasis;
  const int K = static_cast<int>(V.cols());
  Mat M(K + 1, K + 1);
  M.topLeftCorner(K, K) = V.transpose() * ((lambda * B - A) * V);
  M.topRightCorner(K, 1) = V.transpose() * (B * x);
  M.bottomLeftCorner(1, K) = (x.transpose() * B) * V;
  M(K, K) = 0;
  Vec rhs(K + 1);
  rhs.head(K) = V.transpose() * ((dA - lambda * dB) * x);
  rhs[K] = -0.5 * x.dot(dB * x);
  Eigen::FullPivLU<Mat> lu(M);
  if (!lu.isInvertible()) throw std::runtime_error("projected bordered system singular");
  Vec sol = lu.solve(rhs);
  DerivativeResult out;
  out.dx = V * sol.head(K);
  out.dlambda = sol[K];
  out.conditionEstimate = lu.rcond();
  out.method = DerivativeMethod::ProjectedGuess;
  return out;
}

}  // namespace eigsur
