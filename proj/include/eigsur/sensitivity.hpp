// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eigsur/eigcore.hpp"
#include "eigsur/pencil.hpp"

namespace eigsur {

inline constexpr double kSimplicityThreshold = 1e-8;

enum class DerivativeMethod { Bordered, Spectral, ProjectedGuess };

struct DerivativeResult {
  Vec dx;
  double dlambda = 0;
  double gap = 0;                 // |lambda - nearest other Ritz value|, when known
  double conditionEstimate = 0;   // reciprocal condition hint of the bordered matrix
  DerivativeMethod method = DerivativeMethod::Bordered;
};

/// Gradient of a simple eigenvalue: component j is x^T (dA_j - lambda dB_j) x.
Vec eigenvalueGradient(const AffinePencil& p, const Vec& omega, double lambda, const Vec& x);

/// Eigenvector derivative from the (n+1) bordered system
///   [[lambda B - A, B x], [x^T B, 0]] [dx; dlambda] = [(dA - lambda dB) x; -x^T dB x / 2].
DerivativeResult eigenvectorDerivativeBordered(const Mat& A, const Mat& B, const Mat& dA,
                                               const Mat& dB, double lambda, const Vec& x);

/// All d derivatives at once, sharing one factorization of the bordered matrix.
std::vector<DerivativeResult> eigenvectorDerivativesBordered(const AffinePencil& p,
                                                             const Vec& omega, double lambda,
                                                             const Vec& x);

/// Spectral-expansion oracle: needs the full B-orthonormal eigendecomposition.
///   dx = -(x_i^T dB x_i)/2 x_i + sum_{k != i} [x_k^T (dA - lambda_i dB) x_i / (lambda_i - lambda_k)] x_k
Vec eigenvectorDerivativeSpectral(const Vec& Lambda, const Mat& X, const Mat& dA, const Mat& dB,
                                  int i);

/// Hessian of a simple eigenvalue from eigenvector derivatives dxAll[k] = dx/d omega_k.
/// Asymmetry beyond 1e-6 throws before symmetrization.
Mat eigenvalueSecondDerivative(const AffinePencil& p, const Vec& omega, double lambda,
                               const Vec& x, const std::vector<Vec>& dxAll);

/// Bordered system projected onto the Krylov basis and lifted back; initial
/// guess quality only, the residual in the full system is reported by tests.
DerivativeResult projectedDerivativeGuess(const Mat& krylovBasis, const Mat& A, const Mat& B,
                                          const Mat& dA, const Mat& dB, double lambda,
                                          const Vec& x);

}  // namespace eigsur
