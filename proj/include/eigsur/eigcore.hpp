// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "eigsur/matrix_market.hpp"
#include "eigsur/pencil.hpp"

namespace eigsur {

enum class SolveMode { Dense, ShiftInvert };

struct SolverOptions {
  double tolEig = 1e-10;   // relative residual for the first pair
  int maxKrylov = 300;     // hard cap on the Krylov dimension
  int minKrylov = 20;      // K defaults to max(minKrylov, m + 15)
  double shift = 0.0;      // shift-invert target
  int oracleCap = 500;     // fullSpectrum refuses larger problems
};

/// Approximate eigenpairs at one parameter point: ascending values,
/// B-normalized vectors, per-pair convergence flags, and (shift-invert mode)
/// the Euclidean-orthonormal Krylov basis they came from.
struct RitzSet {
  std::vector<double> values;
  Mat vectors;                        // n x m
  std::vector<bool> converged;
  std::vector<double> residualNorms;
  Mat krylovBasis;                    // n x K, empty in dense mode
};

/// Smallest m eigenpairs of the symmetric-definite pencil (A, B).
/// Pair 1 is converged to tolEig (hard error otherwise); pairs 2..m are Ritz
/// approximations from the same Krylov space with their own flags.
RitzSet smallestEigpairs(const SparseMat& A, const SparseMat& B, int m,
                         SolveMode mode = SolveMode::Dense, SolverOptions opts = {});

RitzSet smallestEigpairs(const Mat& A, const Mat& B, int m,
                         SolveMode mode = SolveMode::Dense, SolverOptions opts = {});

/// Full B-orthonormal eigendecomposition: ascending Lambda, X with X^T B X = I.
/// Dense oracle; refuses n > opts.oracleCap.
std::pair<Vec, Mat> fullSpectrum(const Mat& A, const Mat& B, SolverOptions opts = {});

/// Scales x to unit B-norm and fixes the sign so the largest-magnitude entry
/// is positive.
Vec bNormalize(const Vec& x, const Mat& B);
Vec bNormalize(const Vec& x, const SparseMat& B);

/// r = A x - lambda B x and its Euclidean norm.
std::pair<Vec, double> residual(const Mat& A, const Mat& B, double lambda, const Vec& x);
std::pair<Vec, double> residual(const SparseMat& A, const SparseMat& B, double lambda,
                                const Vec& x);

}  // namespace eigsur
