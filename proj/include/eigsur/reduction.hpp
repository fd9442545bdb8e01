// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "eigsur/pencil.hpp"

namespace eigsur {

struct ColumnProvenance {
  Vec omega;
  enum class Kind { Eigvec, Derivative } kind = Kind::Eigvec;
  int index = 1;  // eigenvector number k, or parameter j for a derivative
};

/// Euclidean-orthonormal basis with per-column provenance. Extension is
/// modified Gram-Schmidt with one reorthogonalization pass; vectors whose
/// orthogonal component falls below deflationTol times their norm are dropped.
class Subspace {
public:
  explicit Subspace(int n, double deflationTol = 1e-10)
      : basis_(n, 0), deflationTol_(deflationTol) {}

  int dim() const { return static_cast<int>(basis_.cols()); }
  int ambientDim() const { return static_cast<int>(basis_.rows()); }
  const Mat& basis() const { return basis_; }
  const std::vector<ColumnProvenance>& provenance() const { return provenance_; }
  double deflationTol() const { return deflationTol_; }

  /// Returns one flag per input vector: true when the vector was deflated.
  std::vector<bool> extend(const std::vector<Vec>& vectors,
                           const std::vector<ColumnProvenance>& provenance);

  /// Replaces the basis wholesale (surrogate loading).
  void setBasis(Mat basis, std::vector<ColumnProvenance> provenance);

private:
  Mat basis_;
  std::vector<ColumnProvenance> provenance_;
  double deflationTol_;
};

/// Projected affine terms V^T A_i V plus tall products A_i V for fast residuals.
struct ReducedModel {
  std::shared_ptr<const AffinePencil> pencil;
  Subspace subspace{0};
  std::vector<Mat> reducedTermsA, reducedTermsB;  // M x M
  std::vector<Mat> tallA, tallB;                  // n x M
};

ReducedModel projectPencil(std::shared_ptr<const AffinePencil> pencil, const Subspace& s);

/// Incremental update: the subspace must extend rm's by appended columns; only
/// the new blocks are computed.
void updateProjection(ReducedModel& rm, const Subspace& s);

struct ReducedEigpairs {
  std::vector<double> values;  // ascending
  Mat coefVectors;             // M x m, B_r-orthonormal
  Mat liftedVectors;           // n x m, B(omega)-normalized
};

ReducedEigpairs reducedMinEigpairs(const ReducedModel& rm, const Vec& omega, int m);

/// Residual norm || A(omega) V c - lambda B(omega) V c ||_2 from the tall
/// precomputed products; no n x n assembly.
double fastResidualNorm(const ReducedModel& rm, const Vec& omega, double lambdaTilde,
                        const Vec& coefVector);

}  // namespace eigsur
