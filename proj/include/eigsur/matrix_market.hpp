// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>

namespace eigsur {

using SparseMat = Eigen::SparseMatrix<double>;  // CSC

/// Matrix Market coordinate format, kinds `real general` and `real symmetric`.
/// Symmetric files store the lower triangle; reading mirrors it.
SparseMat readMatrixMarketSparse(const std::string& path);

/// Writes the lower triangle as `coordinate real symmetric`.
void writeMatrixMarketSymmetric(const std::string& path, const SparseMat& m);

/// Matrix Market `array real general` (dense, column-major).
Eigen::MatrixXd readMatrixMarketDense(const std::string& path);
void writeMatrixMarketDense(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace eigsur
