// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "eigsur/expr.hpp"
#include "eigsur/matrix_market.hpp"

namespace eigsur {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct PencilTerm {
  Expr::Ptr coeff;
  SparseMat mat;
  std::string coeffText;  // original source text, kept for persistence
};

struct PencilOptions {
  int denseThreshold = 256;
  bool domainCheckIsError = true;  // omega outside the box: throw vs warn
};

/// Affine parametric pencil A(omega) = sum theta_{A,i}(omega) A_i,
/// B(omega) = sum theta_{B,i}(omega) B_i on a box domain.
/// Immutable after construction; assembly is pure.
class AffinePencil {
public:
  AffinePencil(int d, std::vector<std::array<double, 2>> domain,
               std::vector<PencilTerm> termsA, std::vector<PencilTerm> termsB,
               PencilOptions opts = {});

  int paramCount() const { return d_; }
  int dim() const { return n_; }
  const std::vector<std::array<double, 2>>& domain() const { return domain_; }
  const std::vector<PencilTerm>& termsA() const { return termsA_; }
  const std::vector<PencilTerm>& termsB() const { return termsB_; }
  const PencilOptions& options() const { return opts_; }
  bool dense() const { return n_ <= opts_.denseThreshold; }

  bool inDomain(const Vec& omega) const;
  Vec domainCenter() const;

  SparseMat assembleA(const Vec& omega) const;
  SparseMat assembleB(const Vec& omega) const;
  Mat assembleADense(const Vec& omega) const;
  Mat assembleBDense(const Vec& omega) const;

  /// Coefficient-wise first derivative with respect to omega_j (1-based).
  std::pair<Mat, Mat> assembleDerivative(const Vec& omega, int j) const;
  /// Coefficient-wise second derivative; symmetric in (j, k) by construction.
  std::pair<Mat, Mat> assembleSecondDerivative(const Vec& omega, int j, int k) const;

  /// Symmetry enforcement, coefficient probing, and B positive-definiteness at
  /// the 2^d corners plus the center. Throws on violation. Returns a warning
  /// list (abs in a coefficient, near-symmetric matrices that were symmetrized).
  std::vector<std::string> validate() const;

private:
  void checkDomain(const Vec& omega) const;
  SparseMat assembleTerms(const std::vector<PencilTerm>& terms, const Vec& omega) const;
  Mat assembleTermsDense(const std::vector<PencilTerm>& terms, const Vec& omega, int order,
                         int j, int k) const;

  int d_;
  int n_ = 0;
  std::vector<std::array<double, 2>> domain_;
  std::vector<PencilTerm> termsA_, termsB_;
  PencilOptions opts_;
};

/// Loads {d, domain, termsA: [{coeff, matrix}], termsB: [...]} from a JSON file.
/// Matrix paths are resolved relative to the definition file.
AffinePencil loadPencil(const std::string& jsonPath, PencilOptions opts = {});

/// Writes the definition JSON plus one .mtx file per term next to it.
void savePencil(const AffinePencil& p, const std::string& jsonPath);

/// Max-norm symmetry check followed by symmetrization; throws when the defect
/// exceeds 1e-12 times the max entry.
SparseMat symmetrized(const SparseMat& m, const std::string& what);

bool containsAbs(const Expr::Ptr& e);

}  // namespace eigsur
