// SPDX-License-Identifier: Apache-2.0
#include "eigsur/reduction.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace eigsur {

std::vector<bool> Subspace::extend(const std::vector<Vec>& vectors,
                                   const std::vector<ColumnProvenance>& provenance) {
  if (vectors.size() != provenance.size())
    throw std::runtime_error("provenance must match vectors one to one");
  std::vector<bool> deflated;
  deflated.reserve(vectors.size());
  for (size_t i = 0; i < vectors.size(); ++i) {
    Vec w = vectors[i];
    if (w.size() != basis_.rows()) throw std::runtime_error("vector length mismatch");
    const double norm0 = w.norm();
    if (norm0 == 0) { deflated.push_back(true); continue; }
    for (int pass = 0; pass < 2; ++pass) {
      if (dim() > 0) w -= basis_ * (basis_.transpose() * w);
    }
    if (w.norm() <= deflationTol_ * norm0) {
      deflated.push_back(true);
      continue;
    }
    basis_.conservativeResize(Eigen::NoChange, dim() + 1);
    basis_.col(dim() - 1) = w / w.norm();
    provenance_.push_back(provenance[i]);
    deflated.push_back(false);
  }
  return deflated;
}

void Subspace::setBasis(Mat basis, std::vector<ColumnProvenance> provenance) {
  if (static_cast<size_t>(basis.cols()) != provenance.size())
    throw std::runtime_error("provenance must match basis columns");
  basis_ = std::move(basis);
  provenance_ = std::move(provenance);
}

ReducedModel projectPencil(std::shared_ptr<const AffinePencil> pencil, const Subspace& s) {
  ReducedModel rm;
  rm.pencil = std::move(pencil);
  rm.subspace = Subspace(s.ambientDim(), s.deflationTol());
  updateProjection(rm, s);
  return rm;
}

void updateProjection(ReducedModel& rm, const Subspace& s) {
  const AffinePencil& p = *rm.pencil;
  const int mOld = rm.subspace.dim();
  const int m = s.dim();
  if (m < mOld) throw std::runtime_error("subspace shrank; incremental update impossible");
  const Mat& V = s.basis();
  if (mOld > 0 && !V.leftCols(mOld).isApprox(rm.subspace.basis(), 0))
    throw std::runtime_error("subspace prefix changed; incremental update impossible");

  auto update = [&](const std::vector<PencilTerm>& terms, std::vector<Mat>& tall,
                    std::vector<Mat>& reduced) {
    if (tall.empty()) {
      tall.resize(terms.size());
      reduced.resize(terms.size());
      for (size_t i = 0; i < terms.size(); ++i) {
        tall[i].resize(p.dim(), 0);
        reduced[i].resize(0, 0);
      }
    }
    for (size_t i = 0; i < terms.size(); ++i) {
      Mat tallNew = terms[i].mat * V.rightCols(m - mOld);
      Mat r(m, m);
      if (mOld > 0) {
        r.topLeftCorner(mOld, mOld) = reduced[i];
        r.topRightCorner(mOld, m - mOld) = V.leftCols(mOld).transpose() * tallNew;
        r.bottomLeftCorner(m - mOld, mOld) =
            V.rightCols(m - mOld).transpose() * tall[i];
      }
      r.bottomRightCorner(m - mOld, m - mOld) =
          V.rightCols(m - mOld).transpose() * tallNew;
      Mat t(p.dim(), m);
      t.leftCols(mOld) = tall[i];
      t.rightCols(m - mOld) = tallNew;
      tall[i] = std::move(t);
      reduced[i] = std::move(r);
    }
  };
  update(p.termsA(), rm.tallA, rm.reducedTermsA);
  update(p.termsB(), rm.tallB, rm.reducedTermsB);
  rm.subspace = s;
}

namespace {

void assembleReduced(const ReducedModel& rm, const Vec& omega, Mat& Ar, Mat& Br) {
  const AffinePencil& p = *rm.pencil;
  const int m = rm.subspace.dim();
  std::span<const double> w(omega.data(), static_cast<size_t>(omega.size()));
  Ar = Mat::Zero(m, m);
  Br = Mat::Zero(m, m);
  for (size_t i = 0; i < p.termsA().size(); ++i)
    Ar += p.termsA()[i].coeff->eval(w) * rm.reducedTermsA[i];
  for (size_t i = 0; i < p.termsB().size(); ++i)
    Br += p.termsB()[i].coeff->eval(w) * rm.reducedTermsB[i];
  Ar = 0.5 * (Ar + Ar.transpose()).eval();
  Br = 0.5 * (Br + Br.transpose()).eval();
}

}  // namespace

ReducedEigpairs reducedMinEigpairs(const ReducedModel& rm, const Vec& omega, int m) {
  const int M = rm.subspace.dim();
  if (m < 1 || m > M) throw std::runtime_error("requested more pairs than the reduced dimension");
  Mat Ar, Br;
  assembleReduced(rm, omega, Ar, Br);
  Eigen::LLT<Mat> llt(Br);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("reduced B lost positive definiteness");
  Mat L = llt.matrixL();
  Mat C = L.triangularView<Eigen::Lower>().solve(Ar.transpose()).transpose();
  C = L.triangularView<Eigen::Lower>().solve(C);
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(C);
  if (es.info() != Eigen::Success) throw std::runtime_error("reduced eigensolve failed");
  Mat Q = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());

  ReducedEigpairs out;
  out.coefVectors.resize(M, m);
  out.liftedVectors.resize(rm.subspace.ambientDim(), m);
  for (int i = 0; i < m; ++i) {
    out.values.push_back(es.eigenvalues()[i]);
    Vec c = Q.col(i);
    Vec x = rm.subspace.basis() * c;
    // Sign convention of the lifted vector; flip the coefficients with it.
    int imax = 0;
    double amax = 0;
    for (int r = 0; r < x.size(); ++r)
      if (std::abs(x[r]) > amax) { amax = std::abs(x[r]); imax = r; }
    if (x[imax] < 0) { x = -x; c = -c; }
    out.coefVectors.col(i) = c;
    out.liftedVectors.col(i) = x;
  }
  return out;
}

double fastResidualNorm(const ReducedModel& rm, const Vec& omega, double lambdaTilde,
                        const Vec& coefVector) {
  const AffinePencil& p = *rm.pencil;
  std::span<const double> w(omega.data(), static_cast<size_t>(omega.size()));
  Vec r = Vec::Zero(rm.subspace.ambientDim());
  for (size_t i = 0; i < p.termsA().size(); ++i)
    r += p.termsA()[i].coeff->eval(w) * (rm.tallA[i] * coefVector);
  for (size_t i = 0; i < p.termsB().size(); ++i)
    r -= lambdaTilde * p.termsB()[i].coeff->eval(w) * (rm.tallB[i] * coefVector);
  return r.norm();
}

}  // namespace eigsur
