// SPDX-License-Identifier: Apache-2.0
#include "eigsur/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "eigsur/eigcore.hpp"

namespace eigsur {

double referenceBmin(const AffinePencil& p, const Vec& omegaRef) {
  Mat B = p.assembleBDense(omegaRef);
  Mat I = Mat::Identity(B.rows(), B.cols());
  auto [values, X] = fullSpectrum(B, I);
  double bmin = values[0];
  if (!(bmin > 0)) throw std::runtime_error("B(omega_ref) is not positive definite");
  return bmin;
}

BoundContext makeBoundContext(const AffinePencil& p, const Vec& omegaRef, BoundPolicy policy) {
  BoundContext ctx;
  ctx.omegaRef = omegaRef;
  ctx.bminRef = referenceBmin(p, omegaRef);
  ctx.policy = policy;
  return ctx;
}

double bauerFike(double resNorm, const BoundContext& ctx) {
  if (resNorm < 0) throw std::runtime_error("negative residual norm");
  if (!(ctx.bminRef > 0)) throw std::runtime_error("bound context has nonpositive bminRef");
  return ctx.safetyFactor * resNorm / std::sqrt(ctx.bminRef);
}

double katoTemple(double resNorm, double delta, const BoundContext& ctx, bool* fellBack) {
  if (fellBack) *fellBack = false;
  if (resNorm < 0) throw std::runtime_error("negative residual norm");
  if (delta <= ctx.deltaFloor) {
    if (fellBack) *fellBack = true;
    return bauerFike(resNorm, ctx);
  }
  return ctx.safetyFactor * resNorm * resNorm / (ctx.bminRef * delta);
}

double selectBound(int m, double resNorm, double gapEstimate, const BoundContext& ctx,
                   bool* fellBack) {
  if (m < 1) throw std::runtime_error("need at least one eigenvector per sample");
  if (fellBack) *fellBack = false;
  switch (ctx.policy) {
    case BoundPolicy::BauerFike: return bauerFike(resNorm, ctx);
    case BoundPolicy::KatoTemple: return katoTemple(resNorm, gapEstimate, ctx, fellBack);
    case BoundPolicy::Auto:
      if (m > 1) return katoTemple(resNorm, gapEstimate, ctx, fellBack);
      return bauerFike(resNorm, ctx);
  }
  throw std::runtime_error("unreachable bound policy");
}

}  // namespace eigsur
