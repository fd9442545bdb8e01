// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eigsur/pencil.hpp"

namespace eigsur {

enum class BoundPolicy { Auto, BauerFike, KatoTemple };

/// One reference lambda_min(B(omega_ref)) reused over the whole domain.
struct BoundContext {
  double bminRef = 1.0;
  Vec omegaRef;
  BoundPolicy policy = BoundPolicy::Auto;
  double safetyFactor = 1.0;   // conservative mode: multiplies the bound
  double deltaFloor = 1e-12;   // gaps below this fall back to Bauer-Fike
};

/// Smallest eigenvalue of B(omega_ref); throws if B is not SPD there.
double referenceBmin(const AffinePencil& p, const Vec& omegaRef);

BoundContext makeBoundContext(const AffinePencil& p, const Vec& omegaRef,
                              BoundPolicy policy = BoundPolicy::Auto);

/// resNorm / sqrt(bminRef)
double bauerFike(double resNorm, const BoundContext& ctx);

/// resNorm^2 / (bminRef * delta); delta <= deltaFloor falls back to Bauer-Fike.
/// fellBack, when given, reports the fallback.
double katoTemple(double resNorm, double delta, const BoundContext& ctx,
                  bool* fellBack = nullptr);

/// m > 1: Kato-Temple with the reduced-problem gap estimate; m = 1: Bauer-Fike.
double selectBound(int m, double resNorm, double gapEstimate, const BoundContext& ctx,
                   bool* fellBack = nullptr);

}  // namespace eigsur
