// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "eigsur/pencil.hpp"

namespace eigsur {

enum class RotationMode { Identity, Givens };

struct ProblemSpec {
  std::string name;
  std::shared_ptr<const AffinePencil> pencil;
  std::function<double(const Vec&)> lambda1;  // closed form, when known
  std::function<double(const Vec&)> lambda2;
};

/// Two coupled modes rotating with (w1, w2) on [-0.5, 0.5]^2 ahead of a fixed
/// ascending tail 3..n; B = I. Closed forms: 1 -/+ sqrt(w1^2 + w2^2).
/// Givens mode conjugates by a fixed seeded orthogonal matrix.
ProblemSpec example1(int n, RotationMode mode = RotationMode::Identity, unsigned seed = 42);

/// The 2x2 instance with identity rotation; ships the closed-form derivative
/// norm ||dx1/dw2||(w1, 0) = 1 / (2 |w1|).
ProblemSpec example3();

/// Random sparse symmetric A terms with analytic coefficients and an
/// SPD-dominant B; deterministic for a fixed seed. Domain [0, 1]^2.
ProblemSpec syntheticAffine(int n, int m0, int m1, unsigned seed);

/// Tridiagonal stiffness/mass pair, A(w) = w2 (K0 + w1^3 K1),
/// B(w) = M0 + w1 M1, domain [0.1, 1] x [100, 1000].
ProblemSpec beamLike(int n);

ProblemSpec makeFixture(const std::string& name, int n, unsigned seed);

}  // namespace eigsur
