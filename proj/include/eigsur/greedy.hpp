// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "eigsur/bounds.hpp"
#include "eigsur/eigcore.hpp"
#include "eigsur/reduction.hpp"

namespace eigsur {

/// Cartesian tensor grid; enumeration runs the last dimension fastest.
struct Grid {
  std::vector<std::vector<double>> axes;

  size_t size() const {
    size_t s = 1;
    for (const auto& ax : axes) s *= ax.size();
    return s;
  }
  Vec point(size_t index) const;
};

Grid makeGrid(const Vec& a, const Vec& b, const std::vector<int>& counts);

struct GreedyConfig {
  int m = 2;                   // eigenvectors per sample
  bool useDerivatives = true;
  double tol = 1e-5;
  int nMax = 500;
  std::vector<int> initGrid;   // defaults to 3 per dimension
  std::vector<int> trainGrid;  // defaults to 25 per dimension
  double simplicityThreshold = 1e-8;
  double deflationTol = 1e-10;
  BoundPolicy boundPolicy = BoundPolicy::Auto;
  bool saturationSkip = true;
  bool forceShiftInvert = false;  // full solves default to dense under the pencil threshold
  SolverOptions solver;
};

struct SampleRecord {
  Vec omega;
  std::string kind;  // "init" or "greedy"
  int vectorsAdded = 0;
  int deflated = 0;
  bool derivativesSkipped = false;  // simplicity guard hit
};

struct GreedyState {
  std::shared_ptr<const AffinePencil> pencil;
  GreedyConfig cfg;
  Grid train;
  ReducedModel model;
  BoundContext boundCtx;
  std::vector<double> upperBound;  // u(omega) per training point, starts at 1
  std::vector<char> active;        // point still in Omega_train
  std::vector<SampleRecord> samples;
  std::vector<double> maxBoundTrace;
  std::vector<size_t> selectionLog;  // chosen training-grid indices, in order
  int iteration = 0;

  size_t activeCount() const;
};

struct GreedyTimings {
  double initSeconds = 0, sweepSeconds = 0, stepSeconds = 0, totalSeconds = 0;
  double derivativeSecondsPerVector = 0, eigSecondsPerVector = 0;
  int derivativeVectors = 0, eigVectors = 0;
};

struct GreedyReport {
  bool converged = false;
  int iterations = 0;
  int basisDim = 0;
  std::vector<SampleRecord> samples;
  std::vector<double> maxBoundTrace;
  std::vector<size_t> selectionLog;
  GreedyTimings timings;
};

struct SweepResult {
  std::optional<size_t> maxPoint;  // training-grid index of the worst point, if any remains
  double maxBound = 0;
  int recomputed = 0;
  int skipped = 0;
  int pruned = 0;
};

GreedyState initialize(std::shared_ptr<const AffinePencil> pencil, GreedyConfig cfg,
                       GreedyTimings* timings = nullptr);

/// One bound sweep over the active training points in descending stored-bound
/// order, with the saturation skip (C = 1) when enabled. Updates u as
/// min(u_old, u_new), prunes points below tol, and returns the argmax.
SweepResult sweepBounds(GreedyState& state);

/// Enrich at the given training point and drop it from the training set.
void step(GreedyState& state, size_t trainIndex, GreedyTimings* timings = nullptr);

GreedyReport run(GreedyState& state);
GreedyReport run(std::shared_ptr<const AffinePencil> pencil, GreedyConfig cfg,
                 GreedyState* outState = nullptr);

struct SurrogateEvaluation {
  double lambda1 = 0;
  double bound = 0;
  double gapEstimate = 0;
  bool fellBackToBauerFike = false;
};

/// Reduced solve + fast residual + selected bound at one parameter point.
SurrogateEvaluation evaluateSurrogate(const ReducedModel& model, const BoundContext& ctx, int m,
                                      const Vec& omega);

}  // namespace eigsur
