// SPDX-License-Identifier: Apache-2.0
#include "eigsur/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "eigsur/sensitivity.hpp"

namespace eigsur {

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveMode chooseMode(const AffinePencil& p, const GreedyConfig& cfg) {
  if (cfg.forceShiftInvert || !p.dense()) return SolveMode::ShiftInvert;
  return SolveMode::Dense;
}

/// Solve at omega and extend the subspace with m eigenvectors plus, when
/// enabled and the simplicity guard passes, the d eigenvector derivatives.
SampleRecord enrichAt(GreedyState& state, const Vec& omega, const std::string& kind,
                      Subspace& subspace, GreedyTimings* timings) {
  const AffinePencil& p = *state.pencil;
  const GreedyConfig& cfg = state.cfg;
  SampleRecord rec;
  rec.omega = omega;
  rec.kind = kind;

  auto t0 = std::chrono::steady_clock::now();
  const int mSolve = std::min<int>(std::max(cfg.m, 2), p.dim());
  SparseMat A = p.assembleA(omega);
  SparseMat B = p.assembleB(omega);
  RitzSet rs = smallestEigpairs(A, B, mSolve, chooseMode(p, cfg), cfg.solver);
  if (timings) {
    timings->eigSecondsPerVector += seconds(t0);
    timings->eigVectors += std::min(cfg.m, mSolve);
  }

  std::vector<Vec> vectors;
  std::vector<ColumnProvenance> prov;
  for (int k = 0; k < std::min(cfg.m, mSolve); ++k) {
    vectors.push_back(rs.vectors.col(k));
    prov.push_back({omega, ColumnProvenance::Kind::Eigvec, k + 1});
  }

  if (cfg.useDerivatives) {
    const double gap = mSolve >= 2 ? std::abs(rs.values[0] - rs.values[1])
                                   : std::numeric_limits<double>::infinity();
    if (gap > cfg.simplicityThreshold) {
      auto t1 = std::chrono::steady_clock::now();
      auto results = eigenvectorDerivativesBordered(p, omega, rs.values[0], rs.vectors.col(0));
      if (timings) {
        timings->derivativeSecondsPerVector += seconds(t1);
        timings->derivativeVectors += static_cast<int>(results.size());
      }
      for (size_t j = 0; j < results.size(); ++j) {
        const auto& r = results[j];
        // A vanishing true derivative comes back as solver noise; the relative
        // deflation test cannot catch it, so floor it against the solve scale.
        double floor = 1e-12 * (1.0 + std::abs(r.dlambda) + rs.vectors.col(0).norm());
        if (r.dx.norm() <= floor) {
          ++rec.deflated;
          continue;
        }
        vectors.push_back(r.dx);
        prov.push_back({omega, ColumnProvenance::Kind::Derivative, static_cast<int>(j) + 1});
      }
    } else {
      rec.derivativesSkipped = true;
    }
  }

  auto flags = subspace.extend(vectors, prov);
  const int dropped = static_cast<int>(std::count(flags.begin(), flags.end(), true));
  rec.deflated += dropped;
  rec.vectorsAdded = static_cast<int>(flags.size()) - dropped;
  return rec;
}

}  // namespace

Vec Grid::point(size_t index) const {
  const size_t d = axes.size();
  Vec p(d);
  for (size_t i = d; i-- > 0;) {
    size_t ni = axes[i].size();
    p[i] = axes[i][index % ni];
    index /= ni;
  }
  return p;
}

Grid makeGrid(const Vec& a, const Vec& b, const std::vector<int>& counts) {
  if (a.size() != b.size() || static_cast<size_t>(a.size()) != counts.size())
    throw std::runtime_error("grid dimensions disagree");
  Grid g;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (!(a[i] < b[i])) throw std::runtime_error("degenerate grid interval");
    if (counts[i] < 2) throw std::runtime_error("grid needs at least 2 points per dimension");
    double h = (b[i] - a[i]) / (counts[i] - 1);
    std::vector<double> ax(counts[i]);
    for (int j = 0; j < counts[i]; ++j) ax[j] = a[i] + j * h;
    g.axes.push_back(std::move(ax));
  }
  return g;
}

size_t GreedyState::activeCount() const {
  return static_cast<size_t>(std::count(active.begin(), active.end(), 1));
}

GreedyState initialize(std::shared_ptr<const AffinePencil> pencil, GreedyConfig cfg,
                       GreedyTimings* timings) {
  auto t0 = std::chrono::steady_clock::now();
  const AffinePencil& p = *pencil;
  const int d = p.paramCount();
  if (cfg.initGrid.empty()) cfg.initGrid.assign(d, 3);
  if (cfg.trainGrid.empty()) cfg.trainGrid.assign(d, 25);
  if (static_cast<int>(cfg.initGrid.size()) != d ||
      static_cast<int>(cfg.trainGrid.size()) != d)
    throw std::runtime_error("grid spec does not match parameter count");
  if (!(cfg.tol > 0)) throw std::runtime_error("tolerance must be positive");
  if (cfg.m < 1) throw std::runtime_error("need at least one eigenvector per sample");
  for (int i = 0; i < d; ++i)
    if (cfg.trainGrid[i] <= cfg.initGrid[i])
      throw std::runtime_error("training grid must be strictly finer than the initial grid");

  Vec a(d), b(d);
  for (int i = 0; i < d; ++i) {
    a[i] = p.domain()[i][0];
    b[i] = p.domain()[i][1];
  }

  GreedyState state;
  state.pencil = pencil;
  state.cfg = cfg;
  state.train = makeGrid(a, b, cfg.trainGrid);
  state.boundCtx = makeBoundContext(p, p.domainCenter(), cfg.boundPolicy);

  Grid init = makeGrid(a, b, cfg.initGrid);
  Subspace subspace(p.dim(), cfg.deflationTol);
  for (size_t i = 0; i < init.size(); ++i)
    state.samples.push_back(enrichAt(state, init.point(i), "init", subspace, timings));
  state.model = projectPencil(pencil, subspace);

  state.upperBound.assign(state.train.size(), 1.0);  // u_old = 1
  state.active.assign(state.train.size(), 1);
  if (timings) timings->initSeconds = seconds(t0);
  return state;
}

SweepResult sweepBounds(GreedyState& state) {
  const GreedyConfig& cfg = state.cfg;
  SweepResult res;

  std::vector<size_t> order;
  for (size_t i = 0; i < state.active.size(); ++i)
    if (state.active[i]) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    return state.upperBound[x] > state.upperBound[y];
  });

  double uMax = -std::numeric_limits<double>::infinity();
  std::optional<size_t> argmax;
  size_t cut = order.size();

  for (size_t k = 0; k < order.size(); ++k) {
    size_t idx = order[k];
    if (cfg.saturationSkip && state.upperBound[idx] <= uMax) {
      // Stored bounds only decrease (C = 1), so every remaining point is
      // dominated by the running maximum.
      cut = k;
      break;
    }
    Vec omega = state.train.point(idx);
    const int M = state.model.subspace.dim();
    const int mEff = std::min(std::max(cfg.m, cfg.m > 1 ? 2 : 1), M);
    auto pairs = reducedMinEigpairs(state.model, omega, mEff);
    double resNorm = fastResidualNorm(state.model, omega, pairs.values[0],
                                      pairs.coefVectors.col(0));
    double gapEstimate = mEff >= 2 ? pairs.values[1] - pairs.values[0] : 0.0;
    double uNew = selectBound(mEff, resNorm, gapEstimate, state.boundCtx);
    double u = std::min(state.upperBound[idx], uNew);
    state.upperBound[idx] = u;
    ++res.recomputed;
    if (u > uMax || (u == uMax && argmax && idx < *argmax)) {
      uMax = u;
      argmax = idx;
    }
    if (u < cfg.tol) {
      state.active[idx] = 0;  // into Omega_valid
      ++res.pruned;
    }
  }

  // Skipped points carry a valid upper bound from an earlier sweep; prune the
  // ones already below tolerance.
  for (size_t k = cut; k < order.size(); ++k) {
    size_t idx = order[k];
    ++res.skipped;
    if (state.upperBound[idx] < cfg.tol) {
      state.active[idx] = 0;
      ++res.pruned;
    }
  }

  if (argmax && state.active[*argmax]) {
    res.maxPoint = argmax;
    res.maxBound = uMax;
  } else {
    res.maxPoint.reset();
    res.maxBound = std::max(uMax, 0.0);
  }
  return res;
}

void step(GreedyState& state, size_t trainIndex, GreedyTimings* timings) {
  if (!state.active[trainIndex]) throw std::runtime_error("stepping at a pruned point");
  auto t0 = std::chrono::steady_clock::now();
  Subspace subspace = state.model.subspace;
  state.samples.push_back(
      enrichAt(state, state.train.point(trainIndex), "greedy", subspace, timings));
  updateProjection(state.model, subspace);
  state.active[trainIndex] = 0;  // removed even if every vector deflated
  state.selectionLog.push_back(trainIndex);
  ++state.iteration;
  if (timings) timings->stepSeconds += seconds(t0);
}

GreedyReport run(GreedyState& state) {
  GreedyTimings timings;
  auto t0 = std::chrono::steady_clock::now();
  const GreedyConfig& cfg = state.cfg;
  for (int it = 0; it < cfg.nMax && state.activeCount() > 0; ++it) {
    auto ts = std::chrono::steady_clock::now();
    SweepResult sr = sweepBounds(state);
    timings.sweepSeconds += seconds(ts);
    state.maxBoundTrace.push_back(sr.maxBound);
    if (!sr.maxPoint) break;  // everything left fell below tolerance
    step(state, *sr.maxPoint, &timings);
  }
  GreedyReport rep;
  rep.converged = state.activeCount() == 0;
  rep.iterations = state.iteration;
  rep.basisDim = state.model.subspace.dim();
  rep.samples = state.samples;
  rep.maxBoundTrace = state.maxBoundTrace;
  rep.selectionLog = state.selectionLog;
  timings.totalSeconds = seconds(t0);
  if (timings.eigVectors > 0) timings.eigSecondsPerVector /= timings.eigVectors;
  if (timings.derivativeVectors > 0)
    timings.derivativeSecondsPerVector /= timings.derivativeVectors;
  rep.timings = timings;
  return rep;
}

GreedyReport run(std::shared_ptr<const AffinePencil> pencil, GreedyConfig cfg,
                 GreedyState* outState) {
  GreedyTimings initTimings;
  GreedyState state = initialize(std::move(pencil), std::move(cfg), &initTimings);
  GreedyReport rep = run(state);
  rep.timings.initSeconds = initTimings.initSeconds;
  if (outState) *outState = std::move(state);
  return rep;
}

SurrogateEvaluation evaluateSurrogate(const ReducedModel& model, const BoundContext& ctx, int m,
                                      const Vec& omega) {
  const int M = model.subspace.dim();
  const int mEff = std::min(std::max(m, m > 1 ? 2 : 1), M);
  auto pairs = reducedMinEigpairs(model, omega, mEff);
  SurrogateEvaluation ev;
  ev.lambda1 = pairs.values[0];
  double resNorm = fastResidualNorm(model, omega, pairs.values[0], pairs.coefVectors.col(0));
  ev.gapEstimate = mEff >= 2 ? pairs.values[1] - pairs.values[0] : 0.0;
  ev.bound = selectBound(mEff, resNorm, ev.gapEstimate, ctx, &ev.fellBackToBauerFike);
  return ev;
}

}  // namespace eigsur
