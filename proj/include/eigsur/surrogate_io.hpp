// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "eigsur/greedy.hpp"
#include "eigsur/problems.hpp"

namespace eigsur {

/// Where the pencil came from, so a saved surrogate can rebuild it.
struct PencilSource {
  enum class Kind { Fixture, File } kind = Kind::Fixture;
  std::string fixtureName;  // Fixture
  int n = 0;
  unsigned seed = 0;
  std::string path;  // File
};

struct Surrogate {
  std::shared_ptr<const AffinePencil> pencil;
  ReducedModel model;
  BoundContext ctx;
  PencilSource source;
  int m = 2;
  double tol = 1e-5;
};

/// Directory layout: manifest.json + basis.mtx (dense array) + reduced term
/// matrices reduced_A<i>.mtx / reduced_B<i>.mtx.
void saveSurrogate(const Surrogate& s, const std::string& dir);
Surrogate loadSurrogate(const std::string& dir);

void writeReportJson(const GreedyReport& rep, const std::string& path);

/// CSV of (iteration, maxBound).
void writeBoundTraceCsv(const GreedyReport& rep, const std::string& path);

}  // namespace eigsur
