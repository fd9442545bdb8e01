// SPDX-License-Identifier: Apache-2.0
#include "eigsur/matrix_market.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace eigsur {

namespace {

std::string nextDataLine(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') return line;
  }
  return {};
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::runtime_error("matrix market file '" + path + "': " + msg);
}

}  // namespace

SparseMat readMatrixMarketSparse(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || object != "matrix") fail(path, "bad banner");
  if (format != "coordinate") fail(path, "expected coordinate format");
  if (field != "real" && field != "integer") fail(path, "expected real entries");
  bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") fail(path, "unsupported symmetry '" + symmetry + "'");

  std::istringstream sz(nextDataLine(in));
  long rows = 0, cols = 0, nnz = 0;
  sz >> rows >> cols >> nnz;
  if (rows <= 0 || cols <= 0 || nnz < 0) fail(path, "bad size line");

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(symmetric ? 2 * nnz : nnz);
  for (long k = 0; k < nnz; ++k) {
    std::istringstream ls(nextDataLine(in));
    long i = 0, j = 0;
    double v = 0;
    ls >> i >> j >> v;
    if (i < 1 || i > rows || j < 1 || j > cols) fail(path, "entry index out of range");
    trip.emplace_back(i - 1, j - 1, v);
    if (symmetric && i != j) trip.emplace_back(j - 1, i - 1, v);
  }
  SparseMat m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

void writeMatrixMarketSymmetric(const std::string& path, const SparseMat& m) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  long nnz = 0;
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMat::InnerIterator it(m, c); it; ++it)
      if (it.row() >= it.col()) ++nnz;
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real symmetric\n");
  std::fprintf(f, "%ld %ld %ld\n", static_cast<long>(m.rows()), static_cast<long>(m.cols()), nnz);
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMat::InnerIterator it(m, c); it; ++it)
      if (it.row() >= it.col())
        std::fprintf(f, "%ld %ld %.17g\n", static_cast<long>(it.row()) + 1,
                     static_cast<long>(it.col()) + 1, it.value());
  std::fclose(f);
}

Eigen::MatrixXd readMatrixMarketDense(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || format != "array") fail(path, "expected array format");
  std::istringstream sz(nextDataLine(in));
  long rows = 0, cols = 0;
  sz >> rows >> cols;
  if (rows <= 0 || cols <= 0) fail(path, "bad size line");
  Eigen::MatrixXd m(rows, cols);
  for (long c = 0; c < cols; ++c)
    for (long r = 0; r < rows; ++r) {
      std::istringstream ls(nextDataLine(in));
      if (!(ls >> m(r, c))) fail(path, "truncated array data");
    }
  return m;
}

void writeMatrixMarketDense(const std::string& path, const Eigen::MatrixXd& m) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  std::fprintf(f, "%%%%MatrixMarket matrix array real general\n");
  std::fprintf(f, "%ld %ld\n", static_cast<long>(m.rows()), static_cast<long>(m.cols()));
  for (long c = 0; c < m.cols(); ++c)
    for (long r = 0; r < m.rows(); ++r) std::fprintf(f, "%.17g\n", m(r, c));
  std::fclose(f);
}

}  // namespace eigsur
