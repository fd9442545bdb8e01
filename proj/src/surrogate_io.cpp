// SPDX-License-Identifier: Apache-2.0
#include "eigsur/surrogate_io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>

namespace eigsur {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json provenanceToJson(const std::vector<ColumnProvenance>& prov) {
  json arr = json::array();
  for (const auto& c : prov) {
    json e;
    for (int i = 0; i < c.omega.size(); ++i) e["omega"].push_back(c.omega[i]);
    e["kind"] = c.kind == ColumnProvenance::Kind::Eigvec ? "eigvec" : "derivative";
    e["index"] = c.index;
    arr.push_back(e);
  }
  return arr;
}

std::vector<ColumnProvenance> provenanceFromJson(const json& arr) {
  std::vector<ColumnProvenance> prov;
  for (const auto& e : arr) {
    ColumnProvenance c;
    const auto& w = e.at("omega");
    c.omega.resize(w.size());
    for (size_t i = 0; i < w.size(); ++i) c.omega[i] = w[i].get<double>();
    c.kind = e.at("kind") == "eigvec" ? ColumnProvenance::Kind::Eigvec
                                      : ColumnProvenance::Kind::Derivative;
    c.index = e.at("index").get<int>();
    prov.push_back(std::move(c));
  }
  return prov;
}

}  // namespace

void saveSurrogate(const Surrogate& s, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path base(dir);

  json manifest;
  if (s.source.kind == PencilSource::Kind::Fixture) {
    manifest["pencil"] = {{"fixture", s.source.fixtureName},
                          {"n", s.source.n},
                          {"seed", s.source.seed}};
  } else {
    manifest["pencil"] = {{"file", s.source.path}};
  }
  manifest["m"] = s.m;
  manifest["tol"] = s.tol;
  manifest["basisDim"] = s.model.subspace.dim();
  manifest["deflationTol"] = s.model.subspace.deflationTol();
  manifest["bound"] = {{"bminRef", s.ctx.bminRef},
                       {"policy", s.ctx.policy == BoundPolicy::BauerFike    ? "bf"
                                  : s.ctx.policy == BoundPolicy::KatoTemple ? "kt"
                                                                            : "auto"},
                       {"safetyFactor", s.ctx.safetyFactor},
                       {"deltaFloor", s.ctx.deltaFloor}};
  for (int i = 0; i < s.ctx.omegaRef.size(); ++i)
    manifest["bound"]["omegaRef"].push_back(s.ctx.omegaRef[i]);
  manifest["provenance"] = provenanceToJson(s.model.subspace.provenance());

  writeMatrixMarketDense((base / "basis.mtx").string(), s.model.subspace.basis());
  for (size_t i = 0; i < s.model.reducedTermsA.size(); ++i)
    writeMatrixMarketDense((base / ("reduced_A" + std::to_string(i) + ".mtx")).string(),
                           s.model.reducedTermsA[i]);
  for (size_t i = 0; i < s.model.reducedTermsB.size(); ++i)
    writeMatrixMarketDense((base / ("reduced_B" + std::to_string(i) + ".mtx")).string(),
                           s.model.reducedTermsB[i]);

  std::ofstream out(base / "manifest.json");
  if (!out) throw std::runtime_error("cannot write surrogate manifest");
  out << manifest.dump(2) << "\n";
}

Surrogate loadSurrogate(const std::string& dir) {
  const fs::path base(dir);
  std::ifstream in(base / "manifest.json");
  if (!in) throw std::runtime_error("cannot open surrogate manifest in '" + dir + "'");
  json manifest;
  try {
    in >> manifest;
  } catch (const std::exception& e) {
    throw std::runtime_error("corrupt surrogate manifest: " + std::string(e.what()));
  }

  Surrogate s;
  const auto& pj = manifest.at("pencil");
  if (pj.contains("fixture")) {
    s.source.kind = PencilSource::Kind::Fixture;
    s.source.fixtureName = pj.at("fixture").get<std::string>();
    s.source.n = pj.at("n").get<int>();
    s.source.seed = pj.at("seed").get<unsigned>();
    s.pencil = makeFixture(s.source.fixtureName, s.source.n, s.source.seed).pencil;
  } else {
    s.source.kind = PencilSource::Kind::File;
    s.source.path = pj.at("file").get<std::string>();
    s.pencil = std::make_shared<AffinePencil>(loadPencil(s.source.path));
  }
  s.m = manifest.at("m").get<int>();
  s.tol = manifest.at("tol").get<double>();

  Mat basis = readMatrixMarketDense((base / "basis.mtx").string());
  auto prov = provenanceFromJson(manifest.at("provenance"));
  Subspace subspace(s.pencil->dim(), manifest.value("deflationTol", 1e-10));
  subspace.setBasis(std::move(basis), std::move(prov));
  s.model = projectPencil(s.pencil, subspace);

  // The stored reduced matrices are authoritative; the projection above only
  // rebuilds the tall products. Verify consistency, then adopt the stored ones.
  auto adopt = [&](std::vector<Mat>& reduced, const char* prefix) {
    for (size_t i = 0; i < reduced.size(); ++i) {
      Mat stored = readMatrixMarketDense(
          (base / (std::string(prefix) + std::to_string(i) + ".mtx")).string());
      if ((stored - reduced[i]).cwiseAbs().maxCoeff() >
          1e-10 * std::max(1.0, stored.cwiseAbs().maxCoeff()))
        throw std::runtime_error("surrogate reduced matrices inconsistent with basis");
      reduced[i] = std::move(stored);
    }
  };
  adopt(s.model.reducedTermsA, "reduced_A");
  adopt(s.model.reducedTermsB, "reduced_B");

  const auto& bj = manifest.at("bound");
  s.ctx.bminRef = bj.at("bminRef").get<double>();
  std::string pol = bj.at("policy").get<std::string>();
  s.ctx.policy = pol == "bf"   ? BoundPolicy::BauerFike
                 : pol == "kt" ? BoundPolicy::KatoTemple
                               : BoundPolicy::Auto;
  s.ctx.safetyFactor = bj.value("safetyFactor", 1.0);
  s.ctx.deltaFloor = bj.value("deltaFloor", 1e-12);
  if (bj.contains("omegaRef")) {
    const auto& w = bj.at("omegaRef");
    s.ctx.omegaRef.resize(w.size());
    for (size_t i = 0; i < w.size(); ++i) s.ctx.omegaRef[i] = w[i].get<double>();
  }
  return s;
}

void writeReportJson(const GreedyReport& rep, const std::string& path) {
  json j;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["basisDim"] = rep.basisDim;
  j["samples"] = json::array();
  for (const auto& s : rep.samples) {
    json e;
    for (int i = 0; i < s.omega.size(); ++i) e["omega"].push_back(s.omega[i]);
    e["kind"] = s.kind;
    e["added"] = s.vectorsAdded;
    e["deflated"] = s.deflated;
    e["derivativesSkipped"] = s.derivativesSkipped;
    j["samples"].push_back(e);
  }
  j["maxBoundTrace"] = rep.maxBoundTrace;
  j["selection"] = rep.selectionLog;
  j["timings"] = {{"initSeconds", rep.timings.initSeconds},
                  {"sweepSeconds", rep.timings.sweepSeconds},
                  {"stepSeconds", rep.timings.stepSeconds},
                  {"totalSeconds", rep.timings.totalSeconds},
                  {"derivativeSecondsPerVector", rep.timings.derivativeSecondsPerVector},
                  {"eigSecondsPerVector", rep.timings.eigSecondsPerVector}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report '" + path + "'");
  out << j.dump(2) << "\n";
}

void writeBoundTraceCsv(const GreedyReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace '" + path + "'");
  out << "iteration,maxBound\n";
  for (size_t i = 0; i < rep.maxBoundTrace.size(); ++i)
    out << i << "," << std::setprecision(17) << rep.maxBoundTrace[i] << "\n";
}

}  // namespace eigsur
