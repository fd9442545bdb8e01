// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "eigsur/greedy.hpp"
#include "eigsur/problems.hpp"
#include "eigsur/sensitivity.hpp"
#include "eigsur/surrogate_io.hpp"

namespace fs = std::filesystem;
using namespace eigsur;

namespace {

int logLevel() {
  const char* env = std::getenv("EIGSUR_LOG");
  if (!env) return 1;
  std::string v(env);
  if (v == "debug") return 2;
  if (v == "quiet") return 0;
  return 1;
}

struct CommonOpts {
  std::string pencilFile;
  std::string fixture;
  int n = 50;
  unsigned seed = 0;
  int m = 2;
  bool derivatives = false;
  bool noDerivatives = false;
  double tol = 1e-5;
  int nmax = 500;
  std::vector<int> initGrid;
  std::vector<int> trainGrid;
  std::string out = "surrogate";
  std::string bound = "auto";
  int threads = 1;
};

void addCommon(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--pencil", o.pencilFile, "pencil definition JSON file");
  cmd->add_option("--fixture", o.fixture,
                  "built-in fixture: example1, example1-givens, example3, synthetic, beam");
  cmd->add_option("--n", o.n, "fixture dimension");
  cmd->add_option("--seed", o.seed, "fixture seed");
  cmd->add_option("--m", o.m, "eigenvectors per sample point");
  cmd->add_flag("--derivatives,!--no-derivatives", o.derivatives,
                "add eigenvector derivatives to the subspace");
  cmd->add_option("--tol", o.tol, "target bound tolerance");
  cmd->add_option("--nmax", o.nmax, "greedy iteration cap");
  cmd->add_option("--init-grid", o.initGrid, "initial grid points per dimension")
      ->delimiter(',');
  cmd->add_option("--train-grid", o.trainGrid, "training grid points per dimension")
      ->delimiter(',');
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--bound", o.bound, "bound policy: auto, bf, kt")
      ->check(CLI::IsMember({"auto", "bf", "kt"}));
  cmd->add_option("--threads", o.threads, "worker cap (1 = fully deterministic)");
}

std::pair<std::shared_ptr<const AffinePencil>, PencilSource> loadProblem(const CommonOpts& o) {
  PencilSource src;
  if (!o.pencilFile.empty()) {
    src.kind = PencilSource::Kind::File;
    src.path = o.pencilFile;
    auto pencil = std::make_shared<AffinePencil>(loadPencil(o.pencilFile));
    for (const auto& w : pencil->validate())
      if (logLevel() > 0) std::cerr << "warning: " << w << "\n";
    return {pencil, src};
  }
  std::string name = o.fixture.empty() ? "example1" : o.fixture;
  src.kind = PencilSource::Kind::Fixture;
  src.fixtureName = name;
  src.n = o.n;
  src.seed = o.seed;
  return {makeFixture(name, o.n, o.seed).pencil, src};
}

GreedyConfig makeConfig(const CommonOpts& o) {
  GreedyConfig cfg;
  cfg.m = o.m;
  cfg.useDerivatives = o.derivatives;
  cfg.tol = o.tol;
  cfg.nMax = o.nmax;
  cfg.initGrid = o.initGrid;
  cfg.trainGrid = o.trainGrid;
  cfg.boundPolicy = o.bound == "bf"   ? BoundPolicy::BauerFike
                    : o.bound == "kt" ? BoundPolicy::KatoTemple
                                      : BoundPolicy::Auto;
  return cfg;
}

int cmdBuild(const CommonOpts& o) {
  auto [pencil, src] = loadProblem(o);
  GreedyState state;
  GreedyReport rep = run(pencil, makeConfig(o), &state);

  fs::create_directories(o.out);
  Surrogate sur;
  sur.pencil = pencil;
  sur.model = state.model;
  sur.ctx = state.boundCtx;
  sur.source = src;
  sur.m = o.m;
  sur.tol = o.tol;
  saveSurrogate(sur, o.out);
  writeReportJson(rep, (fs::path(o.out) / "report.json").string());
  writeBoundTraceCsv(rep, (fs::path(o.out) / "max_bound.csv").string());

  if (logLevel() > 0)
    std::cerr << (rep.converged ? "converged" : "NOT converged") << " after " << rep.iterations
              << " iterations, basis dimension " << rep.basisDim << "\n";
  return rep.converged ? 0 : 2;
}

Grid evalGrid(const Surrogate& s, const std::vector<int>& counts) {
  const auto& dom = s.pencil->domain();
  Vec a(dom.size()), b(dom.size());
  for (size_t i = 0; i < dom.size(); ++i) {
    a[i] = dom[i][0];
    b[i] = dom[i][1];
  }
  std::vector<int> c = counts;
  if (c.empty()) c.assign(dom.size(), 10);
  return makeGrid(a, b, c);
}

int cmdEval(const std::string& surrogateDir, const std::vector<double>& omegaFlat,
            const std::vector<int>& gridCounts, const std::string& outFile) {
  Surrogate s = loadSurrogate(surrogateDir);
  const int d = s.pencil->paramCount();

  std::vector<Vec> points;
  if (!omegaFlat.empty()) {
    if (omegaFlat.size() % d != 0)
      throw std::runtime_error("--omega values must come in groups of d");
    for (size_t i = 0; i < omegaFlat.size(); i += d) {
      Vec w(d);
      for (int j = 0; j < d; ++j) w[j] = omegaFlat[i + j];
      points.push_back(w);
    }
  } else {
    Grid g = evalGrid(s, gridCounts);
    for (size_t i = 0; i < g.size(); ++i) points.push_back(g.point(i));
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!outFile.empty()) {
    file.open(outFile);
    if (!file) throw std::runtime_error("cannot write '" + outFile + "'");
    out = &file;
  }
  *out << std::setprecision(17);
  for (int j = 1; j <= d; ++j) *out << "omega" << j << ",";
  *out << "lambda,bound,gapEstimate\n";
  for (const auto& w : points) {
    if (!s.pencil->inDomain(w))
      throw std::runtime_error("evaluation point outside the pencil domain");
    auto ev = evaluateSurrogate(s.model, s.ctx, s.m, w);
    for (int j = 0; j < d; ++j) *out << w[j] << ",";
    *out << ev.lambda1 << "," << ev.bound << "," << ev.gapEstimate << "\n";
  }
  return 0;
}

int cmdAudit(const std::string& surrogateDir, const std::vector<int>& gridCounts,
             const std::string& outFile) {
  Surrogate s = loadSurrogate(surrogateDir);
  Grid g = evalGrid(s, gridCounts);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!outFile.empty()) {
    file.open(outFile);
    out = &file;
  }
  *out << std::setprecision(17) << "lambdaApprox,bound,lambdaTrue,trueError,boundValid\n";
  int invalid = 0, aboveTol = 0;
  for (size_t i = 0; i < g.size(); ++i) {
    Vec w = g.point(i);
    auto ev = evaluateSurrogate(s.model, s.ctx, s.m, w);
    auto rs = smallestEigpairs(s.pencil->assembleA(w), s.pencil->assembleB(w), 1,
                               s.pencil->dense() ? SolveMode::Dense : SolveMode::ShiftInvert);
    double err = std::abs(ev.lambda1 - rs.values[0]);
    bool valid = ev.bound >= err;
    if (!valid) ++invalid;
    if (err >= s.tol) ++aboveTol;
    *out << ev.lambda1 << "," << ev.bound << "," << rs.values[0] << "," << err << ","
         << valid << "\n";
  }
  if (logLevel() > 0)
    std::cerr << "audited " << g.size() << " points: " << aboveTol << " above tol, "
              << invalid << " with bound < true error\n";
  return aboveTol > 0 ? 2 : 0;
}

int cmdCompare(const CommonOpts& o) {
  auto [pencil, src] = loadProblem(o);
  struct Variant {
    const char* label;
    int m;
    bool deriv;
  };
  const Variant variants[] = {{"1eigv", 1, false},
                              {"2eigv", 2, false},
                              {"1eigv+deriv", 1, true},
                              {"2eigv+deriv", 2, true}};
  std::vector<GreedyReport> reps;
  for (const auto& v : variants) {
    GreedyConfig cfg = makeConfig(o);
    cfg.m = v.m;
    cfg.useDerivatives = v.deriv;
    reps.push_back(run(pencil, cfg));
  }

  auto row = [&](const std::string& label, auto get) {
    std::cout << std::left << std::setw(28) << label;
    for (const auto& r : reps) std::cout << std::setw(16) << get(r);
    std::cout << "\n";
  };
  std::cout << std::left << std::setw(28) << "";
  for (const auto& v : variants) std::cout << std::setw(16) << v.label;
  std::cout << "\n";
  row("dimension V", [](const GreedyReport& r) { return std::to_string(r.basisDim); });
  row("nbr points", [](const GreedyReport& r) { return std::to_string(r.samples.size()); });
  row("total time", [](const GreedyReport& r) {
    return std::to_string(r.timings.totalSeconds) + "s";
  });
  row("time derivative (per vec)", [](const GreedyReport& r) {
    return r.timings.derivativeVectors
               ? std::to_string(r.timings.derivativeSecondsPerVector) + "s"
               : std::string("/");
  });
  row("time eigenv (per vec)", [](const GreedyReport& r) {
    return std::to_string(r.timings.eigSecondsPerVector) + "s";
  });

  if (!o.out.empty()) {
    fs::create_directories(o.out);
    for (size_t i = 0; i < reps.size(); ++i)
      writeReportJson(reps[i],
                      (fs::path(o.out) / ("compare_" + std::string(variants[i].label) + ".json"))
                          .string());
  }
  bool allConverged = true;
  for (const auto& r : reps) allConverged = allConverged && r.converged;
  return allConverged ? 0 : 2;
}

int cmdFixtureExport(const std::string& name, int n, unsigned seed, const std::string& outFile) {
  ProblemSpec spec = makeFixture(name, n, seed);
  savePencil(*spec.pencil, outFile);
  if (logLevel() > 0) std::cerr << "wrote " << outFile << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greedy reduced-basis surrogates for minimal eigenvalues of parametric pencils"};
  app.require_subcommand(1);

  CommonOpts bo;
  auto* build = app.add_subcommand("build", "run the greedy construction and save a surrogate");
  addCommon(build, bo);

  std::string evalDir, evalOut;
  std::vector<double> evalOmega;
  std::vector<int> evalGridCounts;
  auto* eval = app.add_subcommand("eval", "evaluate a saved surrogate");
  eval->add_option("surrogate", evalDir, "surrogate directory")->required();
  eval->add_option("--omega", evalOmega, "points, flattened d at a time")->delimiter(',');
  eval->add_option("--grid", evalGridCounts, "evaluation grid per dimension")->delimiter(',');
  eval->add_option("--out", evalOut, "CSV output file (default stdout)");

  std::string auditDir, auditOut;
  std::vector<int> auditGridCounts;
  auto* audit = app.add_subcommand("audit", "compare surrogate against full solves on a grid");
  audit->add_option("surrogate", auditDir, "surrogate directory")->required();
  audit->add_option("--grid", auditGridCounts, "audit grid per dimension")->delimiter(',');
  audit->add_option("--out", auditOut, "CSV output file (default stdout)");

  CommonOpts co;
  auto* compare = app.add_subcommand("compare", "run the four enrichment variants");
  addCommon(compare, co);

  auto* fixture = app.add_subcommand("fixture", "fixture utilities");
  std::string fxName = "example1", fxOut = "pencil.json";
  int fxN = 50;
  unsigned fxSeed = 0;
  auto* fxExport = fixture->add_subcommand("export", "write a fixture as a pencil file");
  fxExport->add_option("name", fxName, "fixture name")->required();
  fxExport->add_option("--n", fxN, "dimension");
  fxExport->add_option("--seed", fxSeed, "seed");
  fxExport->add_option("--out", fxOut, "output JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmdBuild(bo);
    if (eval->parsed()) return cmdEval(evalDir, evalOmega, evalGridCounts, evalOut);
    if (audit->parsed()) return cmdAudit(auditDir, auditGridCounts, auditOut);
    if (compare->parsed()) return cmdCompare(co);
    if (fixture->parsed() && fxExport->parsed())
      return cmdFixtureExport(fxName, fxN, fxSeed, fxOut);
    std::cerr << "no command\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
