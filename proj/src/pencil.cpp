// SPDX-License-Identifier: Apache-2.0
#include "eigsur/pencil.hpp"

#include <Eigen/Cholesky>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

namespace eigsur {

namespace fs = std::filesystem;

SparseMat symmetrized(const SparseMat& m, const std::string& what) {
  SparseMat mt = SparseMat(m.transpose());
  SparseMat diff = m - mt;
  double defect = 0, scale = 0;
  for (int c = 0; c < diff.outerSize(); ++c)
    for (SparseMat::InnerIterator it(diff, c); it; ++it)
      defect = std::max(defect, std::abs(it.value()));
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMat::InnerIterator it(m, c); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  if (defect > 1e-12 * std::max(scale, 1e-300))
    throw std::runtime_error(what + " is not symmetric (defect " + std::to_string(defect) + ")");
  SparseMat s = 0.5 * (m + mt);
  s.makeCompressed();
  return s;
}

bool containsAbs(const Expr::Ptr& e) {
  if (!e) return false;
  if (e->kind() == Expr::Kind::Abs) return true;
  return containsAbs(e->left()) || containsAbs(e->right());
}

AffinePencil::AffinePencil(int d, std::vector<std::array<double, 2>> domain,
                           std::vector<PencilTerm> termsA, std::vector<PencilTerm> termsB,
                           PencilOptions opts)
    : d_(d), domain_(std::move(domain)), termsA_(std::move(termsA)),
      termsB_(std::move(termsB)), opts_(opts) {
  if (d_ < 1) throw std::runtime_error("pencil needs at least one parameter");
  if (static_cast<int>(domain_.size()) != d_) throw std::runtime_error("domain/d mismatch");
  for (auto& [a, b] : domain_)
    if (!(a < b)) throw std::runtime_error("degenerate domain interval");
  if (termsA_.empty() || termsB_.empty()) throw std::runtime_error("pencil needs A and B terms");
  n_ = static_cast<int>(termsA_.front().mat.rows());
  auto check = [&](const std::vector<PencilTerm>& ts, const char* side) {
    for (size_t i = 0; i < ts.size(); ++i) {
      if (ts[i].mat.rows() != n_ || ts[i].mat.cols() != n_)
        throw std::runtime_error(std::string(side) + " term " + std::to_string(i) +
                                 " has mismatched dimension");
      if (!ts[i].coeff) throw std::runtime_error("missing coefficient expression");
    }
  };
  check(termsA_, "A");
  check(termsB_, "B");
}

bool AffinePencil::inDomain(const Vec& omega) const {
  if (omega.size() != d_) return false;
  for (int i = 0; i < d_; ++i)
    if (omega[i] < domain_[i][0] - 1e-14 || omega[i] > domain_[i][1] + 1e-14) return false;
  return true;
}

Vec AffinePencil::domainCenter() const {
  Vec c(d_);
  for (int i = 0; i < d_; ++i) c[i] = 0.5 * (domain_[i][0] + domain_[i][1]);
  return c;
}

void AffinePencil::checkDomain(const Vec& omega) const {
  if (omega.size() != d_)
    throw std::runtime_error("parameter point has wrong dimension");
  if (!inDomain(omega)) {
    if (opts_.domainCheckIsError)
      throw std::runtime_error("parameter point outside the declared domain");
    std::cerr << "warning: evaluating pencil outside the declared domain\n";
  }
}

SparseMat AffinePencil::assembleTerms(const std::vector<PencilTerm>& terms,
                                      const Vec& omega) const {
  SparseMat out(n_, n_);
  std::span<const double> w(omega.data(), static_cast<size_t>(omega.size()));
  for (const auto& t : terms) out += t.coeff->eval(w) * t.mat;
  out.makeCompressed();
  return out;
}

Mat AffinePencil::assembleTermsDense(const std::vector<PencilTerm>& terms, const Vec& omega,
                                     int order, int j, int k) const {
  Mat out = Mat::Zero(n_, n_);
  std::span<const double> w(omega.data(), static_cast<size_t>(omega.size()));
  for (const auto& t : terms) {
    Expr::Ptr c = t.coeff;
    if (order >= 1) c = c->diff(std::min(j, k));
    if (order >= 2) c = c->diff(std::max(j, k));
    double v = c->eval(w);
    if (v != 0.0) out += v * Mat(t.mat);
  }
  return out;
}

SparseMat AffinePencil::assembleA(const Vec& omega) const {
  checkDomain(omega);
  return assembleTerms(termsA_, omega);
}

SparseMat AffinePencil::assembleB(const Vec& omega) const {
  checkDomain(omega);
  return assembleTerms(termsB_, omega);
}

Mat AffinePencil::assembleADense(const Vec& omega) const { return Mat(assembleA(omega)); }
Mat AffinePencil::assembleBDense(const Vec& omega) const { return Mat(assembleB(omega)); }

std::pair<Mat, Mat> AffinePencil::assembleDerivative(const Vec& omega, int j) const {
  checkDomain(omega);
  if (j < 1 || j > d_) throw std::runtime_error("derivative index out of range");
  return {assembleTermsDense(termsA_, omega, 1, j, j),
          assembleTermsDense(termsB_, omega, 1, j, j)};
}

std::pair<Mat, Mat> AffinePencil::assembleSecondDerivative(const Vec& omega, int j, int k) const {
  checkDomain(omega);
  if (j < 1 || j > d_ || k < 1 || k > d_)
    throw std::runtime_error("derivative index out of range");
  return {assembleTermsDense(termsA_, omega, 2, j, k),
          assembleTermsDense(termsB_, omega, 2, j, k)};
}

std::vector<std::string> AffinePencil::validate() const {
  std::vector<std::string> warnings;
  for (const auto& t : termsA_)
    if (containsAbs(t.coeff))
      warnings.push_back("coefficient '" + t.coeffText + "' contains abs; not analytic");
  for (const auto& t : termsB_)
    if (containsAbs(t.coeff))
      warnings.push_back("coefficient '" + t.coeffText + "' contains abs; not analytic");

  // Probe B at the 2^d corners and the center.
  std::vector<Vec> probes;
  probes.push_back(domainCenter());
  for (int mask = 0; mask < (1 << d_); ++mask) {
    Vec p(d_);
    for (int i = 0; i < d_; ++i) p[i] = domain_[i][(mask >> i) & 1];
    probes.push_back(p);
  }
  for (const auto& p : probes) {
    Mat b = assembleBDense(p);
    Eigen::LLT<Mat> llt(b);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("B(omega) is not positive definite at a validation point");
    // Coefficient finiteness of A is exercised by assembly itself.
    (void)assembleADense(p);
  }
  return warnings;
}

AffinePencil loadPencil(const std::string& jsonPath, PencilOptions opts) {
  std::ifstream in(jsonPath);
  if (!in) throw std::runtime_error("cannot open pencil file '" + jsonPath + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("pencil file '" + jsonPath + "': " + e.what());
  }
  int d = j.at("d").get<int>();
  std::vector<std::array<double, 2>> domain;
  for (const auto& iv : j.at("domain")) domain.push_back({iv.at(0), iv.at(1)});
  fs::path base = fs::path(jsonPath).parent_path();
  auto loadTerms = [&](const char* key) {
    std::vector<PencilTerm> terms;
    for (const auto& t : j.at(key)) {
      PencilTerm term;
      term.coeffText = t.at("coeff").get<std::string>();
      term.coeff = parseExpr(term.coeffText, d);
      std::string mpath = t.at("matrix").get<std::string>();
      fs::path full = fs::path(mpath).is_absolute() ? fs::path(mpath) : base / mpath;
      term.mat = symmetrized(readMatrixMarketSparse(full.string()),
                             "matrix '" + mpath + "'");
      terms.push_back(std::move(term));
    }
    return terms;
  };
  return AffinePencil(d, std::move(domain), loadTerms("termsA"), loadTerms("termsB"), opts);
}

void savePencil(const AffinePencil& p, const std::string& jsonPath) {
  fs::path base = fs::path(jsonPath).parent_path();
  if (!base.empty()) fs::create_directories(base);
  std::string stem = fs::path(jsonPath).stem().string();
  nlohmann::json j;
  j["d"] = p.paramCount();
  for (const auto& iv : p.domain()) j["domain"].push_back({iv[0], iv[1]});
  auto dump = [&](const std::vector<PencilTerm>& terms, const char* key, const char* side) {
    j[key] = nlohmann::json::array();
    for (size_t i = 0; i < terms.size(); ++i) {
      std::string mname = stem + "_" + side + std::to_string(i) + ".mtx";
      writeMatrixMarketSymmetric((base / mname).string(), terms[i].mat);
      j[key].push_back({{"coeff", terms[i].coeffText.empty() ? terms[i].coeff->print()
                                                             : terms[i].coeffText},
                        {"matrix", mname}});
    }
  };
  dump(p.termsA(), "termsA", "A");
  dump(p.termsB(), "termsB", "B");
  std::ofstream out(jsonPath);
  if (!out) throw std::runtime_error("cannot write '" + jsonPath + "'");
  out << j.dump(2) << "\n";
}

}  // namespace eigsur
