#include "pointforge/triple.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pointforge {

using nlohmann::json;

VectorState::VectorState(CVector v) : v_(std::move(v)) {
  if (v_.size() == 0) throw InputError("VectorState: empty vector");
  const double nrm = v_.norm();
  if (std::abs(nrm - 1.0) > 1e-10)
    throw InputError("VectorState: norm " + std::to_string(nrm) + " is not 1");
}

VectorState VectorState::normalized(CVector v) {
  const double nrm = v.norm();
  if (nrm < 1e-14) throw InputError("VectorState: cannot normalize a zero vector");
  return VectorState(CVector(v / nrm));
}

double state_expectation(const VectorState& state, const HermitianMatrix& op) {
  if (state.dim() != op.dim())
    throw InputError("state_expectation: state dim " + std::to_string(state.dim()) +
                     " vs operator dim " + std::to_string(op.dim()));
  return std::real(state.vec().dot(op.mat() * state.vec()));
}

void TruncatedTriple::validate() const {
  const Eigen::Index d = dim();
  if (d == 0) throw InputError("TruncatedTriple: empty Dirac spectrum");
  if (cutoff <= 0.0) throw InputError("TruncatedTriple: cutoff must be positive");
  const double bound = std::floor(cutoff) + 2.0;
  for (Eigen::Index i = 0; i < d; ++i)
    if (std::abs(dirac_eigenvalues[i]) > bound)
      throw InputError("TruncatedTriple: eigenvalue " + std::to_string(dirac_eigenvalues[i]) +
                       " exceeds cutoff bound " + std::to_string(bound));
  if (algebra_basis.empty()) throw InputError("TruncatedTriple: empty algebra basis");
  for (const auto& a : algebra_basis)
    if (a.dim() != d) throw InputError("TruncatedTriple: algebra element dimension mismatch");
  if (embedding_dim <= 0) throw InputError("TruncatedTriple: embedding_dim must be positive");
  if (static_cast<int>(phi.size()) != embedding_dim)
    throw InputError("TruncatedTriple: phi count " + std::to_string(phi.size()) +
                     " != embedding_dim " + std::to_string(embedding_dim));
  if (phi_sq.size() != phi.size())
    throw InputError("TruncatedTriple: phi_sq count != phi count");
  for (const auto& p : phi)
    if (p.dim() != d) throw InputError("TruncatedTriple: phi dimension mismatch");
  for (const auto& p : phi_sq)
    if (p.dim() != d) throw InputError("TruncatedTriple: phi_sq dimension mismatch");
}

GeometryKind geometry_kind(const std::string& name) {
  if (name == "circle") return GeometryKind::Circle;
  if (name == "sphere") return GeometryKind::Sphere;
  if (name.rfind("sphere-dc", 0) == 0) return GeometryKind::SphereDc;
  return GeometryKind::Unknown;
}

std::size_t SymmetricDistances::index(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n_ || i == j)
    throw InputError("SymmetricDistances: index (" + std::to_string(i) + "," +
                     std::to_string(j) + ") out of range for n = " + std::to_string(n_));
  // row-major upper triangle, diagonal excluded
  return std::size_t(i) * n_ - std::size_t(i) * (i + 1) / 2 + (j - i - 1);
}

void SymmetricDistances::set(int i, int j, double v) {
  if (i == j) {
    if (v != 0.0) throw InputError("SymmetricDistances: nonzero diagonal");
    return;
  }
  packed_[index(i, j)] = v;
}

SymmetricDistances SymmetricDistances::from_packed(int n, std::vector<double> packed) {
  if (packed.size() != std::size_t(n) * (n - 1) / 2)
    throw InputError("SymmetricDistances: packed size mismatch");
  SymmetricDistances d(n);
  d.packed_ = std::move(packed);
  return d;
}

RMatrix SymmetricDistances::full() const {
  RMatrix m = RMatrix::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) m(i, j) = m(j, i) = (*this)(i, j);
  return m;
}

void MetricGraph::validate() const {
  const int n = count();
  if (static_cast<int>(barycenter_coords.size()) != n ||
      dispersions.size() != n || static_cast<int>(degenerate.size()) != n ||
      distances.size() != n)
    throw InputError("MetricGraph: field lengths disagree");
  for (const auto& b : barycenter_coords)
    if (b.size() != embedding_dim)
      throw InputError("MetricGraph: barycenter coordinate length != embedding_dim");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!(distances(i, j) >= 0.0) || !std::isfinite(distances(i, j)))
        throw InputError("MetricGraph: invalid distance at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
}

double max_triangle_violation(const SymmetricDistances& d) {
  const int n = d.size();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        worst = std::max(worst, d(i, k) - d(i, j) - d(j, k));
      }
    }
  return worst;
}

// --- JSON helpers ---

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError(where + ": complex entry must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected non-empty matrix");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols)
      throw InputError(where + ": ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = complex_from_json(j[i][c], where);
  }
  return m;
}

json vector_to_json(const CVector& v) {
  json row = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(complex_to_json(v[i]));
  return row;
}

CVector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = complex_from_json(j[i], where);
  return v;
}

json rvector_to_json(const RVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

RVector rvector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected array");
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!j[i].is_number()) throw InputError(where + ": expected number");
    v[i] = j[i].get<double>();
  }
  return v;
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("JSON parse error in " + path + ": " + e.what());
  }
  return j;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << body;
  if (!out) throw IoError("write failed for " + path);
}

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

}  // namespace

void save_triple(const std::string& path, const TruncatedTriple& t) {
  t.validate();
  json j;
  j["format_version"] = 1;
  j["name"] = t.name;
  j["cutoff"] = t.cutoff;
  j["dirac_eigenvalues"] = rvector_to_json(t.dirac_eigenvalues);
  json basis = json::array();
  for (const auto& a : t.algebra_basis) basis.push_back(matrix_to_json(a.mat()));
  j["algebra_basis"] = std::move(basis);
  json phi = json::array(), phi_sq = json::array();
  for (const auto& p : t.phi) phi.push_back(matrix_to_json(p.mat()));
  for (const auto& p : t.phi_sq) phi_sq.push_back(matrix_to_json(p.mat()));
  j["phi"] = std::move(phi);
  j["phi_sq"] = std::move(phi_sq);
  j["embedding_dim"] = t.embedding_dim;
  if (t.spectral_dim_hint)
    j["spectral_dim_hint"] = *t.spectral_dim_hint;
  else
    j["spectral_dim_hint"] = nullptr;
  write_file(path, j.dump());
}

TruncatedTriple load_triple(const std::string& path) {
  const json j = parse_file(path);
  const std::string where = "load_triple(" + path + ")";
  if (require(j, "format_version", where).get<int>() != 1)
    throw InputError(where + ": unsupported format_version");
  TruncatedTriple t;
  t.name = require(j, "name", where).get<std::string>();
  t.cutoff = require(j, "cutoff", where).get<double>();
  t.dirac_eigenvalues = rvector_from_json(require(j, "dirac_eigenvalues", where), where);
  for (const auto& m : require(j, "algebra_basis", where))
    t.algebra_basis.emplace_back(matrix_from_json(m, where + ".algebra_basis"));
  for (const auto& m : require(j, "phi", where))
    t.phi.emplace_back(matrix_from_json(m, where + ".phi"));
  for (const auto& m : require(j, "phi_sq", where))
    t.phi_sq.emplace_back(matrix_from_json(m, where + ".phi_sq"));
  t.embedding_dim = require(j, "embedding_dim", where).get<int>();
  const auto& hint = require(j, "spectral_dim_hint", where);
  if (!hint.is_null()) t.spectral_dim_hint = hint.get<int>();
  t.validate();
  return t;
}

void save_graph(const std::string& path, const MetricGraph& g, const std::string& config_json) {
  g.validate();
  json j;
  j["format_version"] = 1;
  j["geometry"] = g.geometry;
  j["embedding_dim"] = g.embedding_dim;
  try {
    j["config"] = json::parse(config_json);
  } catch (const json::exception& e) {
    throw InputError("save_graph: config_json is not valid JSON: " + std::string(e.what()));
  }
  j["count"] = g.count();
  json states = json::array();
  for (const auto& s : g.states) states.push_back(vector_to_json(s.vec()));
  j["states"] = std::move(states);
  json bary = json::array();
  for (const auto& b : g.barycenter_coords) bary.push_back(rvector_to_json(b));
  j["barycenter_coords"] = std::move(bary);
  j["dispersions"] = rvector_to_json(g.dispersions);
  json degen = json::array();
  for (const char d : g.degenerate) degen.push_back(static_cast<bool>(d));
  j["degenerate"] = std::move(degen);
  j["distances_packed"] = g.distances.packed();
  write_file(path, j.dump());
}

MetricGraph load_graph(const std::string& path) {
  const json j = parse_file(path);
  const std::string where = "load_graph(" + path + ")";
  if (require(j, "format_version", where).get<int>() != 1)
    throw InputError(where + ": unsupported format_version");
  MetricGraph g;
  g.geometry = require(j, "geometry", where).get<std::string>();
  g.embedding_dim = require(j, "embedding_dim", where).get<int>();
  for (const auto& s : require(j, "states", where))
    g.states.emplace_back(vector_from_json(s, where + ".states"));
  for (const auto& b : require(j, "barycenter_coords", where))
    g.barycenter_coords.push_back(rvector_from_json(b, where + ".barycenter_coords"));
  g.dispersions = rvector_from_json(require(j, "dispersions", where), where);
  for (const auto& d : require(j, "degenerate", where))
    g.degenerate.push_back(d.get<bool>() ? 1 : 0);
  std::vector<double> packed =
      require(j, "distances_packed", where).get<std::vector<double>>();
  g.distances = SymmetricDistances::from_packed(g.count(), std::move(packed));
  g.validate();
  return g;
}

void write_distance_csv(const std::string& path, const SymmetricDistances& d,
                        const std::string& config_json) {
  std::ostringstream out;
  out << "# config " << config_json << "\n";
  const int n = d.size();
  for (int j = 0; j < n; ++j) out << (j ? "," : "") << j;
  out << "\n";
  out.precision(17);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? "," : "") << d(i, j);
    out << "\n";
  }
  write_file(path, out.str());
}

}  // namespace pointforge
