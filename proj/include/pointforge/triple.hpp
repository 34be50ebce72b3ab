#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pointforge/linalg.hpp"

namespace pointforge {

/// Unit vector in the truncated Hilbert space, i.e. a vector state.
class VectorState {
 public:
  explicit VectorState(CVector v);

  /// Rescale to unit norm; throws InputError on (near-)zero input.
  static VectorState normalized(CVector v);

  const CVector& vec() const { return v_; }
  Eigen::Index dim() const { return v_.size(); }

 private:
  CVector v_;
};

/// <v, A v> for a unit state; real because A is Hermitian.
double state_expectation(const VectorState& state, const HermitianMatrix& op);

/// Spectral cutoff of a commutative spectral triple: the Dirac operator is
/// kept as its eigenvalue list (the Hilbert space basis is the corresponding
/// eigenbasis), the algebra as compressions P a P of a spanning set of
/// multiplication operators, and the coordinate functions phi_i of the
/// ambient embedding together with the compressions of their squares.
/// phi_sq holds P(phi_i^2)P assembled from the exact expansion of phi_i^2,
/// not the square of the compression.
struct TruncatedTriple {
  std::string name;
  double cutoff = 0.0;
  RVector dirac_eigenvalues;
  std::vector<HermitianMatrix> algebra_basis;
  std::vector<HermitianMatrix> phi;
  std::vector<HermitianMatrix> phi_sq;
  int embedding_dim = 0;
  std::optional<int> spectral_dim_hint;

  Eigen::Index dim() const { return dirac_eigenvalues.size(); }

  /// Check dimensional consistency, eigenvalue bound |lambda| <= floor(cutoff)+2
  /// (slack for conventions keeping one shell above the cutoff and for small
  /// Dirac perturbations), and phi/phi_sq arity. Throws InputError.
  void validate() const;
};

enum class GeometryKind { Circle, Sphere, SphereDc, Unknown };

GeometryKind geometry_kind(const std::string& name);

/// Symmetric distance matrix with zero diagonal; each pair stored once.
class SymmetricDistances {
 public:
  SymmetricDistances() = default;
  explicit SymmetricDistances(int n) : n_(n), packed_(std::size_t(n) * (n - 1) / 2, 0.0) {}

  static SymmetricDistances from_packed(int n, std::vector<double> packed);

  int size() const { return n_; }
  double operator()(int i, int j) const {
    return i == j ? 0.0 : packed_[index(i, j)];
  }
  void set(int i, int j, double v);
  const std::vector<double>& packed() const { return packed_; }
  RMatrix full() const;

 private:
  std::size_t index(int i, int j) const;
  int n_ = 0;
  std::vector<double> packed_;
};

/// Output of a reconstruction run: localized states, their coordinate
/// expectations E[phi], dispersions, and pairwise truncated distances.
struct MetricGraph {
  std::string geometry;
  int embedding_dim = 0;
  std::vector<VectorState> states;
  std::vector<RVector> barycenter_coords;  // E[phi] per state
  RVector dispersions;
  std::vector<char> degenerate;  // barycenter projection undefined
  SymmetricDistances distances;

  int count() const { return static_cast<int>(states.size()); }
  void validate() const;
};

// --- serialization (JSON, format_version 1; doubles round-trip exactly) ---

void save_triple(const std::string& path, const TruncatedTriple& t);
TruncatedTriple load_triple(const std::string& path);

/// config_json: optional serialized configuration echoed into the file
/// ("{}" when empty).
void save_graph(const std::string& path, const MetricGraph& g,
                const std::string& config_json = "{}");
MetricGraph load_graph(const std::string& path);

/// CSV distance matrix: "# config ..." comment, header row of state indices,
/// then one row per state.
void write_distance_csv(const std::string& path, const SymmetricDistances& d,
                        const std::string& config_json = "{}");

/// Largest triangle-inequality violation max(0, d(i,k) - d(i,j) - d(j,k))
/// over all ordered triples, for metric-axiom checks.
double max_triangle_violation(const SymmetricDistances& d);

}  // namespace pointforge
