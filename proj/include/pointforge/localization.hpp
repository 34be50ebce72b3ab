#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pointforge/triple.hpp"

namespace pointforge {

/// Coordinate statistics of the probability measure a state induces:
/// mean_phi_i = <v, phi_i v>, eta = sum_i (<v, phi_i^2 v> - <v, phi_i v>^2).
/// The barycenter projects mean_phi back to the model space (angle for the
/// circle, radial projection for the sphere, mean_phi itself otherwise) and
/// is flagged degenerate when |mean_phi| < 1e-8.
struct DispersionReport {
  double eta = 0.0;
  RVector mean_phi;
  RVector barycenter;
  bool degenerate = false;
};

DispersionReport dispersion(const TruncatedTriple& t, const VectorState& state);

/// Energy of a candidate state against already accepted ones:
///   e(v; V) = -1/eta(v) + g_e * sum_w 1/sum_i (<v,phi_i v> - w_i)^2,
/// where w ranges over the accepted states' mean_phi vectors. eta is clamped
/// below at eta_floor; a repulsion term with coinciding means is +infinity.
struct EnergyParams {
  double g_e = 0.1;
  double eta_floor = 1e-14;
  std::vector<RVector> existing;  // mean_phi of accepted states
};

double energy(const TruncatedTriple& t, const CVector& v, const EnergyParams& p);

/// Euclidean gradient of the energy at a unit vector (Wirtinger convention,
/// d/dv of <v,Av> is 2Av under the real inner product Re<.,.>).
CVector energy_gradient(const TruncatedTriple& t, const CVector& v, const EnergyParams& p);

/// Component tangent to the unit sphere at v.
CVector tangent_project(const CVector& v, const CVector& g);

struct MinimizeOptions {
  int max_iterations = 500;
  double grad_tol = 1e-8;
  int restarts = 3;
  int max_reseeds = 5;   // extra random starts when no restart converged
  int history = 8;       // L-BFGS memory
  std::uint64_t seed = 1;
};

struct MinimizeResult {
  VectorState state;
  double energy = 0.0;
  double grad_norm = 0.0;
  DispersionReport report;
  int iterations = 0;     // of the selected restart
  int restarts_used = 0;
  int reseeds_used = 0;
  bool converged = false;
};

/// Minimize the energy over unit states by projected L-BFGS with Armijo
/// backtracking, keeping the best converged restart (best energy overall if
/// none converged, flagged via `converged`).
MinimizeResult minimize_state(const TruncatedTriple& t, const EnergyParams& p,
                              const MinimizeOptions& opts);

/// Normalized heat-flow localization at a base point: eigenbasis coefficients
/// c_i = exp(-t lambda_i^2) conj(psi_i(x0)[component]) with diffusion time
/// t = 2 m log(cutoff) / cutoff^2. base_point is (theta) on the circle,
/// (theta, phi) on the sphere; `component` selects the spinor component
/// there. m defaults to the triple's spectral dimension hint.
VectorState heat_state(const TruncatedTriple& t, const RVector& base_point,
                       int component = 0, std::optional<int> m = std::nullopt);

/// Pointwise density |F(theta)|^2 of a circle state (eigenfunctions
/// e^{i n theta}/sqrt(2 pi)).
RVector density_circle(const TruncatedTriple& t, const VectorState& state,
                       const RVector& thetas);

/// Pointwise spinor density of a sphere state on a (theta, phi) grid.
RMatrix density_sphere(const TruncatedTriple& t, const VectorState& state,
                       const RVector& thetas, const RVector& phis);

}  // namespace pointforge
