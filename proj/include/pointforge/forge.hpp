#pragma once

#include <optional>

#include "pointforge/connes.hpp"
#include "pointforge/localization.hpp"

namespace pointforge {

/// Number of localized states needed to cover a manifold of spectral
/// dimension m and volume vol at the given cutoff: each state occupies a ball
/// whose squared radius is the expected dispersion
///   eta0 = m * 2 log(cutoff) / cutoff^2
/// (trace of the limiting coordinate covariance), so
///   N = ceil(vol / (vol(B_m) * eta0^{m/2})),  vol(B_m) = pi^{m/2}/Gamma(m/2+1).
int estimate_state_count(int m, double volume, double cutoff);

struct ForgeConfig {
  std::optional<int> state_count;   // override the estimate
  double g_e = 0.1;                 // repulsion weight
  std::uint64_t seed = 1;
  int spectral_dim = 0;             // 0: triple hint, else Weyl estimate
  double volume = 0.0;              // 0: Weyl estimate
  int threads = 0;                  // 0: POINTFORGE_THREADS or hardware
  MinimizeOptions minimize;
  SdpOptions sdp;
};

struct StateLog {
  int index = 0;
  double energy = 0.0;
  double eta = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int reseeds = 0;
  bool converged = false;
};

struct ForgeReport {
  int state_count = 0;
  int spectral_dim = 0;
  double volume = 0.0;
  std::vector<StateLog> states;
  DistanceRunStats distances;
  double max_triangle_violation = 0.0;
  double wall_seconds = 0.0;
  bool all_states_converged = true;
  bool all_pairs_converged = true;
};

/// Sequential localized-state generation followed by the pairwise distance
/// solve. States are minimized one at a time with the accepted states'
/// coordinate means entering the repulsion term; non-convergence is flagged
/// in the report but still yields a state.
MetricGraph forge(const TruncatedTriple& t, const ForgeConfig& cfg,
                  ForgeReport* report = nullptr);

}  // namespace pointforge
