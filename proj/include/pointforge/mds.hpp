#pragma once

#include <cstdint>

#include "pointforge/linalg.hpp"

namespace pointforge {

/// Weighted raw-stress instance: minimize
///   sigma(X) = sum_{p<q} w_pq (|x_p - x_q| - d_pq)^2 / sum_{p<q} w_pq
/// over point configurations X in R^dim.
struct StressProblem {
  RMatrix distances;  // symmetric, non-negative, zero diagonal
  RMatrix weights;    // symmetric, non-negative, zero diagonal
  int dim = 3;
};

/// Locality weights w_pq = exp(-sqrt(k) d_pq) with k the point count:
/// long distances, which the truncation distorts most, are down-weighted.
RMatrix locality_weights(const RMatrix& distances);

struct EmbedOptions {
  double tol = 1e-9;      // relative stress decrease
  int max_iter = 10000;
  std::uint64_t seed = 1;
  bool classical_init = true;  // spectral initialization, random fallback
};

struct EmbeddingResult {
  RMatrix coords;  // rows are points, centered at the origin
  double stress = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// SMACOF majorization: iterate the Guttman transform X <- V^+ B(X) X with
/// the weighted-Laplacian pseudo-inverse V^+ (eigenvalue threshold 1e-10).
/// Stress never increases between iterations. Throws InputError when the
/// positive-weight graph is disconnected (lists the components), since the
/// relative placement of disconnected blocks is then arbitrary.
EmbeddingResult smacof(const StressProblem& p, const EmbedOptions& opts = {},
                       const RMatrix* init = nullptr);

/// Relative gap between arc length l and chord 2 sin(l/2) on the unit
/// sphere: (l - 2 sin(l/2)) / l, the O(l^3)/l distortion an exact embedding
/// of geodesic distances must absorb. Domain [0, pi]; 0 at l = 0.
double sphere_chord_defect(double l);

/// Distances of each row from the centroid.
RVector centroid_radii(const RMatrix& coords);

}  // namespace pointforge
