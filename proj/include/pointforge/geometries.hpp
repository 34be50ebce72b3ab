#pragma once

#include <vector>

#include "pointforge/half_integer.hpp"
#include "pointforge/triple.hpp"

namespace pointforge {

/// Which Dirac eigenvalue shells a cutoff Lambda keeps on the sphere.
///   StrictAbs: shells with |lambda| = k <= floor(Lambda); dim H = 2K(K+1).
///   PaperS2:   additionally the first shell above the cutoff,
///              k <= floor(Lambda)+1, matching the published S2
///              reconstruction runs (dim H = 84 at Lambda = 5).
enum class CutoffConvention { StrictAbs, PaperS2 };

/// Truncated circle triple. Dirac eigenvalues -K..K with K = floor(cutoff),
/// algebra basis {identity, cos k theta, sin k theta : k <= 2K} (the 4K+1
/// operators with nonzero compression), phi = (cos theta, sin theta).
TruncatedTriple build_circle(double cutoff);

/// Truncated round-sphere triple. Dirac eigenvalues +-k with multiplicity 2k
/// per sign (shell j = k - 1/2); eigenbasis ordered by k ascending, then sign
/// +,-, then m ascending. Algebra basis: Hermitian compressions of the real
/// spherical harmonics with l <= 2*floor(cutoff); phi = (x, y, z).
/// max_algebra_l >= 0 lowers the harmonic degree of the generated algebra
/// basis (cheaper builds when only phi/phi_sq are needed); the default -1
/// keeps the full l <= 2*floor(cutoff) span.
TruncatedTriple build_sphere(double cutoff,
                             CutoffConvention convention = CutoffConvention::PaperS2,
                             int max_algebra_l = -1);

/// Spectral perturbation lambda -> lambda + coupling * sign(lambda) * cos(pi lambda)
/// of a sphere triple; algebra and coordinate operators are unchanged.
/// Rejects triples with a zero Dirac eigenvalue.
TruncatedTriple build_dc_perturbation(const TruncatedTriple& sphere, double coupling);

/// Eigenbasis labels of the canonical sphere layout, recovered from the
/// Hilbert space dimension alone (dim = 2K(K+1)).
struct SphereLabel {
  int k;           // shell, |eigenvalue| before perturbation
  int sign;        // +1 / -1 eigenvalue branch
  HalfInteger m;   // magnetic label, |m| <= j = k - 1/2
  HalfInteger j() const { return HalfInteger::from_twice(2 * k - 1); }
};
std::vector<SphereLabel> sphere_labels(Eigen::Index dim);

/// Circle eigenbasis labels n = -K..K (dim = 2K+1).
std::vector<int> circle_labels(Eigen::Index dim);

/// Spectral-dimension and volume estimates from eigenvalue counting.
/// N(lambda) counts Dirac eigenvalues with |mu| <= lambda; the dimension is
/// the least-squares slope of log N over log lambda across distinct positive
/// levels, and the volume inverts N(cutoff) = rank_s vol cutoff^d /
/// ((4 pi)^{d/2} Gamma(d/2+1)) at d = round(dimension). Eigenvalues above the
/// cutoff (kept by some shell conventions) do not enter the counts.
struct WeylEstimate {
  double dimension = 0.0;
  int rounded_dimension = 0;
  double volume = 0.0;
};
WeylEstimate weyl_estimate(const TruncatedTriple& t, int rank_s);

}  // namespace pointforge
