#include "pointforge/geometries.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pointforge/wigner.hpp"

namespace pointforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TruncatedTriple build_circle(double cutoff) {
  if (!(cutoff >= 1.0)) throw InputError("build_circle: cutoff must be >= 1");
  const int K = static_cast<int>(std::floor(cutoff));
  const Eigen::Index dim = 2 * K + 1;

  TruncatedTriple t;
  t.name = "circle";
  t.cutoff = cutoff;
  t.embedding_dim = 2;
  t.spectral_dim_hint = 1;
  t.dirac_eigenvalues.resize(dim);
  for (int n = -K; n <= K; ++n) t.dirac_eigenvalues[n + K] = n;

  // <e_n, cos(k theta) e_m> = (delta_{n,m+k} + delta_{n,m-k}) / 2
  // <e_n, sin(k theta) e_m> = (delta_{n,m+k} - delta_{n,m-k}) / (2i)
  auto cos_op = [&](int k) {
    CMatrix m = CMatrix::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r + k < dim) m(r, r + k) = 0.5;
      if (r - k >= 0) m(r, r - k) = 0.5;
    }
    return m;
  };
  auto sin_op = [&](int k) {
    CMatrix m = CMatrix::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r - k >= 0) m(r, r - k) = Complex(0.0, -0.5);
      if (r + k < dim) m(r, r + k) = Complex(0.0, 0.5);
    }
    return m;
  };

  t.algebra_basis.emplace_back(CMatrix(CMatrix::Identity(dim, dim)));
  for (int k = 1; k <= 2 * K; ++k) {
    t.algebra_basis.emplace_back(cos_op(k));
    t.algebra_basis.emplace_back(sin_op(k));
  }

  t.phi.emplace_back(cos_op(1));
  t.phi.emplace_back(sin_op(1));
  // cos^2 = (1 + cos 2theta)/2, sin^2 = (1 - cos 2theta)/2, compressed exactly
  const CMatrix c2 = cos_op(2);
  const CMatrix id = CMatrix::Identity(dim, dim);
  t.phi_sq.emplace_back(CMatrix(0.5 * id + 0.5 * c2));
  t.phi_sq.emplace_back(CMatrix(0.5 * id - 0.5 * c2));

  t.validate();
  return t;
}

std::vector<SphereLabel> sphere_labels(Eigen::Index dim) {
  // dim = 2K(K+1) for some K >= 1
  const int K = static_cast<int>(std::lround((-1.0 + std::sqrt(1.0 + 2.0 * dim)) / 2.0));
  if (K < 1 || Eigen::Index(2) * K * (K + 1) != dim)
    throw InputError("sphere_labels: dimension " + std::to_string(dim) +
                     " is not of the form 2K(K+1)");
  std::vector<SphereLabel> labels;
  labels.reserve(dim);
  for (int k = 1; k <= K; ++k)
    for (int sign : {+1, -1}) {
      const int tj = 2 * k - 1;
      for (int tm = -tj; tm <= tj; tm += 2)
        labels.push_back({k, sign, HalfInteger::from_twice(tm)});
    }
  return labels;
}

std::vector<int> circle_labels(Eigen::Index dim) {
  if (dim % 2 != 1 || dim < 3)
    throw InputError("circle_labels: dimension " + std::to_string(dim) +
                     " is not of the form 2K+1");
  const int K = static_cast<int>(dim / 2);
  std::vector<int> labels(dim);
  for (int n = -K; n <= K; ++n) labels[n + K] = n;
  return labels;
}

namespace {

// Compression of the multiplication operator Y_{lm} to the kept spinor
// shells. With eigenspinors psi^a_{jm} = (Y^{+1/2}_{jm}, a Y^{-1/2}_{jm})/sqrt2,
//   <psi^a_{j1 m1}, Y_{lm} psi^b_{j2 m2}> = (T(+1/2) + a b T(-1/2)) / 2,
// T(s) the triple integral with matching outer spin weights.
CMatrix sphere_harmonic_op(const std::vector<SphereLabel>& labels, int l, int m) {
  const Eigen::Index dim = static_cast<Eigen::Index>(labels.size());
  CMatrix op = CMatrix::Zero(dim, dim);
  const HalfInteger hl = HalfInteger::whole(l), hm = HalfInteger::whole(m);
  const HalfInteger sp = HalfInteger::from_twice(1), sm = HalfInteger::from_twice(-1);

  // group indices by (k, m) so each T pair is computed once
  for (Eigen::Index row = 0; row < dim; ++row) {
    const SphereLabel& a = labels[row];
    if (a.sign != +1) continue;  // locate each (k1,m1) block via its + member
    for (Eigen::Index col = 0; col < dim; ++col) {
      const SphereLabel& b = labels[col];
      if (b.sign != +1) continue;
      if (a.m.twice() != 2 * m + b.m.twice()) continue;  // m1 = m + m2
      const double tp = triple_integral(sp, a.j(), a.m, hl, hm, sp, b.j(), b.m);
      const double tm_ = triple_integral(sm, a.j(), a.m, hl, hm, sm, b.j(), b.m);
      if (tp == 0.0 && tm_ == 0.0) continue;
      const Eigen::Index block_a = 2 * a.k;  // offset from + block to - block
      const Eigen::Index block_b = 2 * b.k;
      op(row, col) = 0.5 * (tp + tm_);
      op(row, col + block_b) = 0.5 * (tp - tm_);
      op(row + block_a, col) = 0.5 * (tp - tm_);
      op(row + block_a, col + block_b) = 0.5 * (tp + tm_);
    }
  }
  return op;
}

}  // namespace

TruncatedTriple build_sphere(double cutoff, CutoffConvention convention, int max_algebra_l) {
  if (!(cutoff >= 1.0)) throw InputError("build_sphere: cutoff must be >= 1");
  const int K0 = static_cast<int>(std::floor(cutoff));
  const int K = K0 + (convention == CutoffConvention::PaperS2 ? 1 : 0);
  const Eigen::Index dim = Eigen::Index(2) * K * (K + 1);
  const auto labels = sphere_labels(dim);

  TruncatedTriple t;
  t.name = "sphere";
  t.cutoff = cutoff;
  t.embedding_dim = 3;
  t.spectral_dim_hint = 2;
  t.dirac_eigenvalues.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    t.dirac_eigenvalues[i] = labels[i].sign * labels[i].k;

  const int l_max = max_algebra_l >= 0 ? max_algebra_l : 2 * K0;

  // cache complex harmonic compressions as needed for phi/phi_sq below
  auto Y = [&](int l, int m) { return sphere_harmonic_op(labels, l, m); };

  // real-harmonic Hermitian basis: Y_l0, then cosine/sine combinations
  for (int l = 0; l <= l_max; ++l) {
    t.algebra_basis.emplace_back(Y(l, 0));
    for (int m = 1; m <= l; ++m) {
      const CMatrix yp = Y(l, m), ym = Y(l, -m);
      const double cs = (m % 2 == 0) ? 1.0 : -1.0;  // Condon-Shortley (-1)^m
      t.algebra_basis.emplace_back(CMatrix((ym + cs * yp) / std::sqrt(2.0)));
      t.algebra_basis.emplace_back(CMatrix(Complex(0.0, 1.0) * (ym - cs * yp) / std::sqrt(2.0)));
    }
  }

  // coordinate functions of the unit embedding:
  //   x = sqrt(2pi/3)(Y_{1,-1} - Y_{1,1}), y = i sqrt(2pi/3)(Y_{1,-1} + Y_{1,1}),
  //   z = sqrt(4pi/3) Y_{1,0}
  const CMatrix y1m = Y(1, -1), y1p = Y(1, 1), y10 = Y(1, 0);
  const double cxy = std::sqrt(2.0 * kPi / 3.0);
  t.phi.emplace_back(CMatrix(cxy * (y1m - y1p)));
  t.phi.emplace_back(CMatrix(Complex(0.0, 1.0) * cxy * (y1m + y1p)));
  t.phi.emplace_back(CMatrix(std::sqrt(4.0 * kPi / 3.0) * y10));

  // squares from the exact harmonic expansions (not squares of compressions):
  //   x^2 = 1/3 - (2/3) sqrt(pi/5) Y_20 + sqrt(2pi/15) (Y_22 + Y_2-2)
  //   y^2 = 1/3 - (2/3) sqrt(pi/5) Y_20 - sqrt(2pi/15) (Y_22 + Y_2-2)
  //   z^2 = 1/3 + (4/3) sqrt(pi/5) Y_20
  const CMatrix id = CMatrix::Identity(dim, dim);
  const CMatrix y20 = Y(2, 0);
  const CMatrix y2pm = Y(2, 2) + Y(2, -2);
  const double c20 = std::sqrt(kPi / 5.0);
  const double c22 = std::sqrt(2.0 * kPi / 15.0);
  t.phi_sq.emplace_back(CMatrix(id / 3.0 - (2.0 / 3.0) * c20 * y20 + c22 * y2pm));
  t.phi_sq.emplace_back(CMatrix(id / 3.0 - (2.0 / 3.0) * c20 * y20 - c22 * y2pm));
  t.phi_sq.emplace_back(CMatrix(id / 3.0 + (4.0 / 3.0) * c20 * y20));

  t.validate();
  return t;
}

TruncatedTriple build_dc_perturbation(const TruncatedTriple& sphere, double coupling) {
  if (geometry_kind(sphere.name) != GeometryKind::Sphere)
    throw InputError("build_dc_perturbation: expected an unperturbed sphere triple, got '" +
                     sphere.name + "'");
  TruncatedTriple t = sphere;
  std::ostringstream name;
  name << "sphere-dc:" << coupling;
  t.name = name.str();
  for (Eigen::Index i = 0; i < t.dirac_eigenvalues.size(); ++i) {
    const double lambda = t.dirac_eigenvalues[i];
    if (lambda == 0.0)
      throw InputError("build_dc_perturbation: zero Dirac eigenvalue has no sign");
    const double sgn = lambda > 0.0 ? 1.0 : -1.0;
    t.dirac_eigenvalues[i] = lambda + coupling * sgn * std::cos(kPi * lambda);
  }
  t.validate();
  return t;
}

WeylEstimate weyl_estimate(const TruncatedTriple& t, int rank_s) {
  if (rank_s < 1) throw InputError("weyl_estimate: rank_s must be >= 1");
  std::vector<double> levels;
  std::size_t zero_modes = 0;
  for (Eigen::Index i = 0; i < t.dirac_eigenvalues.size(); ++i) {
    const double a = std::abs(t.dirac_eigenvalues[i]);
    if (a == 0.0) ++zero_modes;
    if (a > 0.0 && a <= t.cutoff) levels.push_back(a);
  }
  std::sort(levels.begin(), levels.end());
  if (levels.empty()) throw InputError("weyl_estimate: no positive eigenvalues below cutoff");

  // cumulative count N(lambda) at each distinct level
  std::vector<double> xs, ys;
  std::size_t i = 0;
  std::size_t below_or_at = 0;
  while (i < levels.size()) {
    const double level = levels[i];
    while (i < levels.size() && levels[i] == level) {
      ++below_or_at;
      ++i;
    }
    xs.push_back(std::log(level));
    ys.push_back(std::log(static_cast<double>(below_or_at + zero_modes)));
  }
  if (xs.size() < 2) throw InputError("weyl_estimate: need at least two distinct levels");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  WeylEstimate est;
  est.dimension = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  est.rounded_dimension = std::max(1, static_cast<int>(std::lround(est.dimension)));
  const double d = est.rounded_dimension;
  const double count_at_cutoff = static_cast<double>(below_or_at + zero_modes);
  est.volume = count_at_cutoff * std::pow(4.0 * kPi, d / 2.0) * std::tgamma(d / 2.0 + 1.0) /
               (rank_s * std::pow(t.cutoff, d));
  return est;
}

}  // namespace pointforge
