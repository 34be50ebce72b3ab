#include "pointforge/mds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <vector>

#include "pointforge/rng.hpp"

namespace pointforge {

namespace {

void check_symmetric_nonneg(const RMatrix& m, const char* what) {
  if (m.rows() != m.cols()) throw InputError(std::string(what) + ": not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0) throw InputError(std::string(what) + ": nonzero diagonal");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j)) || m(i, j) < 0.0)
        throw InputError(std::string(what) + ": negative or non-finite entry");
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw InputError(std::string(what) + ": not symmetric");
    }
  }
}

// union-find over positive-weight edges
std::vector<int> components(const RMatrix& w) {
  const int k = static_cast<int>(w.rows());
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (w(i, j) > 0.0) parent[find(i)] = find(j);
  std::vector<int> root(k);
  for (int i = 0; i < k; ++i) root[i] = find(i);
  return root;
}

RMatrix center_rows(RMatrix x) {
  const RVector mean = x.colwise().mean();
  x.rowwise() -= mean.transpose();
  return x;
}

double stress_of(const RMatrix& x, const RMatrix& d, const RMatrix& w, double wsum) {
  const int k = static_cast<int>(d.rows());
  double s = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      if (w(i, j) == 0.0) continue;
      const double delta = (x.row(i) - x.row(j)).norm();
      const double r = delta - d(i, j);
      s += w(i, j) * r * r;
    }
  return s / wsum;
}

RMatrix classical_scaling_init(const RMatrix& d, int dim, Rng& rng) {
  const int k = static_cast<int>(d.rows());
  const RMatrix d2 = d.cwiseProduct(d);
  RMatrix j = RMatrix::Identity(k, k) - RMatrix::Constant(k, k, 1.0 / k);
  RMatrix b = -0.5 * j * d2 * j;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (b + b.transpose()));
  RMatrix x(k, dim);
  const double scale = std::max(1e-8, d.mean());
  int spectral = 0;
  for (int c = 0; c < dim; ++c) {
    const Eigen::Index idx = k - 1 - c;  // eigenvalues ascending
    if (idx >= 0 && es.eigenvalues()[idx] > 0.0) {
      x.col(c) = es.eigenvectors().col(idx) * std::sqrt(es.eigenvalues()[idx]);
      ++spectral;
    } else {
      for (int r = 0; r < k; ++r) x(r, c) = 0.01 * scale * rng.normal();
    }
  }
  if (spectral == 0)
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < dim; ++c) x(r, c) = scale * rng.normal();
  return x;
}

}  // namespace

RMatrix locality_weights(const RMatrix& distances) {
  check_symmetric_nonneg(distances, "locality_weights");
  const int k = static_cast<int>(distances.rows());
  const double rate = std::sqrt(static_cast<double>(k));
  RMatrix w(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) w(i, j) = i == j ? 0.0 : std::exp(-rate * distances(i, j));
  return w;
}

EmbeddingResult smacof(const StressProblem& p, const EmbedOptions& opts, const RMatrix* init) {
  check_symmetric_nonneg(p.distances, "smacof distances");
  check_symmetric_nonneg(p.weights, "smacof weights");
  const int k = static_cast<int>(p.distances.rows());
  if (p.weights.rows() != k) throw InputError("smacof: weight/distance size mismatch");
  if (k < 2) throw InputError("smacof: need at least two points");
  if (p.dim < 1) throw InputError("smacof: dim must be >= 1");

  const std::vector<int> comp = components(p.weights);
  if (!std::all_of(comp.begin(), comp.end(), [&](int c) { return c == comp[0]; })) {
    std::ostringstream msg;
    msg << "smacof: positive-weight graph is disconnected; components:";
    std::vector<int> seen;
    for (int c : comp)
      if (std::find(seen.begin(), seen.end(), c) == seen.end()) {
        seen.push_back(c);
        msg << " {";
        bool first = true;
        for (int i = 0; i < k; ++i)
          if (comp[i] == c) {
            msg << (first ? "" : ",") << i;
            first = false;
          }
        msg << "}";
      }
    throw InputError(msg.str());
  }

  const double wsum = p.weights.sum() / 2.0;
  if (!(wsum > 0.0)) throw InputError("smacof: all weights vanish");

  // weighted Laplacian and its pseudo-inverse (Guttman transform kernel)
  RMatrix v = -p.weights;
  for (int i = 0; i < k; ++i) v(i, i) = p.weights.row(i).sum();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(v);
  if (es.info() != Eigen::Success) throw ConvergenceError("smacof: Laplacian eigensolve failed");
  RMatrix vinv = RMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i)
    if (es.eigenvalues()[i] > 1e-10)
      vinv += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() /
              es.eigenvalues()[i];

  Rng rng(opts.seed);
  RMatrix x;
  if (init) {
    if (init->rows() != k || init->cols() != p.dim)
      throw InputError("smacof: init shape mismatch");
    x = center_rows(*init);
  } else if (opts.classical_init) {
    x = center_rows(classical_scaling_init(p.distances, p.dim, rng));
  } else {
    x.resize(k, p.dim);
    const double scale = std::max(1e-8, p.distances.mean());
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < p.dim; ++c) x(r, c) = scale * rng.normal();
    x = center_rows(x);
  }

  EmbeddingResult res;
  double stress = stress_of(x, p.distances, p.weights, wsum);
  RMatrix b(k, k);
  for (int it = 1; it <= opts.max_iter; ++it) {
    res.iterations = it;
    b.setZero();
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        if (p.weights(i, j) == 0.0) continue;
        const double delta = (x.row(i) - x.row(j)).norm();
        if (delta < 1e-12) continue;
        const double val = -p.weights(i, j) * p.distances(i, j) / delta;
        b(i, j) = val;
        b(j, i) = val;
        b(i, i) -= val;
        b(j, j) -= val;
      }
    const RMatrix x_new = center_rows(vinv * (b * x));
    const double stress_new = stress_of(x_new, p.distances, p.weights, wsum);
    if (stress_new > stress + 1e-12 * std::max(1.0, stress))
      throw ConvergenceError("smacof: stress increased, majorization broken");
    x = x_new;
    const double drop = stress - stress_new;
    stress = stress_new;
    if (drop <= opts.tol * std::max(stress, 1e-300)) {
      res.converged = true;
      break;
    }
  }
  res.coords = x;
  res.stress = stress;
  return res;
}

double sphere_chord_defect(double l) {
  if (l < 0.0 || l > 3.14159265358979323846 + 1e-12)
    throw InputError("sphere_chord_defect: arc length outside [0, pi]");
  if (l == 0.0) return 0.0;
  return (l - 2.0 * std::sin(0.5 * l)) / l;
}

RVector centroid_radii(const RMatrix& coords) {
  const RMatrix centered = center_rows(coords);
  return centered.rowwise().norm();
}

}  // namespace pointforge
