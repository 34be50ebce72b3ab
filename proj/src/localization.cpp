#include "pointforge/localization.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "pointforge/geometries.hpp"
#include "pointforge/rng.hpp"
#include "pointforge/wigner.hpp"

namespace pointforge {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Moments {
  RVector mean;      // <phi_i>
  RVector mean_sq;   // <phi_i^2>
  double eta = 0.0;  // clamped at 0
};

Moments moments(const TruncatedTriple& t, const CVector& v) {
  const int n = t.embedding_dim;
  Moments mo;
  mo.mean.resize(n);
  mo.mean_sq.resize(n);
  double eta = 0.0;
  for (int i = 0; i < n; ++i) {
    mo.mean[i] = std::real(v.dot(t.phi[i].mat() * v));
    mo.mean_sq[i] = std::real(v.dot(t.phi_sq[i].mat() * v));
    eta += mo.mean_sq[i] - mo.mean[i] * mo.mean[i];
  }
  if (eta < -1e-12)
    throw InputError("dispersion: eta = " + std::to_string(eta) +
                     " < -1e-12; phi_sq inconsistent with phi");
  mo.eta = std::max(eta, 0.0);
  return mo;
}

}  // namespace

DispersionReport dispersion(const TruncatedTriple& t, const VectorState& state) {
  if (state.dim() != t.dim()) throw InputError("dispersion: state dimension mismatch");
  const Moments mo = moments(t, state.vec());
  DispersionReport rep;
  rep.eta = mo.eta;
  rep.mean_phi = mo.mean;
  const double nrm = mo.mean.norm();
  rep.degenerate = nrm < 1e-8;
  switch (geometry_kind(t.name)) {
    case GeometryKind::Circle: {
      rep.barycenter.resize(1);
      rep.barycenter[0] = rep.degenerate ? 0.0 : std::atan2(mo.mean[1], mo.mean[0]);
      break;
    }
    case GeometryKind::Sphere:
    case GeometryKind::SphereDc: {
      rep.barycenter = rep.degenerate ? RVector(RVector::Zero(mo.mean.size()))
                                      : RVector(mo.mean / nrm);
      break;
    }
    case GeometryKind::Unknown:
      rep.barycenter = mo.mean;
      break;
  }
  return rep;
}

double energy(const TruncatedTriple& t, const CVector& v, const EnergyParams& p) {
  const Moments mo = moments(t, v);
  double e = -1.0 / std::max(mo.eta, p.eta_floor);
  for (const RVector& w : p.existing) {
    const double r = (mo.mean - w).squaredNorm();
    if (r < 1e-300) return kInf;
    e += p.g_e / r;
  }
  return e;
}

CVector energy_gradient(const TruncatedTriple& t, const CVector& v, const EnergyParams& p) {
  const int n = t.embedding_dim;
  const Moments mo = moments(t, v);

  std::vector<CVector> phi_v(n);
  for (int i = 0; i < n; ++i) phi_v[i] = t.phi[i].mat() * v;

  // grad eta = 2 sum_i (phi_sq_i v - 2 <phi_i> phi_i v)
  CVector grad_eta = CVector::Zero(v.size());
  for (int i = 0; i < n; ++i)
    grad_eta += 2.0 * (t.phi_sq[i].mat() * v) - 4.0 * mo.mean[i] * phi_v[i];

  const double eta_eff = std::max(mo.eta, p.eta_floor);
  CVector g = grad_eta / (eta_eff * eta_eff);

  for (const RVector& w : p.existing) {
    const double r = (mo.mean - w).squaredNorm();
    if (r < 1e-300)
      throw InputError("energy_gradient: repulsion singularity (coinciding means)");
    CVector grad_r = CVector::Zero(v.size());
    for (int i = 0; i < n; ++i) grad_r += 4.0 * (mo.mean[i] - w[i]) * phi_v[i];
    g -= (p.g_e / (r * r)) * grad_r;
  }
  return g;
}

CVector tangent_project(const CVector& v, const CVector& g) {
  return g - std::real(v.dot(g)) * v;
}

namespace {

struct LbfgsRun {
  CVector v;
  double energy = kInf;
  double grad_norm = kInf;
  int iterations = 0;
  bool converged = false;
};

// Spectral (Barzilai-Borwein) gradient steps on the unit sphere. Line-search
// methods stall once the attainable energy decrease drops below the
// floating-point resolution of the energy itself, which happens at
// |g| ~ sqrt(eps * curvature * |e|), far above grad_tol at these energy
// scales; BB steps compare no energies and drive the first-order residual
// toward machine level. Returns the best-gradient iterate visited.
void bb_polish(const TruncatedTriple& t, const EnergyParams& p, const MinimizeOptions& opts,
               int budget, LbfgsRun& run, CVector v, CVector g, double step0) {
  auto real_dot = [](const CVector& a, const CVector& b) { return std::real(a.dot(b)); };
  CVector best_v = v, best_g = g;
  double best_gn = g.norm();
  const double entry_gn = best_gn;
  double step = step0;
  for (int k = 0; k < budget; ++k) {
    ++run.iterations;
    CVector v_new = v - step * g;
    const double nrm = v_new.norm();
    if (nrm < 1e-14) break;
    v_new /= nrm;
    const CVector g_new = tangent_project(v_new, energy_gradient(t, v_new, p));
    const CVector s = tangent_project(v_new, CVector(v_new - v));
    const CVector y = g_new - tangent_project(v_new, g);
    const double sy = real_dot(s, y);
    if (sy > 1e-300) step = real_dot(s, s) / sy;
    v = v_new;
    g = g_new;
    const double gn = g.norm();
    if (gn < best_gn) {
      best_gn = gn;
      best_v = v;
      best_g = g;
    }
    if (gn < opts.grad_tol || gn > 1e2 * entry_gn) break;
  }
  run.v = best_v;
  run.grad_norm = best_gn;
  run.energy = energy(t, run.v, p);
  run.converged = best_gn < opts.grad_tol;
}

// Projected L-BFGS on the unit sphere: tangent gradients, two-loop direction,
// normalization retraction, Armijo backtracking, transported curvature pairs.
LbfgsRun lbfgs_minimize(const TruncatedTriple& t, const EnergyParams& p,
                        const MinimizeOptions& opts, const CVector& v0) {
  LbfgsRun run;
  CVector v = v0;
  double f = energy(t, v, p);
  if (std::isinf(f)) {
    run.v = v;
    run.energy = f;
    return run;
  }
  CVector g = tangent_project(v, energy_gradient(t, v, p));

  std::deque<CVector> s_hist, y_hist;
  std::deque<double> rho_hist;
  auto real_dot = [](const CVector& a, const CVector& b) { return std::real(a.dot(b)); };

  int it = 0;
  int no_progress = 0;
  bool stalled = false;
  for (; it < opts.max_iterations; ++it) {
    run.grad_norm = g.norm();
    if (run.grad_norm < opts.grad_tol) {
      run.converged = true;
      break;
    }

    // two-loop recursion
    CVector d = -g;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * real_dot(s_hist[i], d);
      d -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const double gamma =
          real_dot(s_hist.back(), y_hist.back()) / real_dot(y_hist.back(), y_hist.back());
      d *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * real_dot(y_hist[i], d);
      d += (alpha[i] - beta) * s_hist[i];
    }
    d = tangent_project(v, d);
    double slope = real_dot(g, d);
    if (!(slope < -1e-14 * d.norm() * run.grad_norm)) {  // not a descent direction
      d = -g;
      slope = -run.grad_norm * run.grad_norm;
    }

    // Armijo backtracking with normalization retraction
    double step = 1.0;
    const double f0 = f;
    CVector v_new;
    double f_new = kInf;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      v_new = v + step * d;
      const double nrm = v_new.norm();
      if (nrm > 1e-14) {
        v_new /= nrm;
        f_new = energy(t, v_new, p);
        if (f_new <= f0 + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {  // energy differences below measurement resolution
      stalled = true;
      break;
    }
    if (f0 - f_new <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(f0)) {
      if (++no_progress >= 3) {
        stalled = true;
        ++it;
        break;
      }
    } else {
      no_progress = 0;
    }

    const CVector g_new = tangent_project(v_new, energy_gradient(t, v_new, p));
    // transport previous-point quantities to the new tangent space
    const CVector s = tangent_project(v_new, CVector(v_new - v));
    const CVector y = g_new - tangent_project(v_new, g);
    const double sy = real_dot(s, y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    v = v_new;
    f = f_new;
    g = g_new;
  }

  run.v = v;
  run.energy = f;
  run.grad_norm = g.norm();
  run.iterations = it;

  const int budget = std::min(200, opts.max_iterations - it);
  if (stalled && !run.converged && budget > 0) {
    double step0;
    if (!s_hist.empty()) {
      step0 = real_dot(s_hist.back(), y_hist.back()) / real_dot(y_hist.back(), y_hist.back());
    } else {
      // one-sided curvature probe along the gradient
      const double tau = 1e-4 / std::max(1.0, run.grad_norm);
      CVector v_probe = v - tau * g;
      v_probe /= v_probe.norm();
      const CVector g_probe = tangent_project(v_probe, energy_gradient(t, v_probe, p));
      const double curv = (g_probe - g).norm() / (tau * std::max(run.grad_norm, 1e-300));
      step0 = 1.0 / std::max(curv, 1e-6);
    }
    bb_polish(t, p, opts, budget, run, v, g, step0);
  }
  return run;
}

}  // namespace

MinimizeResult minimize_state(const TruncatedTriple& t, const EnergyParams& p,
                              const MinimizeOptions& opts) {
  t.validate();
  const Eigen::Index dim = t.dim();

  LbfgsRun best;
  bool have_best = false;
  int restarts_used = 0, reseeds_used = 0;

  auto consider = [&](const LbfgsRun& run) {
    if (!have_best) {
      best = run;
      have_best = true;
      return;
    }
    // converged runs dominate; among equals take the lower energy
    if (run.converged != best.converged) {
      if (run.converged) best = run;
      return;
    }
    if (run.energy < best.energy) best = run;
  };

  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(sub_seed(opts.seed, static_cast<std::uint64_t>(r)));
    consider(lbfgs_minimize(t, p, opts, rng.unit_vector(dim)));
    ++restarts_used;
  }
  while (!best.converged && reseeds_used < opts.max_reseeds) {
    Rng rng(sub_seed(opts.seed, 0x5eedULL, static_cast<std::uint64_t>(reseeds_used)));
    consider(lbfgs_minimize(t, p, opts, rng.unit_vector(dim)));
    ++reseeds_used;
  }

  MinimizeResult res{VectorState::normalized(best.v),
                     best.energy,
                     best.grad_norm,
                     dispersion(t, VectorState::normalized(best.v)),
                     best.iterations,
                     restarts_used,
                     reseeds_used,
                     best.converged};
  return res;
}

VectorState heat_state(const TruncatedTriple& t, const RVector& base_point, int component,
                       std::optional<int> m) {
  if (!(t.cutoff > 1.0))
    throw InputError("heat_state: cutoff must exceed 1 for a positive diffusion time");
  const GeometryKind kind = geometry_kind(t.name);
  const int sdim = m ? *m : t.spectral_dim_hint.value_or(kind == GeometryKind::Circle ? 1 : 2);
  if (sdim < 1) throw InputError("heat_state: spectral dimension must be >= 1");
  const double time = 2.0 * sdim * std::log(t.cutoff) / (t.cutoff * t.cutoff);

  CVector c(t.dim());
  if (kind == GeometryKind::Circle) {
    if (base_point.size() != 1) throw InputError("heat_state: circle base point is (theta)");
    if (component != 0) throw InputError("heat_state: circle states have one component");
    const double theta = base_point[0];
    const auto labels = circle_labels(t.dim());
    for (Eigen::Index i = 0; i < t.dim(); ++i) {
      const double lam = t.dirac_eigenvalues[i];
      const double w = std::exp(-time * lam * lam);
      const double a = -labels[i] * theta;  // conj(e^{i n theta})
      c[i] = w * Complex(std::cos(a), std::sin(a));
    }
  } else if (kind == GeometryKind::Sphere || kind == GeometryKind::SphereDc) {
    if (base_point.size() != 2) throw InputError("heat_state: sphere base point is (theta, phi)");
    if (component != 0 && component != 1)
      throw InputError("heat_state: sphere spinor component must be 0 or 1");
    const double theta = base_point[0], phi = base_point[1];
    if (theta < 0.0 || theta > kPi) throw InputError("heat_state: theta outside [0, pi]");
    const auto labels = sphere_labels(t.dim());
    const HalfInteger s = HalfInteger::from_twice(component == 0 ? 1 : -1);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < t.dim(); ++i) {
      const double lam = t.dirac_eigenvalues[i];
      const double w = std::exp(-time * lam * lam);
      Complex comp = inv_sqrt2 * spin_weighted_Y(s, labels[i].j(), labels[i].m, theta, phi);
      if (component == 1 && labels[i].sign < 0) comp = -comp;
      c[i] = w * std::conj(comp);
    }
  } else {
    throw InputError("heat_state: unsupported geometry '" + t.name + "'");
  }

  if (c.norm() < 1e-150)
    throw InputError("heat_state: all eigenmode amplitudes vanish at this base point");
  return VectorState::normalized(c);
}

RVector density_circle(const TruncatedTriple& t, const VectorState& state,
                       const RVector& thetas) {
  if (geometry_kind(t.name) != GeometryKind::Circle)
    throw InputError("density_circle: not a circle triple");
  const auto labels = circle_labels(t.dim());
  RVector out(thetas.size());
  for (Eigen::Index k = 0; k < thetas.size(); ++k) {
    Complex f = 0.0;
    for (Eigen::Index i = 0; i < t.dim(); ++i) {
      const double a = labels[i] * thetas[k];
      f += state.vec()[i] * Complex(std::cos(a), std::sin(a));
    }
    out[k] = std::norm(f) / (2.0 * kPi);
  }
  return out;
}

RMatrix density_sphere(const TruncatedTriple& t, const VectorState& state,
                       const RVector& thetas, const RVector& phis) {
  const GeometryKind kind = geometry_kind(t.name);
  if (kind != GeometryKind::Sphere && kind != GeometryKind::SphereDc)
    throw InputError("density_sphere: not a sphere triple");
  const auto labels = sphere_labels(t.dim());
  const HalfInteger sp = HalfInteger::from_twice(1), sm = HalfInteger::from_twice(-1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  RMatrix out(thetas.size(), phis.size());
  for (Eigen::Index a = 0; a < thetas.size(); ++a)
    for (Eigen::Index b = 0; b < phis.size(); ++b) {
      Complex up = 0.0, down = 0.0;
      for (Eigen::Index i = 0; i < t.dim(); ++i) {
        const Complex yu = spin_weighted_Y(sp, labels[i].j(), labels[i].m, thetas[a], phis[b]);
        const Complex yd = spin_weighted_Y(sm, labels[i].j(), labels[i].m, thetas[a], phis[b]);
        up += state.vec()[i] * inv_sqrt2 * yu;
        down += state.vec()[i] * inv_sqrt2 * (labels[i].sign > 0 ? yd : -yd);
      }
      out(a, b) = std::norm(up) + std::norm(down);
    }
  return out;
}

}  // namespace pointforge
