#include "pointforge/connes.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "pointforge/parallel.hpp"
#include "pointforge/rng.hpp"

namespace pointforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Matrices travel through the sparse commutator map as stacked
// [vec(Re M); vec(Im M)] columns.
RVector pack(const CMatrix& m) {
  const Eigen::Index dd = m.size();
  RVector x(2 * dd);
  const Complex* p = m.data();
  for (Eigen::Index k = 0; k < dd; ++k) {
    x[k] = p[k].real();
    x[dd + k] = p[k].imag();
  }
  return x;
}

CMatrix unpack(const RVector& x, Eigen::Index d) {
  CMatrix m(d, d);
  Complex* p = m.data();
  const Eigen::Index dd = d * d;
  for (Eigen::Index k = 0; k < dd; ++k) p[k] = Complex(x[k], x[dd + k]);
  return m;
}

}  // namespace

CommutatorSet::CommutatorSet(const TruncatedTriple& t) {
  t.validate();
  d_ = t.dim();
  n_ = static_cast<int>(t.algebra_basis.size());
  scales_ = RVector::Ones(n_);
  const RVector& lam = t.dirac_eigenvalues;
  const Eigen::Index dd = d_ * d_;

  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < n_; ++i) {
    // [D, a] with diagonal D: K_rc = (lambda_r - lambda_c) a_rc
    const CMatrix& a = t.algebra_basis[i].mat();
    double fro2 = 0.0;
    for (Eigen::Index c = 0; c < d_; ++c)
      for (Eigen::Index r = 0; r < d_; ++r)
        fro2 += std::norm((lam[r] - lam[c]) * a(r, c));
    // unit Frobenius norm per commutator keeps the Gram well conditioned;
    // a zero commutator (identity element) keeps scale 1
    const double s = std::sqrt(fro2);
    if (s > 1e-14) scales_[i] = s;
    for (Eigen::Index c = 0; c < d_; ++c)
      for (Eigen::Index r = 0; r < d_; ++r) {
        const Complex k = (lam[r] - lam[c]) * a(r, c) / scales_[i];
        if (k != Complex(0.0, 0.0)) {
          const Eigen::Index flat = c * d_ + r;
          if (k.real() != 0.0) trips.emplace_back(flat, i, k.real());
          if (k.imag() != 0.0) trips.emplace_back(dd + flat, i, k.imag());
        }
      }
  }
  k_sp_.resize(2 * dd, n_);
  k_sp_.setFromTriplets(trips.begin(), trips.end());
  k_sp_.makeCompressed();

  gram_.resize(n_, n_);
  for (int i = 0; i < n_; ++i) {
    const RVector col = k_sp_.col(i);
    gram_.col(i) = k_sp_.transpose() * col;
  }
  gram_ = 0.5 * (gram_ + gram_.transpose().eval());
  Eigen::SelfAdjointEigenSolver<RMatrix> es(gram_);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("CommutatorSet: Gram eigendecomposition failed");
  gram_evec_ = es.eigenvectors();
  gram_eval_ = es.eigenvalues();
  gram_thresh_ = 1e-12 * std::max(1.0, gram_eval_.cwiseAbs().maxCoeff());
}

CMatrix CommutatorSet::assemble(const RVector& c) const {
  return unpack(k_sp_ * c, d_);
}

RVector CommutatorSet::correlate(const CMatrix& m) const {
  return k_sp_.transpose() * pack(m);
}

RVector CommutatorSet::pinv_apply(const RVector& rhs) const {
  RVector y = gram_evec_.transpose() * rhs;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    y[i] = gram_eval_[i] > gram_thresh_ ? y[i] / gram_eval_[i] : 0.0;
  return gram_evec_ * y;
}

RVector CommutatorSet::range_project(const RVector& q) const {
  RVector y = gram_evec_.transpose() * q;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (gram_eval_[i] <= gram_thresh_) y[i] = 0.0;
  return gram_evec_ * y;
}

double CommutatorSet::range_defect(const RVector& q) const {
  return (q - range_project(q)).norm();
}

SdpProblem build_problem(std::shared_ptr<const CommutatorSet> comms,
                         const std::vector<HermitianMatrix>& basis, const VectorState& v,
                         const VectorState& w) {
  if (static_cast<int>(basis.size()) != comms->count())
    throw InputError("build_problem: basis size does not match commutator set");
  RVector q(comms->count());
  for (int i = 0; i < comms->count(); ++i)
    q[i] = (state_expectation(v, basis[i]) - state_expectation(w, basis[i])) /
           comms->scales()[i];
  return SdpProblem{std::move(comms), std::move(q)};
}

SdpProblem build_problem(const TruncatedTriple& t, const VectorState& v, const VectorState& w) {
  return build_problem(std::make_shared<CommutatorSet>(t), t.algebra_basis, v, w);
}

namespace {

// Frobenius projection onto {anti-Hermitian, ||.||_op <= 1}: clamp the
// spectrum of the Hermitian matrix -iV to [-1, 1]. Only the violating
// eigen-directions are corrected.
CMatrix project_operator_ball(const CMatrix& v) {
  RVector ev;
  CMatrix q;
  herm_eigensolve(CMatrix(Complex(0.0, -1.0) * v), ev, q);
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) > 1.0) active.push_back(i);
  if (active.empty()) return v;
  CMatrix qa(v.rows(), active.size());
  RVector delta(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) {
    qa.col(k) = q.col(active[k]);
    const double e = ev[active[k]];
    delta[k] = e - (e > 1.0 ? 1.0 : -1.0);
  }
  return v - Complex(0.0, 1.0) * (qa * delta.asDiagonal() * qa.adjoint());
}

struct AdmmOut {
  RVector c;
  CMatrix x, u;
  double rho = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  double primal = 0.0, dual = 0.0;
  int iterations = 0;
};

AdmmOut admm_maximize(const CommutatorSet& K, const RVector& q, const SdpOptions& o,
                      const AdmmOut* seed) {
  const Eigen::Index d = K.space_dim();
  double rho = o.rho > 0.0 ? o.rho : std::max(1e-6, 0.5 * q.norm());
  CMatrix X = CMatrix::Zero(d, d), U = CMatrix::Zero(d, d);
  if (seed) {
    X = seed->x;
    U = seed->u;
    rho = seed->rho;
  }

  AdmmOut out;
  const double q_scale = std::max(1.0, q.norm());
  for (int it = 1; it <= o.max_iter; ++it) {
    out.iterations = it;
    const RVector rhs = q / rho + K.correlate(X - U);
    out.c = K.pinv_apply(rhs);
    const CMatrix ac = K.assemble(out.c);
    const CMatrix ah = o.over_relax * ac + (1.0 - o.over_relax) * X;
    CMatrix v = ah + U;
    v = 0.5 * (v - v.adjoint().eval());  // stay anti-Hermitian against drift
    const CMatrix x_new = project_operator_ball(v);
    U = v - x_new;
    out.primal = (ac - x_new).norm();
    out.dual = rho * K.correlate(x_new - X).norm();
    X = x_new;

    const double eps_pri = o.tol * std::max({1.0, ac.norm(), X.norm()});
    const double eps_dual = o.tol * q_scale;
    if (out.primal <= eps_pri && out.dual <= eps_dual) {
      out.status = SolveStatus::Optimal;
      break;
    }
    if (o.adaptive_rho && it % 10 == 0) {
      if (out.primal > 10.0 * out.dual && rho < 1e4) {
        rho *= 2.0;
        U *= 0.5;
      } else if (out.dual > 10.0 * out.primal && rho > 1e-4) {
        rho *= 0.5;
        U *= 2.0;
      }
    }
  }
  out.x = std::move(X);
  out.u = std::move(U);
  out.rho = rho;
  return out;
}

}  // namespace

SdpSolution solve_distance(const SdpProblem& p, const SdpOptions& opts) {
  const CommutatorSet& K = *p.comms;
  const RVector& q = p.objective;
  if (q.size() != K.count()) throw InputError("solve_distance: objective size mismatch");

  SdpSolution sol;
  sol.coefficients = RVector::Zero(q.size());
  if (q.norm() < 1e-14) return sol;  // identical expectations, distance 0

  if (K.range_defect(q) > 1e-8 * std::max(1.0, q.norm())) {
    sol.status = SolveStatus::Infeasible;  // objective escapes the constraint: unbounded
    sol.value = kInf;
    return sol;
  }

  const AdmmOut plus = admm_maximize(K, q, opts, nullptr);
  // the feasible set is symmetric under c -> -c, so the mirrored plus
  // solution seeds the opposite orientation at its fixed point
  AdmmOut mirror;
  mirror.x = -plus.x;
  mirror.u = -plus.u;
  mirror.rho = plus.rho;
  const AdmmOut minus = admm_maximize(K, RVector(-q), opts, &mirror);
  sol.iterations = plus.iterations + minus.iterations;

  auto certify = [&](RVector c) {
    const double nrm = antiherm_norm(K.assemble(c));
    if (nrm > 1.0) c /= nrm;
    return c;
  };
  const RVector c_plus = certify(plus.c);
  const RVector c_minus = certify(minus.c);
  const double v_plus = q.dot(c_plus);
  const double v_minus = -q.dot(c_minus);

  sol.value = std::max({v_plus, v_minus, 0.0});
  sol.coefficients = v_plus >= v_minus ? c_plus : c_minus;
  sol.primal_residual = std::max(plus.primal, minus.primal);
  sol.dual_residual = std::max(plus.dual, minus.dual);
  sol.status = (plus.status == SolveStatus::Optimal && minus.status == SolveStatus::Optimal)
                   ? SolveStatus::Optimal
                   : SolveStatus::MaxIter;
  return sol;
}

double oracle_distance(const SdpProblem& p, const OracleOptions& opts) {
  const CommutatorSet& K = *p.comms;
  const RVector& q = p.objective;
  if (q.size() != K.count()) throw InputError("oracle_distance: objective size mismatch");
  if (q.norm() < 1e-14) return 0.0;
  if (K.range_defect(q) > 1e-8 * std::max(1.0, q.norm())) return kInf;

  double best = 0.0;
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(sub_seed(opts.seed, static_cast<std::uint64_t>(r)));
    RVector c(q.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.normal();
    c = K.range_project(c);
    double nrm = antiherm_norm(K.assemble(c));
    if (nrm < 1e-12) continue;
    c /= nrm;
    best = std::max(best, std::abs(q.dot(c)));
    for (int it = 1; it <= opts.iterations; ++it) {
      // subgradient of the renormalized objective |q.c| / ||A(c)||: on the
      // ||A(c)|| = 1 shell the norm's gradient is correlate(i u u*) with u
      // the extreme eigenvector of -i A(c); step along the component of
      // sign(q.c) q transverse to it
      RVector ev;
      CMatrix evec;
      herm_eigensolve(CMatrix(Complex(0.0, -1.0) * K.assemble(c)), ev, evec);
      const Eigen::Index last = ev.size() - 1;
      const bool top = ev[last] >= -ev[0];
      const CVector u = evec.col(top ? last : 0);
      RVector normal = K.correlate(Complex(0.0, 1.0) * (u * u.adjoint()));
      if (!top) normal = -normal;
      const double nn = normal.norm();
      if (nn < 1e-300) break;
      normal /= nn;
      const double sigma = q.dot(c) >= 0.0 ? 1.0 : -1.0;
      RVector g = sigma * q - (sigma * q.dot(normal)) * normal;
      const double gn = g.norm();
      if (gn < 1e-12 * q.norm()) break;  // q parallel to the normal: stationary
      c += (0.3 * c.norm() / std::sqrt(static_cast<double>(it))) * (g / gn);
      nrm = antiherm_norm(K.assemble(c));
      if (nrm < 1e-300) break;
      c /= nrm;
      best = std::max(best, std::abs(q.dot(c)));
    }
  }
  return best;
}

double lmi_norm(const CommutatorSet& comms, const RVector& c) {
  const CMatrix k = comms.assemble(c);
  const Eigen::Index d = k.rows();
  CMatrix block = CMatrix::Zero(2 * d, 2 * d);
  block.topLeftCorner(d, d) = CMatrix::Identity(d, d);
  block.bottomRightCorner(d, d) = CMatrix::Identity(d, d);
  block.topRightCorner(d, d) = k;
  block.bottomLeftCorner(d, d) = k.adjoint();
  const RVector ev = herm_eigenvalues(block);
  return 1.0 - ev.minCoeff();
}

SymmetricDistances distance_matrix(const TruncatedTriple& t,
                                   const std::vector<VectorState>& states,
                                   const SdpOptions& opts, int threads,
                                   DistanceRunStats* stats) {
  const auto start = std::chrono::steady_clock::now();
  const int n = static_cast<int>(states.size());
  if (n < 2) return SymmetricDistances(std::max(n, 0));
  auto comms = std::make_shared<const CommutatorSet>(t);

  // expectation table: row s is <v_s, a_i v_s> over the algebra basis,
  // rescaled once to the normalized commutators
  const int nb = comms->count();
  RMatrix expect(n, nb);
  for (int s = 0; s < n; ++s)
    for (int b = 0; b < nb; ++b)
      expect(s, b) = state_expectation(states[s], t.algebra_basis[b]) / comms->scales()[b];

  SymmetricDistances dist(n);
  const int total = n * (n - 1) / 2;
  std::vector<PairStat> pair_stats(total);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(total);
  for (int i = 0; i < n - 1; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  parallel_for(total, resolve_threads(threads), [&](int k) {
    const auto [i, j] = pairs[k];
    SdpProblem prob{comms, RVector((expect.row(i) - expect.row(j)).transpose())};
    const SdpSolution sol = solve_distance(prob, opts);
    if (sol.status == SolveStatus::Infeasible)
      throw InputError("distance_matrix: unbounded objective for pair (" + std::to_string(i) +
                       "," + std::to_string(j) + ")");
    dist.set(i, j, sol.value);
    pair_stats[k] =
        PairStat{i, j, sol.status, sol.iterations, sol.primal_residual, sol.dual_residual};
  });

  if (stats) {
    stats->pairs = std::move(pair_stats);
    stats->max_iter_count = 0;
    stats->total_iterations = 0;
    for (const auto& ps : stats->pairs) {
      if (ps.status == SolveStatus::MaxIter) ++stats->max_iter_count;
      stats->total_iterations += ps.iterations;
    }
    stats->wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return dist;
}

}  // namespace pointforge
