#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "pointforge/triple.hpp"

namespace pointforge {

/// Commutators K_i = [D, a_i] of the algebra basis with the Dirac operator,
/// each rescaled to unit Frobenius norm (commutators are sparse and their raw
/// norms vary widely; the rescaling preconditions the Gram matrix). Objective
/// vectors must be divided by scales() to stay in the rescaled coordinates.
/// Also holds the Gram matrix G_ij = Re<K_i, K_j>_F and its eigendecomposition
/// (shared by every distance solve on a triple).
class CommutatorSet {
 public:
  explicit CommutatorSet(const TruncatedTriple& t);

  int count() const { return n_; }
  Eigen::Index space_dim() const { return d_; }
  /// Frobenius norm of each raw commutator (1 for vanishing ones).
  const RVector& scales() const { return scales_; }

  /// A(c) = sum_i c_i K_i (anti-Hermitian).
  CMatrix assemble(const RVector& c) const;
  /// Adjoint map S(M)_i = Re<K_i, M>_F.
  RVector correlate(const CMatrix& m) const;

  const RMatrix& gram() const { return gram_; }
  RVector pinv_apply(const RVector& rhs) const;
  RVector range_project(const RVector& q) const;
  /// |q - P_range q|, detects objective components invisible to the constraint.
  double range_defect(const RVector& q) const;

 private:
  Eigen::Index d_ = 0;
  int n_ = 0;
  RVector scales_;
  Eigen::SparseMatrix<double> k_sp_;  // (2 d^2) x n, column i = [Re; Im] vec(K_i)
  RMatrix gram_;
  RMatrix gram_evec_;
  RVector gram_eval_;
  double gram_thresh_ = 0.0;
};

/// Truncated distance between two vector states as a semidefinite program:
///   maximize |sum_i c_i (<v,a_i v> - <w,a_i w>)|
///   subject to  ||sum_i c_i [D, a_i]||_op <= 1,
/// the operator-norm ball written as the linear matrix inequality
/// [[I, K],[K*, I]] >= 0.
struct SdpProblem {
  std::shared_ptr<const CommutatorSet> comms;
  RVector objective;  // q_i = <v,a_i v> - <w,a_i w>
};

SdpProblem build_problem(const TruncatedTriple& t, const VectorState& v, const VectorState& w);
SdpProblem build_problem(std::shared_ptr<const CommutatorSet> comms,
                         const std::vector<HermitianMatrix>& basis, const VectorState& v,
                         const VectorState& w);

enum class SolveStatus { Optimal, MaxIter, Infeasible };

struct SdpOptions {
  double rho = 0.0;          // ADMM penalty; <= 0 seeds it from the objective norm
  double over_relax = 1.8;
  double tol = 1e-6;
  int max_iter = 20000;
  bool adaptive_rho = true;
};

struct SdpSolution {
  double value = 0.0;
  RVector coefficients;
  SolveStatus status = SolveStatus::Optimal;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

/// Splitting solver for the distance program. Both objective orientations
/// +-q are solved (the second seeded at the mirror image of the first, an
/// exact symmetry of the feasible set) and the larger value returned; the
/// reported coefficients are rescaled so that ||A(c)|| <= 1 holds exactly,
/// making the value a certified lower bound of the true supremum. An
/// objective with a component outside range(G) makes the program unbounded:
/// status Infeasible, value = +infinity.
SdpSolution solve_distance(const SdpProblem& p, const SdpOptions& opts = {});

struct OracleOptions {
  int restarts = 12;
  int iterations = 800;
  std::uint64_t seed = 1;
};

/// Independent lower-bound oracle: projected subgradient ascent of q'c with
/// the iterate rescaled to the constraint boundary ||A(c)|| = 1 each step.
/// Shares no iteration machinery with solve_distance.
double oracle_distance(const SdpProblem& p, const OracleOptions& opts = {});

/// ||A(c)||_op recomputed from the 2d x 2d block [[I, K],[K*, I]]: the norm
/// equals 1 - lambda_min(block). Independent of the solver's internal
/// spectral-clamp route.
double lmi_norm(const CommutatorSet& comms, const RVector& c);

struct PairStat {
  int i = 0, j = 0;
  SolveStatus status = SolveStatus::Optimal;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct DistanceRunStats {
  std::vector<PairStat> pairs;
  int max_iter_count = 0;  // pairs that hit the iteration cap
  long total_iterations = 0;
  double wall_seconds = 0.0;
  bool all_converged() const { return max_iter_count == 0; }
};

/// All pairwise distances between the given states. Every pair is an
/// independent solve distributed over the worker pool, so results do not
/// depend on the thread count.
SymmetricDistances distance_matrix(const TruncatedTriple& t,
                                   const std::vector<VectorState>& states,
                                   const SdpOptions& opts = {}, int threads = 0,
                                   DistanceRunStats* stats = nullptr);

}  // namespace pointforge
