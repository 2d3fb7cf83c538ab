#pragma once

#include <Eigen/Dense>

#include "kmcert/core.hpp"

namespace kmcert {

/**
 * The k-means semidefinite relaxation on a subset of s points:
 * minimize (1/(2s)) tr(D X) over the feasible set
 *   X1 = 1, tr(X) = k, X >= 0 entrywise, X PSD.
 * Its optimal value never exceeds the k-means value of any partition of
 * the subset.
 */
struct PengWeiProblem {
  DistanceMatrix D;
  int k = 0;
  int s = 0;
};

struct SolverOptions {
  double tol = 1e-6;    // stop when max(primal, dual residual) falls below this
  int max_iter = 20000;
};

enum class SolveStatus { Solved, MaxIter, InfeasibleInput };

/** Worst-case violations of the primal constraints by the returned X. */
struct PrimalResiduals {
  double row_sum = 0.0;     // max |(X1 - 1)_i|
  double trace = 0.0;       // |tr X - k|
  double negativity = 0.0;  // most negative entry before the final clamp
  double psd = 0.0;         // max(0, -lambda_min(X))
};

/**
 * Primal-dual output. The primal X is an approximate minimizer; the dual
 * triple (y, z, Nmat) has already been restored to exact feasibility
 * (Nmat >= 0 entrywise; the slack (1/(2s))D - (y1' + 1y')/2 - zI - Nmat
 * is PSD up to psd_margin >= -1e-8), so dual_value is a rigorous lower
 * bound on the SDP value regardless of convergence status.
 */
struct SdpSolution {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  double z = 0.0;
  Eigen::MatrixXd Nmat;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double psd_margin = 0.0;  // smallest eigenvalue of the restored dual slack
  PrimalResiduals primal_residuals;
  int iterations = 0;
  SolveStatus status = SolveStatus::Solved;
};

/** Restored dual triple and its certified objective. */
struct DualRestoration {
  Eigen::VectorXd y;
  double z = 0.0;
  Eigen::MatrixXd Nmat;
  double psd_margin = 0.0;
  double dual_value = 0.0;
  double shift = 0.0;  // the eigenvalue shift delta applied to z
};

/** Result of the feasible-set seminorm evaluation. */
struct SeminormResult {
  double value = 0.0;        // solver's primal estimate of max |tr(M X)|
  double upper_bound = 0.0;  // dual-certified upper bound on the same quantity
};

/** Assemble the relaxation instance for a subset; requires k <= s. */
PengWeiProblem build_problem(const Dataset& data_subset, int k);

/**
 * The feasible matrix sum_t (1/|C_t|) 1_{C_t} 1_{C_t}'. Empty clusters are
 * dropped. Its SDP objective equals the k-means objective of the partition.
 */
Eigen::MatrixXd partition_to_feasible_X(const Partition& part);

/**
 * First-order operator-splitting solve (consensus ADMM with three blocks:
 * the affine constraints in closed form, the PSD cone via symmetric
 * eigendecomposition, and the nonnegative orthant). Deterministic for fixed
 * inputs and options. Always returns the best iterate seen, with the dual
 * restored to exact feasibility; status MaxIter still carries a valid
 * certified dual_value.
 */
SdpSolution solve_sdp(const PengWeiProblem& problem, const SolverOptions& opts = {});

/**
 * Make approximate dual variables rigorously feasible: clamp Nmat to the
 * nonnegative orthant, then shift z down by delta = max(0, -lambda_min(Q))
 * plus a 1e-9*||Q||_2 safety margin so the slack Q + delta*I is PSD.
 * dual_value = 1'y + k z' is then a true lower bound on the SDP value.
 */
DualRestoration restore_dual_feasibility(const PengWeiProblem& problem, const Eigen::VectorXd& y,
                                         double z, const Eigen::MatrixXd& Nmat);

/**
 * V = max(0, restored dual value) for the subset's relaxation: a certified
 * lower bound on the subset SDP value (clamping at 0 is sound because the
 * SDP value is nonnegative).
 */
double certified_sdp_lower_bound(const Dataset& data_subset, int k, const SolverOptions& opts = {});

/** The certified bound extracted from an existing solve. */
double certified_sdp_lower_bound(const SdpSolution& solution);

/**
 * The seminorm F(M) = max over feasible X of |tr(M X)|, evaluated as the
 * larger of two solves maximizing tr(M X) and tr(-M X). M must be
 * symmetric. F is bounded by min(nuclear norm, k * spectral norm).
 */
SeminormResult seminorm_F(const Eigen::MatrixXd& M, int k, const SolverOptions& opts = {});

}  // namespace kmcert
