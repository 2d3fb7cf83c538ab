#include "kmcert/sdp.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kmcert {

namespace {

constexpr double kOverRelax = 1.6;
constexpr double kRhoInit = 1.0;
constexpr int kAdaptEvery = 20;       // residual-balancing cadence
constexpr double kAdaptFactor = 2.0;
constexpr double kAdaptThreshold = 5.0;
constexpr int kRestoreEvery = 100;    // dual-restoration checkpoint cadence

void check_options(const SolverOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
  if (opts.max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
}

/**
 * Orthogonal projection onto {X : X1 = 1, tr X = k}, returning the
 * correction coefficients (y, z) with X = V + (y1' + 1y')/2 + zI. The
 * coefficients double as Lagrange multipliers for dual extraction.
 */
Eigen::MatrixXd proj_affine(const Eigen::MatrixXd& V, int k, Eigen::VectorXd& y_out,
                            double& z_out) {
  const Eigen::Index s = V.rows();
  if (s == 1) {
    y_out = Eigen::VectorXd::Constant(1, 1.0 - V(0, 0));
    z_out = 0.0;
    return Eigen::MatrixXd::Constant(1, 1, 1.0);
  }
  const Eigen::VectorXd r = Eigen::VectorXd::Ones(s) - V.rowwise().sum();
  const double t = static_cast<double>(k) - V.trace();
  const double R = r.sum();
  const double sd = static_cast<double>(s);
  const double z = (t - R / sd) / (sd - 1.0);
  const double sigma = R / sd - z;
  const Eigen::VectorXd y = (2.0 / sd) * (r.array() - (sigma / 2.0 + z)).matrix();

  Eigen::MatrixXd X = V;
  X.rowwise() += (0.5 * y).transpose();
  X.colwise() += 0.5 * y;
  X.diagonal().array() += z;
  y_out = y;
  z_out = z;
  return X;
}

/** Restoration against an explicit objective matrix C = D/(2s). */
DualRestoration restore_against(const Eigen::MatrixXd& C, int k, const Eigen::VectorXd& y,
                                double z, const Eigen::MatrixXd& Nmat) {
  const Eigen::Index s = C.rows();
  DualRestoration out;
  out.y = y;
  out.Nmat = Nmat.cwiseMax(0.0);

  Eigen::MatrixXd Q = C - out.Nmat;
  Q.rowwise() -= (0.5 * y).transpose();
  Q.colwise() -= 0.5 * y;
  Q.diagonal().array() -= z;
  Q = 0.5 * (Q + Q.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
  const double w_min = es.eigenvalues()(0);
  const double w_max = es.eigenvalues()(s - 1);
  // Shift z down until the slack is PSD, plus a safety margin absorbing
  // eigensolver error; the certificate must stay on the conservative side.
  const double delta = std::max(0.0, -w_min) + 1e-9 * std::max(std::abs(w_min), std::abs(w_max));
  out.shift = delta;
  out.z = z - delta;
  out.psd_margin = w_min + delta;
  out.dual_value = y.sum() + static_cast<double>(k) * out.z;
  return out;
}

struct CoreSolve {
  Eigen::MatrixXd X;
  DualRestoration dual;  // restored best dual candidate seen
  double primal_value = 0.0;
  PrimalResiduals residuals;
  int iterations = 0;
  bool converged = false;
};

/**
 * Consensus splitting over three copies of X: the affine block carries the
 * linear objective (a prox step), the PSD block projects through a
 * symmetric eigendecomposition, the third block clamps to the nonnegative
 * orthant. The consensus average Z is the reported primal; the affine
 * multipliers and the orthant's scaled dual give certified dual
 * candidates, restored at checkpoints and kept at their best.
 */
CoreSolve solve_core(const Eigen::MatrixXd& C, int k, const SolverOptions& opts) {
  const Eigen::Index s = C.rows();
  const double scale = std::max(C.norm(), 1e-12);
  const Eigen::MatrixXd Cs = C / scale;

  // Start from the maximally mixed feasible matrix.
  const double offd =
      s > 1 ? static_cast<double>(s - k) / (static_cast<double>(s) * static_cast<double>(s - 1))
            : 0.0;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Constant(s, s, offd);
  Z.diagonal().setConstant(static_cast<double>(k) / static_cast<double>(s));

  Eigen::MatrixXd UA = Eigen::MatrixXd::Zero(s, s);
  Eigen::MatrixXd UP = Eigen::MatrixXd::Zero(s, s);
  Eigen::MatrixXd UN = Eigen::MatrixXd::Zero(s, s);
  double rho = kRhoInit;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  Eigen::VectorXd mu_y = Eigen::VectorXd::Zero(s);
  double mu_z = 0.0;

  CoreSolve result;
  result.dual.y = Eigen::VectorXd::Zero(s);
  result.dual.Nmat = Eigen::MatrixXd::Zero(s, s);
  result.dual.dual_value = -std::numeric_limits<double>::infinity();

  auto checkpoint = [&]() {
    const Eigen::VectorXd y_cand = (rho * scale) * mu_y;
    const double z_cand = rho * scale * mu_z;
    const Eigen::MatrixXd n_cand = (rho * scale) * UN.cwiseMax(0.0);
    DualRestoration cand = restore_against(C, k, y_cand, z_cand, n_cand);
    if (cand.dual_value > result.dual.dual_value) result.dual = std::move(cand);
  };

  int it = 0;
  for (it = 1; it <= opts.max_iter; ++it) {
    const Eigen::MatrixXd XA = proj_affine(Z - UA - Cs / rho, k, mu_y, mu_z);
    es.compute(0.5 * ((Z - UP) + (Z - UP).transpose()));
    const Eigen::MatrixXd XP = es.eigenvectors() *
                               es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                               es.eigenvectors().transpose();
    const Eigen::MatrixXd XN = (Z - UN).cwiseMax(0.0);

    const Eigen::MatrixXd HA = kOverRelax * XA + (1.0 - kOverRelax) * Z;
    const Eigen::MatrixXd HP = kOverRelax * XP + (1.0 - kOverRelax) * Z;
    const Eigen::MatrixXd HN = kOverRelax * XN + (1.0 - kOverRelax) * Z;
    const Eigen::MatrixXd Znew = (HA + HP + HN + UA + UP + UN) / 3.0;
    UA += HA - Znew;
    UP += HP - Znew;
    UN += HN - Znew;

    const double pr = std::max({(XA - Znew).norm(), (XP - Znew).norm(), (XN - Znew).norm()});
    const double dr = rho * (Znew - Z).norm() * std::sqrt(3.0);
    const double nz = std::max(1.0, Znew.norm());
    Z = Znew;

    const bool done = (pr / nz < opts.tol) && (dr / nz < opts.tol);
    if (it % kRestoreEvery == 0 || it == opts.max_iter || done) checkpoint();
    if (done) {
      result.converged = true;
      break;
    }
    if (it % kAdaptEvery == 0) {
      // Residual balancing: rescale rho (and the scaled duals) when primal
      // and dual residuals drift apart.
      if (pr > kAdaptThreshold * dr) {
        rho *= kAdaptFactor;
        UA /= kAdaptFactor;
        UP /= kAdaptFactor;
        UN /= kAdaptFactor;
      } else if (dr > kAdaptThreshold * pr) {
        rho /= kAdaptFactor;
        UA *= kAdaptFactor;
        UP *= kAdaptFactor;
        UN *= kAdaptFactor;
      }
    }
  }
  result.iterations = std::min(it, opts.max_iter);

  const Eigen::MatrixXd sym = 0.5 * (Z + Z.transpose());
  result.residuals.negativity = std::max(0.0, -sym.minCoeff());
  result.X = sym.cwiseMax(0.0);
  result.primal_value = result.X.cwiseProduct(C).sum();
  result.residuals.row_sum = (result.X.rowwise().sum().array() - 1.0).abs().maxCoeff();
  result.residuals.trace = std::abs(result.X.trace() - static_cast<double>(k));
  es.compute(result.X, Eigen::EigenvaluesOnly);
  result.residuals.psd = std::max(0.0, -es.eigenvalues()(0));
  return result;
}

Eigen::MatrixXd objective_matrix(const PengWeiProblem& problem) {
  return problem.D.d2 / (2.0 * static_cast<double>(problem.s));
}

void check_problem(const PengWeiProblem& problem) {
  if (problem.s < 1 || problem.D.d2.rows() != problem.s || problem.D.d2.cols() != problem.s)
    throw std::invalid_argument("solve_sdp: distance matrix shape does not match s");
  if (problem.k < 1 || problem.k > problem.s)
    throw std::invalid_argument("solve_sdp: k = " + std::to_string(problem.k) +
                                " out of range [1," + std::to_string(problem.s) + "]");
}

}  // namespace

PengWeiProblem build_problem(const Dataset& data_subset, int k) {
  const int s = static_cast<int>(data_subset.n_points());
  if (k < 1 || k > s)
    throw std::invalid_argument("build_problem: k = " + std::to_string(k) +
                                " out of range [1," + std::to_string(s) + "]");
  std::vector<int> all(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) all[static_cast<std::size_t>(i)] = i;
  return PengWeiProblem{squared_distance_matrix(data_subset, all), k, s};
}

Eigen::MatrixXd partition_to_feasible_X(const Partition& part) {
  const Eigen::Index s = static_cast<Eigen::Index>(part.labels.size());
  if (s == 0) throw std::invalid_argument("partition_to_feasible_X: empty partition");
  if (part.k < 1) throw std::invalid_argument("partition_to_feasible_X: k must be positive");

  std::vector<std::vector<Eigen::Index>> clusters(static_cast<std::size_t>(part.k));
  for (Eigen::Index i = 0; i < s; ++i) {
    const int label = part.labels[static_cast<std::size_t>(i)];
    if (label < 0 || label >= part.k)
      throw std::invalid_argument("partition_to_feasible_X: label out of range");
    clusters[static_cast<std::size_t>(label)].push_back(i);
  }

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(s, s);
  for (const auto& members : clusters) {
    if (members.empty()) continue;  // empty clusters are dropped
    const double w = 1.0 / static_cast<double>(members.size());
    for (Eigen::Index i : members)
      for (Eigen::Index j : members) X(i, j) = w;
  }
  return X;
}

SdpSolution solve_sdp(const PengWeiProblem& problem, const SolverOptions& opts) {
  check_problem(problem);
  check_options(opts);

  SdpSolution solution;
  if (!problem.D.d2.allFinite()) {
    solution.status = SolveStatus::InfeasibleInput;
    solution.X = Eigen::MatrixXd::Zero(problem.s, problem.s);
    solution.y = Eigen::VectorXd::Zero(problem.s);
    solution.Nmat = Eigen::MatrixXd::Zero(problem.s, problem.s);
    solution.primal_value = std::numeric_limits<double>::quiet_NaN();
    solution.dual_value = -std::numeric_limits<double>::infinity();
    return solution;
  }

  const CoreSolve core = solve_core(objective_matrix(problem), problem.k, opts);
  solution.X = core.X;
  solution.y = core.dual.y;
  solution.z = core.dual.z;
  solution.Nmat = core.dual.Nmat;
  solution.primal_value = core.primal_value;
  solution.dual_value = core.dual.dual_value;
  solution.psd_margin = core.dual.psd_margin;
  solution.primal_residuals = core.residuals;
  solution.iterations = core.iterations;
  solution.status = core.converged ? SolveStatus::Solved : SolveStatus::MaxIter;
  return solution;
}

DualRestoration restore_dual_feasibility(const PengWeiProblem& problem, const Eigen::VectorXd& y,
                                         double z, const Eigen::MatrixXd& Nmat) {
  check_problem(problem);
  if (y.size() != problem.s || Nmat.rows() != problem.s || Nmat.cols() != problem.s)
    throw std::invalid_argument("restore_dual_feasibility: dual dimensions do not match s");
  return restore_against(objective_matrix(problem), problem.k, y, z, Nmat);
}

double certified_sdp_lower_bound(const SdpSolution& solution) {
  if (solution.status == SolveStatus::InfeasibleInput)
    throw std::invalid_argument("certified_sdp_lower_bound: solver rejected the input");
  return std::max(0.0, solution.dual_value);
}

double certified_sdp_lower_bound(const Dataset& data_subset, int k, const SolverOptions& opts) {
  return certified_sdp_lower_bound(solve_sdp(build_problem(data_subset, k), opts));
}

SeminormResult seminorm_F(const Eigen::MatrixXd& M, int k, const SolverOptions& opts) {
  check_options(opts);
  const Eigen::Index s = M.rows();
  if (s < 1 || M.cols() != s) throw std::invalid_argument("seminorm_F: M must be square");
  if (!M.allFinite()) throw std::invalid_argument("seminorm_F: M must be finite");
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, M.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("seminorm_F: M must be symmetric");
  if (k < 1 || k > s)
    throw std::invalid_argument("seminorm_F: k = " + std::to_string(k) + " out of range [1," +
                                std::to_string(s) + "]");

  const double fnorm = M.norm();
  if (fnorm == 0.0) return SeminormResult{0.0, 0.0};

  // Normalizing by the Frobenius norm keeps solver tolerances scale-free
  // and makes absolute homogeneity exact: alpha*M maps to the same pair of
  // solves (swapped for negative alpha).
  const Eigen::MatrixXd Ms = (0.5 / fnorm) * (M + M.transpose());

  // max tr(M X) = -min tr(-M X); the restored dual of each min problem
  // certifies an upper bound for the corresponding max.
  const CoreSolve plus = solve_core(-Ms, k, opts);
  const CoreSolve minus = solve_core(Ms, k, opts);
  const double value = std::max(-plus.primal_value, -minus.primal_value);
  const double upper = std::max(-plus.dual.dual_value, -minus.dual.dual_value);
  return SeminormResult{fnorm * std::max(0.0, value), fnorm * upper};
}

}  // namespace kmcert
