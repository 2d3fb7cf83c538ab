#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "kmcert/core.hpp"
#include "kmcert/sdp.hpp"

namespace kmcert {

/** Test a user-supplied bound B: reject "optimum <= B" when (B/T)^ell is small. */
struct FixedB {
  double B = 0.0;
};

/** Invert the test instead: report B* = T * eta^(1/ell), valid with confidence 1 - eta. */
struct ConfidenceBound {
  double eta = 0.01;
};

using CertifyMode = std::variant<FixedB, ConfidenceBound>;

struct CertifierConfig {
  int s = 0;                      // subsample size, 1 <= s <= N (and >= k)
  int ell = 7;                    // number of independent trials
  CertifyMode mode = ConfidenceBound{};
  SolverOptions solver_opts;
  std::uint64_t master_seed = 0;  // derives one independent stream per trial
};

/** Per-trial audit record. */
struct TrialDiagnostics {
  std::vector<int> subset;  // indices drawn for this trial
  double value = 0.0;       // the realized V_i
  double primal_value = 0.0;
  double dual_value = 0.0;
  double psd_margin = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::Solved;
};

/**
 * Full certification outcome. In FixedB mode, p_value = (B/t_stat)^ell
 * (1 when t_stat <= B) and bound echoes B. In ConfidenceBound mode,
 * bound = t_stat * eta^(1/ell) and p_value records the error budget eta.
 * confidence = 1 - p_value resp. 1 - eta.
 */
struct CertificateReport {
  std::vector<double> values;
  double t_stat = 0.0;
  CertifyMode mode;
  double p_value = 1.0;
  double bound = 0.0;
  double confidence = 0.0;
  std::vector<TrialDiagnostics> trials;
};

/**
 * Draw ell subsets of size s (independent streams derived from the master
 * seed; subsets may overlap across trials) and compute the certified SDP
 * lower bound V_i for each. Results are identical regardless of the order
 * trials execute in.
 */
std::vector<double> draw_certificates(const Dataset& data, int k, const CertifierConfig& config);

/** Minimum of the realized values. */
double test_statistic(const std::vector<double>& values);

/**
 * (B/T)^ell clamped to [0,1]: the probability, were the optimum at most B,
 * of all ell independent nonnegative draws with mean <= optimum landing at
 * or above T. T <= B (including T = 0) gives 1; B = 0 with T > 0 gives 0.
 * Computed by repeated multiplication so dyadic ratios stay exact.
 */
double p_value(double B, double T, int ell);

/**
 * B* = T * eta^(1/ell); the claim "optimum > B*" holds with confidence
 * 1 - eta. The root is computed as exp2(log2(eta)/ell) so dyadic cases
 * (e.g. eta = 1/128, ell = 7) are exact.
 */
double confidence_lower_bound(double T, int ell, double eta);

/** Full pipeline: draw_certificates + test_statistic + mode-appropriate bound. */
CertificateReport certify(const Dataset& data, int k, const CertifierConfig& config);

/**
 * Same test machinery with the cheap seeding-based V_i from
 * baseline_bound_sample instead of SDP solves (config.s and solver options
 * are ignored; each trial seeds on the full dataset).
 */
CertificateReport certify_baseline(const Dataset& data, int k, const CertifierConfig& config);

}  // namespace kmcert
