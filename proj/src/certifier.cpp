#include "kmcert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kmcert/kmeans.hpp"

namespace kmcert {

namespace {

void check_config(const Dataset& data, int k, const CertifierConfig& config, bool needs_subsets) {
  if (k < 1) throw std::invalid_argument("certify: k must be positive");
  if (config.ell < 1) throw std::invalid_argument("certify: ell must be >= 1");
  if (needs_subsets) {
    if (config.s < 1 || config.s > data.n_points())
      throw std::invalid_argument("certify: s = " + std::to_string(config.s) +
                                  " out of range [1," + std::to_string(data.n_points()) + "]");
    if (k > config.s)
      throw std::invalid_argument("certify: k = " + std::to_string(k) +
                                  " exceeds subsample size s = " + std::to_string(config.s));
  }
  if (const auto* fixed = std::get_if<FixedB>(&config.mode)) {
    if (!(fixed->B >= 0.0)) throw std::invalid_argument("certify: B must be >= 0");
  } else {
    const double eta = std::get<ConfidenceBound>(config.mode).eta;
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("certify: eta must be in (0,1)");
  }
}

std::vector<TrialDiagnostics> run_trials(const Dataset& data, int k,
                                         const CertifierConfig& config) {
  Rng master(config.master_seed);
  std::vector<Rng> streams = master.spawn(static_cast<std::size_t>(config.ell));

  std::vector<TrialDiagnostics> trials(static_cast<std::size_t>(config.ell));
  for (int i = 0; i < config.ell; ++i) {
    auto& trial = trials[static_cast<std::size_t>(i)];
    SubsampleResult sub = subsample(data, config.s, streams[static_cast<std::size_t>(i)]);
    const SdpSolution solution = solve_sdp(build_problem(sub.data, k), config.solver_opts);
    trial.subset = std::move(sub.indices);
    trial.value = certified_sdp_lower_bound(solution);
    trial.primal_value = solution.primal_value;
    trial.dual_value = solution.dual_value;
    trial.psd_margin = solution.psd_margin;
    trial.iterations = solution.iterations;
    trial.status = solution.status;
  }
  return trials;
}

CertificateReport assemble(const CertifierConfig& config, std::vector<TrialDiagnostics> trials) {
  CertificateReport report;
  report.trials = std::move(trials);
  report.values.reserve(report.trials.size());
  for (const auto& trial : report.trials) report.values.push_back(trial.value);
  report.t_stat = test_statistic(report.values);
  report.mode = config.mode;

  if (const auto* fixed = std::get_if<FixedB>(&config.mode)) {
    report.p_value = p_value(fixed->B, report.t_stat, config.ell);
    report.bound = fixed->B;
    report.confidence = 1.0 - report.p_value;
  } else {
    const double eta = std::get<ConfidenceBound>(config.mode).eta;
    report.p_value = eta;  // the error budget of the inverted test
    report.bound = confidence_lower_bound(report.t_stat, config.ell, eta);
    report.confidence = 1.0 - eta;
  }
  return report;
}

}  // namespace

std::vector<double> draw_certificates(const Dataset& data, int k, const CertifierConfig& config) {
  check_config(data, k, config, /*needs_subsets=*/true);
  std::vector<double> values;
  for (auto& trial : run_trials(data, k, config)) values.push_back(trial.value);
  return values;
}

double test_statistic(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("test_statistic: empty values");
  return *std::min_element(values.begin(), values.end());
}

double p_value(double B, double T, int ell) {
  if (!(B >= 0.0)) throw std::invalid_argument("p_value: B must be >= 0");
  if (!(T >= 0.0)) throw std::invalid_argument("p_value: T must be >= 0");
  if (ell < 1) throw std::invalid_argument("p_value: ell must be >= 1");
  if (T <= B) return 1.0;
  if (B == 0.0) return 0.0;
  // Repeated multiplication keeps dyadic ratios exact (T = 2B -> 2^-ell).
  const double ratio = B / T;
  double p = 1.0;
  for (int i = 0; i < ell; ++i) p *= ratio;
  return std::min(1.0, std::max(0.0, p));
}

double confidence_lower_bound(double T, int ell, double eta) {
  if (!(T >= 0.0)) throw std::invalid_argument("confidence_lower_bound: T must be >= 0");
  if (ell < 1) throw std::invalid_argument("confidence_lower_bound: ell must be >= 1");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("confidence_lower_bound: eta must be in (0,1)");
  // eta^(1/ell) via exp2/log2 is exact for dyadic eta with ell | log2(eta).
  return T * std::exp2(std::log2(eta) / static_cast<double>(ell));
}

CertificateReport certify(const Dataset& data, int k, const CertifierConfig& config) {
  check_config(data, k, config, /*needs_subsets=*/true);
  return assemble(config, run_trials(data, k, config));
}

CertificateReport certify_baseline(const Dataset& data, int k, const CertifierConfig& config) {
  check_config(data, k, config, /*needs_subsets=*/false);
  if (k > data.n_points())
    throw std::invalid_argument("certify_baseline: k exceeds the number of points");

  Rng master(config.master_seed);
  std::vector<Rng> streams = master.spawn(static_cast<std::size_t>(config.ell));
  std::vector<TrialDiagnostics> trials(static_cast<std::size_t>(config.ell));
  for (int i = 0; i < config.ell; ++i) {
    auto& trial = trials[static_cast<std::size_t>(i)];
    trial.value = baseline_bound_sample(data, k, streams[static_cast<std::size_t>(i)]);
    trial.primal_value = trial.value;
    trial.dual_value = trial.value;
  }
  return assemble(config, std::move(trials));
}

}  // namespace kmcert
