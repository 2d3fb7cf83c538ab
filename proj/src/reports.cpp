#include "kmcert/reports.hpp"

#include <sstream>

#include "kmcert/version.hpp"

namespace kmcert {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved: return "Solved";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::InfeasibleInput: return "InfeasibleInput";
  }
  return "Unknown";
}

nlohmann::json to_json(const LloydResult& result) {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(result.partition.k), 0);
  for (int label : result.partition.labels) ++sizes[static_cast<std::size_t>(label)];
  return nlohmann::json{{"value", result.value},
                        {"iterations", result.iterations},
                        {"converged", result.converged},
                        {"k", result.partition.k},
                        {"cluster_sizes", sizes},
                        {"labels", result.partition.labels},
                        {"value_history", result.value_history}};
}

nlohmann::json to_json(const CertificateReport& report) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& trial : report.trials) {
    trials.push_back({{"subset", trial.subset},
                      {"value", trial.value},
                      {"primal_value", trial.primal_value},
                      {"dual_value", trial.dual_value},
                      {"psd_margin", trial.psd_margin},
                      {"iterations", trial.iterations},
                      {"status", to_string(trial.status)}});
  }

  nlohmann::json out{{"values", report.values},
                     {"t_stat", report.t_stat},
                     {"bound", report.bound},
                     {"confidence", report.confidence},
                     {"trials", std::move(trials)}};
  if (const auto* fixed = std::get_if<FixedB>(&report.mode)) {
    out["mode"] = {{"name", "FixedB"}, {"B", fixed->B}};
    out["p_value"] = report.p_value;
  } else {
    const double eta = std::get<ConfidenceBound>(report.mode).eta;
    out["mode"] = {{"name", "ConfidenceBound"}, {"eta", eta}};
  }
  return out;
}

nlohmann::json to_json(const std::vector<BenchRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows)
    out.push_back({{"N", row.n},
                   {"t_kmeanspp_ms", row.t_kmeanspp_ms},
                   {"t_certify_ms", row.t_certify_ms},
                   {"bound", row.bound},
                   {"confidence", row.confidence}});
  return out;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "N,t_kmeanspp_ms,t_certify_ms,bound,confidence\n";
  out.precision(17);
  for (const auto& row : rows)
    out << row.n << ',' << row.t_kmeanspp_ms << ',' << row.t_certify_ms << ',' << row.bound << ','
        << row.confidence << '\n';
  return std::move(out).str();
}

nlohmann::json make_run_report(const std::string& command, nlohmann::json config,
                               nlohmann::json results, nlohmann::json timings_ms) {
  return nlohmann::json{{"command", command},
                        {"config", std::move(config)},
                        {"results", std::move(results)},
                        {"timings_ms", std::move(timings_ms)},
                        {"version", kVersion}};
}

}  // namespace kmcert
