#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kmcert/bench.hpp"
#include "kmcert/certifier.hpp"
#include "kmcert/kmeans.hpp"
#include "kmcert/sdp.hpp"

namespace kmcert {

/** Field-stable JSON views of result types (documented in the README). */
nlohmann::json to_json(const LloydResult& result);
nlohmann::json to_json(const CertificateReport& report);
nlohmann::json to_json(const std::vector<BenchRow>& rows);

std::string to_string(SolveStatus status);

/** Bench rows as CSV text with a header row. */
std::string bench_csv(const std::vector<BenchRow>& rows);

/**
 * The self-describing run report every subcommand emits:
 * {command, config, results, timings_ms, version}. Re-running with the
 * echoed config reproduces `results` bit-for-bit (timings aside).
 */
nlohmann::json make_run_report(const std::string& command, nlohmann::json config,
                               nlohmann::json results, nlohmann::json timings_ms);

}  // namespace kmcert
