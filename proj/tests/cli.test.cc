#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "kmcert/cli.hpp"

using namespace kmcert;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

json parse_report(const CliResult& result) {
  REQUIRE(!result.out.empty());
  return json::parse(result.out);
}

/** Scratch path under the system temp directory, removed on destruction. */
class TempPath {
 public:
  explicit TempPath(const std::string& name)
      : path_((std::filesystem::temp_directory_path() / ("kmcert_cli_" + name)).string()) {}
  ~TempPath() { std::filesystem::remove(path_); }
  const std::string& str() const { return path_; }

 private:
  std::string path_;
};

/** The 4-point line whose k = 2 optimum is 0.25, as a CSV fixture. */
void write_tight_csv(const std::string& path) {
  std::ofstream out(path);
  out << "0\n1\n10\n11\n";
}

}  // namespace

TEST_CASE("gen writes a dataset file and reports the run") {
  TempPath csv("gen.csv");
  const CliResult result =
      run({"gen", "--m", "2", "--N", "20", "--r", "1", "--seed", "1", "--out", csv.str()});
  CHECK(result.exit_code == kExitOk);
  const json report = parse_report(result);
  CHECK(report["command"] == "gen");
  CHECK(report["results"]["n_points"] == 20);
  CHECK(report["results"]["dim"] == 2);
  CHECK(report.contains("version"));
  CHECK(report.contains("timings_ms"));

  std::ifstream in(csv.str());
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 20);
}

TEST_CASE("gen without --out streams the CSV itself") {
  const CliResult result = run({"gen", "--m", "3", "--N", "5", "--seed", "2"});
  CHECK(result.exit_code == kExitOk);
  int rows = 0;
  std::istringstream in(result.out);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("cluster reports the refined partition value") {
  TempPath csv("cluster.csv");
  write_tight_csv(csv.str());
  const CliResult result = run({"cluster", csv.str(), "--k", "2", "--seed", "1"});
  CHECK(result.exit_code == kExitOk);
  const json report = parse_report(result);
  CHECK(report["command"] == "cluster");
  CHECK(report["config"]["k"] == 2);
  CHECK(report["results"]["converged"] == true);
  CHECK(report["results"]["value"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(report["results"]["labels"].size() == 4);
}

TEST_CASE("certify emits the confidence-mode report and exits cleanly") {
  TempPath csv("certify.csv");
  write_tight_csv(csv.str());
  const CliResult result = run({"certify", csv.str(), "--k", "2", "--s", "4", "--ell", "3",
                                "--eta", "0.01", "--seed", "1"});
  CHECK(result.exit_code == kExitOk);
  const json report = parse_report(result);
  CHECK(report["command"] == "certify");
  CHECK(report["results"]["trials"].size() == 3);
  CHECK(report["results"]["mode"]["name"] == "ConfidenceBound");
  CHECK(report["results"]["bound"].get<double>() > 0.0);
  CHECK(report["results"]["confidence"].get<double>() == 0.99);
}

TEST_CASE("certify in fixed-B mode rejects a bound far below the statistic") {
  TempPath csv("reject.csv");
  write_tight_csv(csv.str());
  const CliResult result = run({"certify", csv.str(), "--k", "2", "--s", "4", "--ell", "3",
                                "--B", "0.05", "--seed", "1"});
  CHECK(result.exit_code == kExitOk);  // p = (0.05/0.25)^3 = 0.008 <= eta
  const json report = parse_report(result);
  CHECK(report["results"]["rejected_at_requested_confidence"] == true);
  CHECK(report["results"]["mode"]["name"] == "FixedB");
  CHECK(report["results"]["p_value"].get<double>() <= 0.01);
}

TEST_CASE("certify in fixed-B mode signals no rejection through the exit code") {
  TempPath csv("noreject.csv");
  write_tight_csv(csv.str());
  const CliResult result = run({"certify", csv.str(), "--k", "2", "--s", "4", "--ell", "3",
                                "--B", "1000", "--seed", "1"});
  CHECK(result.exit_code == kExitNoRejection);
  const json report = parse_report(result);
  CHECK(report["results"]["rejected_at_requested_confidence"] == false);
  CHECK(report["results"]["p_value"] == 1.0);
}

TEST_CASE("baseline mirrors the certify modes") {
  TempPath csv("baseline.csv");
  write_tight_csv(csv.str());
  const CliResult ok = run({"baseline", csv.str(), "--k", "2", "--seed", "1"});
  CHECK(ok.exit_code == kExitOk);
  const json report = parse_report(ok);
  CHECK(report["command"] == "baseline");
  CHECK(report["results"]["bound"].get<double>() >= 0.0);

  const CliResult no = run({"baseline", csv.str(), "--k", "2", "--B", "1e6", "--seed", "1"});
  CHECK(no.exit_code == kExitNoRejection);
}

TEST_CASE("seminorm-check verifies the norm bound on random matrices") {
  const CliResult result = run({"seminorm-check", "--s", "5", "--k", "2", "--trials", "2",
                                "--seed", "3", "--tol", "1e-7"});
  CHECK(result.exit_code == kExitOk);
  const json report = parse_report(result);
  CHECK(report["results"]["rows"].size() == 2);
  CHECK(report["results"]["all_within_1e-5"] == true);
}

TEST_CASE("bench emits one CSV row per dataset size") {
  const CliResult result = run({"bench", "--dims", "2", "--Ns", "100,200", "--s", "6", "--ell",
                                "2", "--reps", "1", "--seed", "1", "--tol", "1e-4",
                                "--max-iter", "2000"});
  CHECK(result.exit_code == kExitOk);
  std::istringstream in(result.out);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "N,t_kmeanspp_ms,t_certify_ms,bound,confidence");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("bench in JSON mode echoes the configuration") {
  const CliResult result = run({"bench", "--dims", "2", "--Ns", "100", "--s", "6", "--ell", "2",
                                "--reps", "1", "--seed", "1", "--tol", "1e-4", "--max-iter",
                                "2000", "--format", "json"});
  CHECK(result.exit_code == kExitOk);
  const json report = parse_report(result);
  CHECK(report["command"] == "bench");
  CHECK(report["results"].size() == 1);
  CHECK(report["results"][0]["N"] == 100);
}

TEST_CASE("theorem2 runs the parameter preset end to end") {
  // m = 2 gives s = 2 = k, whose relaxation value is always zero, so the
  // fixed-B test can never reject: the plumbing must still report cleanly.
  const CliResult result = run({"theorem2", "--m", "2", "--N", "24", "--seed", "4"});
  CHECK(result.exit_code == kExitNoRejection);
  const json report = parse_report(result);
  CHECK(report["results"]["params"]["s"] == 2);
  CHECK(report["results"]["params"]["ell"] == 7);
  CHECK(report["results"]["params"]["k"] == 2);
  CHECK(report["results"]["certificate_success"] == false);
  CHECK(report["results"]["certificate"]["trials"].size() == 7);
}

TEST_CASE("identical seeds reproduce the results subtree bit for bit") {
  TempPath csv("repro.csv");
  write_tight_csv(csv.str());
  const std::vector<std::string> args{"certify", csv.str(), "--k", "2", "--s", "3",
                                      "--ell", "4", "--seed", "31"};
  const json first = parse_report(run(args))["results"];
  const json second = parse_report(run(args))["results"];
  CHECK(first.dump() == second.dump());
}

TEST_CASE("usage errors exit with the input-error code") {
  CHECK(run({"certify", "--bogus"}).exit_code == kExitInputError);
  CHECK(run({"frobnicate"}).exit_code == kExitInputError);
  CHECK(run({}).exit_code == kExitInputError);
  CHECK(run({"gen", "--m", "2"}).exit_code == kExitInputError);            // --N missing
  CHECK(run({"gen", "--m", "0", "--N", "5"}).exit_code == kExitInputError);  // bad value
}

TEST_CASE("a missing dataset file is reported as an input error") {
  const CliResult result = run({"cluster", "/nonexistent/kmcert/data.csv", "--k", "2"});
  CHECK(result.exit_code == kExitInputError);
  CHECK(result.err.find("cannot open") != std::string::npos);
}

TEST_CASE("an unwritable output path is reported as an input error") {
  const CliResult result =
      run({"gen", "--m", "2", "--N", "5", "--out", "/nonexistent/kmcert/out.csv"});
  CHECK(result.exit_code == kExitInputError);
}

TEST_CASE("help requests succeed") {
  CHECK(run({"--help"}).exit_code == kExitOk);
  CHECK(run({"certify", "--help"}).exit_code == kExitOk);
}
