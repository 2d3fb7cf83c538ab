#include "kmcert/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "kmcert/bench.hpp"
#include "kmcert/certifier.hpp"
#include "kmcert/io.hpp"
#include "kmcert/kmeans.hpp"
#include "kmcert/reports.hpp"
#include "kmcert/sdp.hpp"
#include "kmcert/synth.hpp"
#include "kmcert/version.hpp"

namespace kmcert {

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/** Shared flag values; each subcommand registers the subset it supports. */
struct CliState {
  std::string data_path;
  std::string out_path;
  std::string format = "json";
  int k = 2;
  int s = 0;
  int ell = 7;
  double eta = 0.01;
  double B = -1.0;  // >= 0 means FixedB mode was requested
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_iter = 20000;
  int restarts = 1;
  bool scale = false;
  // gen / bench / theorem2 parameters
  int m = 4;
  std::int64_t n = 0;
  double r = 0.0;
  std::vector<std::int64_t> Ns = {10000, 100000, 1000000};
  int reps = 3;
  int trials = 100;
};

Dataset load_dataset(const std::string& path, bool scale) {
  return looks_like_idx(path) ? load_idx(path, scale) : load_csv(path);
}

void emit_text(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open file for writing: " + out_path);
  file << text;
  if (!file) throw std::runtime_error("write failed: " + out_path);
}

void emit_report(const nlohmann::json& report, const std::string& out_path, std::ostream& out) {
  emit_text(report.dump(2) + "\n", out_path, out);
}

nlohmann::json solver_config_json(const CliState& st) {
  return {{"tol", st.tol}, {"max_iter", st.max_iter}};
}

CertifierConfig make_certifier_config(const CliState& st) {
  CertifierConfig config;
  config.s = st.s;
  config.ell = st.ell;
  if (st.B >= 0.0)
    config.mode = FixedB{st.B};
  else
    config.mode = ConfidenceBound{st.eta};
  config.solver_opts = SolverOptions{st.tol, st.max_iter};
  config.master_seed = st.seed;
  return config;
}

int finish_certification(const std::string& command, const CliState& st,
                         nlohmann::json config_echo, const CertificateReport& report,
                         nlohmann::json timings, std::ostream& out) {
  nlohmann::json results = to_json(report);
  bool rejected = true;
  if (std::holds_alternative<FixedB>(report.mode)) {
    rejected = report.p_value <= st.eta;
    results["rejected_at_requested_confidence"] = rejected;
    results["requested_confidence"] = 1.0 - st.eta;
  }
  emit_report(make_run_report(command, std::move(config_echo), std::move(results),
                              std::move(timings)),
              st.out_path, out);
  return rejected ? kExitOk : kExitNoRejection;
}

int run_gen(const CliState& st, std::ostream& out) {
  Timer total;
  const GmmSpec spec = GmmSpec::symmetric_pair(st.m, st.n, st.r);
  Rng rng(st.seed);
  Timer gen_timer;
  const GmmSample sample = sample_gmm(spec, rng);
  const double t_gen = gen_timer.ms();

  if (st.out_path.empty()) {
    write_csv(out, sample.dataset);  // the dataset itself is the output
    return kExitOk;
  }
  Timer write_timer;
  save_csv(st.out_path, sample.dataset);
  const nlohmann::json config{{"m", st.m}, {"N", st.n}, {"r", st.r},
                              {"seed", st.seed}, {"out", st.out_path}};
  const nlohmann::json results{{"n_points", sample.dataset.n_points()},
                               {"dim", sample.dataset.dim()},
                               {"path", st.out_path}};
  emit_report(make_run_report("gen", config,
                              results,
                              {{"generate", t_gen},
                               {"write", write_timer.ms()},
                               {"total", total.ms()}}),
              "", out);
  return kExitOk;
}

int run_cluster(const CliState& st, std::ostream& out) {
  Timer total;
  Timer load_timer;
  const Dataset data = load_dataset(st.data_path, st.scale);
  const double t_load = load_timer.ms();

  Rng rng(st.seed);
  Timer cluster_timer;
  const LloydResult result =
      kmeanspp(data, st.k, rng, st.restarts, LloydOptions{st.max_iter, st.tol});
  const double t_cluster = cluster_timer.ms();

  const nlohmann::json config{{"data", st.data_path}, {"k", st.k},
                              {"restarts", st.restarts}, {"seed", st.seed},
                              {"tol", st.tol}, {"max_iter", st.max_iter},
                              {"scale", st.scale}};
  emit_report(make_run_report("cluster", config, to_json(result),
                              {{"load", t_load}, {"cluster", t_cluster}, {"total", total.ms()}}),
              st.out_path, out);
  return kExitOk;
}

int run_baseline(const CliState& st, std::ostream& out) {
  Timer total;
  Timer load_timer;
  const Dataset data = load_dataset(st.data_path, st.scale);
  const double t_load = load_timer.ms();

  CertifierConfig config = make_certifier_config(st);
  Timer certify_timer;
  const CertificateReport report = certify_baseline(data, st.k, config);
  const double t_certify = certify_timer.ms();

  nlohmann::json config_echo{{"data", st.data_path}, {"k", st.k}, {"ell", st.ell},
                             {"seed", st.seed}, {"scale", st.scale}};
  if (st.B >= 0.0)
    config_echo["B"] = st.B;
  config_echo["eta"] = st.eta;
  return finish_certification("baseline", st, std::move(config_echo), report,
                              {{"load", t_load}, {"certify", t_certify}, {"total", total.ms()}},
                              out);
}

int run_certify(const CliState& st, std::ostream& out) {
  Timer total;
  Timer load_timer;
  const Dataset data = load_dataset(st.data_path, st.scale);
  const double t_load = load_timer.ms();

  CertifierConfig config = make_certifier_config(st);
  Timer certify_timer;
  const CertificateReport report = certify(data, st.k, config);
  const double t_certify = certify_timer.ms();

  nlohmann::json config_echo{{"data", st.data_path}, {"k", st.k}, {"s", st.s},
                             {"ell", st.ell}, {"seed", st.seed},
                             {"solver", solver_config_json(st)}, {"scale", st.scale}};
  if (st.B >= 0.0)
    config_echo["B"] = st.B;
  config_echo["eta"] = st.eta;
  return finish_certification("certify", st, std::move(config_echo), report,
                              {{"load", t_load}, {"certify", t_certify}, {"total", total.ms()}},
                              out);
}

int run_seminorm_check(const CliState& st, std::ostream& out) {
  Timer total;
  Rng rng(st.seed);
  const SolverOptions opts{st.tol, st.max_iter};

  nlohmann::json rows = nlohmann::json::array();
  double max_violation = -1e300;
  for (int trial = 0; trial < st.trials; ++trial) {
    Eigen::MatrixXd M(st.s, st.s);
    for (int i = 0; i < st.s; ++i)
      for (int j = 0; j < st.s; ++j) M(i, j) = rng.next_gaussian();
    M = (0.5 * (M + M.transpose())).eval();

    const SeminormResult f = seminorm_F(M, st.k, opts);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    const double nuclear = es.eigenvalues().cwiseAbs().sum();
    const double spectral = es.eigenvalues().cwiseAbs().maxCoeff();
    const double lemma_bound = std::min(nuclear, static_cast<double>(st.k) * spectral);
    const double violation = f.upper_bound - lemma_bound;
    max_violation = std::max(max_violation, violation);
    rows.push_back({{"trial", trial}, {"value", f.value}, {"upper_bound", f.upper_bound},
                    {"nuclear", nuclear}, {"spectral", spectral},
                    {"lemma_bound", lemma_bound}, {"violation", violation}});
  }

  const nlohmann::json config{{"s", st.s}, {"k", st.k}, {"trials", st.trials},
                              {"seed", st.seed}, {"solver", solver_config_json(st)}};
  const nlohmann::json results{{"rows", std::move(rows)},
                               {"max_violation", max_violation},
                               {"all_within_1e-5", max_violation <= 1e-5}};
  emit_report(make_run_report("seminorm-check", config, results, {{"total", total.ms()}}),
              st.out_path, out);
  return kExitOk;
}

int run_bench(const CliState& st, std::ostream& out) {
  Timer total;
  BenchConfig config;
  config.dim = st.m;
  config.separation = st.r;
  config.Ns = st.Ns;
  config.k = st.k;
  config.s = st.s;
  config.ell = st.ell;
  config.eta = st.eta;
  config.reps = st.reps;
  config.restarts = st.restarts;
  config.solver_opts = SolverOptions{st.tol, st.max_iter};
  config.seed = st.seed;

  const std::vector<BenchRow> rows = bench_runtime(config);

  if (st.format == "csv") {
    emit_text(bench_csv(rows), st.out_path, out);
    return kExitOk;
  }
  const nlohmann::json config_echo{{"dims", st.m}, {"Ns", st.Ns}, {"r", st.r}, {"k", st.k},
                                   {"s", st.s}, {"ell", st.ell}, {"eta", st.eta},
                                   {"reps", st.reps}, {"restarts", st.restarts},
                                   {"seed", st.seed}, {"solver", solver_config_json(st)}};
  emit_report(make_run_report("bench", config_echo, to_json(rows), {{"total", total.ms()}}),
              st.out_path, out);
  return kExitOk;
}

int run_theorem2(const CliState& st, std::ostream& out) {
  Timer total;
  const Theorem2Params params = theorem2_params(st.m);
  if (st.n < params.s)
    throw std::invalid_argument("theorem2: N = " + std::to_string(st.n) +
                                " is smaller than the subsample size s = " +
                                std::to_string(params.s));

  Rng master(st.seed);
  std::vector<Rng> streams = master.spawn(3);

  Timer gen_timer;
  const GmmSample sample = sample_gmm(GmmSpec::symmetric_pair(st.m, st.n, st.r), streams[0]);
  const double t_gen = gen_timer.ms();

  CertifierConfig config;
  config.s = params.s;
  config.ell = params.ell;
  config.mode = FixedB{params.B};
  config.solver_opts = SolverOptions{st.tol, st.max_iter};
  config.master_seed = streams[1].seed();

  Timer certify_timer;
  const CertificateReport report = certify(sample.dataset, params.k, config);
  const double t_certify = certify_timer.ms();

  Timer kpp_timer;
  const LloydResult kpp = kmeanspp(sample.dataset, params.k, streams[2], st.restarts);
  const double t_kpp = kpp_timer.ms();

  const bool rejected = report.p_value <= st.eta;
  const bool within_3b = kpp.value <= 3.0 * params.B;

  nlohmann::json results{{"params",
                          {{"s", params.s}, {"B", params.B}, {"ell", params.ell}, {"k", params.k}}},
                         {"certificate", to_json(report)},
                         {"kmeanspp_value", kpp.value},
                         {"threshold_3B", 3.0 * params.B},
                         {"kmeanspp_within_3B", within_3b},
                         {"rejected_at_requested_confidence", rejected},
                         {"requested_confidence", 1.0 - st.eta},
                         {"certificate_success", rejected && within_3b}};
  const nlohmann::json config_echo{{"m", st.m}, {"N", st.n}, {"r", st.r}, {"seed", st.seed},
                                   {"eta", st.eta}, {"restarts", st.restarts},
                                   {"solver", solver_config_json(st)}};
  emit_report(make_run_report("theorem2", config_echo, std::move(results),
                              {{"generate", t_gen}, {"certify", t_certify},
                               {"kmeanspp", t_kpp}, {"total", total.ms()}}),
              st.out_path, out);
  return rejected ? kExitOk : kExitNoRejection;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliState st;
  CLI::App app{"k-means optimality certification toolkit (version " + std::string(kVersion) + ")"};
  app.require_subcommand(1);

  const auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", st.out_path, "write the output to this path instead of stdout");
  };
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", st.seed, "master seed for all randomness")->capture_default_str();
  };
  const auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--tol", st.tol, "solver residual tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-iter", st.max_iter, "solver iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  const auto add_data = [&](CLI::App* cmd) {
    cmd->add_option("data", st.data_path, "dataset file (CSV, or IDX3 detected by magic)")
        ->required();
    cmd->add_flag("--scale", st.scale, "divide IDX pixel values by 255");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a symmetric two-Gaussian dataset as CSV");
  gen->add_option("--m", st.m, "dimension")->required()->check(CLI::PositiveNumber);
  gen->add_option("--N", st.n, "number of points")->required()->check(CLI::PositiveNumber);
  gen->add_option("--r", st.r, "half-separation along the first axis")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_seed(gen);
  add_out(gen);

  CLI::App* cluster = app.add_subcommand("cluster", "k-means++ clustering");
  add_data(cluster);
  cluster->add_option("--k", st.k, "number of clusters")->required()->check(CLI::PositiveNumber);
  cluster->add_option("--restarts", st.restarts, "independent k-means++ restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster->add_option("--tol", st.tol, "relative-decrease stopping tolerance")
      ->check(CLI::NonNegativeNumber);
  cluster->add_option("--max-iter", st.max_iter, "iteration cap");
  add_seed(cluster);
  add_out(cluster);

  CLI::App* baseline = app.add_subcommand("baseline", "seeding-based lower-bound certificate");
  add_data(baseline);
  baseline->add_option("--k", st.k, "number of clusters")->required()->check(CLI::PositiveNumber);
  baseline->add_option("--ell", st.ell, "number of trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  baseline->add_option("--eta", st.eta, "error budget / requested test level")
      ->capture_default_str();
  baseline->add_option("--B", st.B, "fixed bound to test (switches to the fixed-B mode)")
      ->check(CLI::NonNegativeNumber);
  add_seed(baseline);
  add_out(baseline);

  CLI::App* certify_cmd = app.add_subcommand("certify", "subsample SDP certificate");
  add_data(certify_cmd);
  certify_cmd->add_option("--k", st.k, "number of clusters")
      ->required()
      ->check(CLI::PositiveNumber);
  certify_cmd->add_option("--s", st.s, "subsample size")->required()->check(CLI::PositiveNumber);
  certify_cmd->add_option("--ell", st.ell, "number of trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  certify_cmd->add_option("--eta", st.eta, "error budget / requested test level")
      ->capture_default_str();
  certify_cmd->add_option("--B", st.B, "fixed bound to test (switches to the fixed-B mode)")
      ->check(CLI::NonNegativeNumber);
  add_seed(certify_cmd);
  add_solver(certify_cmd);
  add_out(certify_cmd);

  CLI::App* seminorm = app.add_subcommand("seminorm-check",
                                          "evaluate the feasible-set seminorm on random matrices "
                                          "against its nuclear/spectral bound");
  seminorm->add_option("--s", st.s, "matrix size")->check(CLI::PositiveNumber);
  seminorm->add_option("--k", st.k, "trace parameter")->check(CLI::PositiveNumber)
      ->capture_default_str();
  seminorm->add_option("--trials", st.trials, "number of random matrices")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_seed(seminorm);
  add_solver(seminorm);
  add_out(seminorm);

  CLI::App* bench = app.add_subcommand("bench", "runtime scaling of k-means++ vs the certifier");
  bench->add_option("--dims", st.m, "dimension")->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--Ns", st.Ns, "comma-separated dataset sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--s", st.s, "subsample size")->check(CLI::PositiveNumber);
  bench->add_option("--ell", st.ell, "number of trials")->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--k", st.k, "number of clusters")->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--eta", st.eta, "error budget")->capture_default_str();
  bench->add_option("--r", st.r, "half-separation of the generated mixture");
  bench->add_option("--reps", st.reps, "repetitions per size (median reported)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--restarts", st.restarts, "k-means++ restarts in the timed runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_seed(bench);
  add_solver(bench);
  bench->add_option("--format", st.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  add_out(bench);

  CLI::App* theorem2 = app.add_subcommand(
      "theorem2", "end-to-end two-Gaussian certification with the provable parameter preset");
  theorem2->add_option("--m", st.m, "dimension (>= 2)")->required();
  theorem2->add_option("--N", st.n, "number of points")->required()->check(CLI::PositiveNumber);
  theorem2->add_option("--r", st.r, "half-separation")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  theorem2->add_option("--eta", st.eta, "requested test level")->capture_default_str();
  theorem2->add_option("--restarts", st.restarts, "k-means++ restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_seed(theorem2);
  add_solver(theorem2);
  add_out(theorem2);

  // Per-subcommand defaults that differ from the shared ones.
  st.tol = 1e-6;
  st.max_iter = 20000;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (gen->parsed()) return run_gen(st, out);
    if (cluster->parsed()) {
      // Lloyd defaults when the user did not override them.
      if (cluster->count("--tol") == 0) st.tol = 1e-9;
      if (cluster->count("--max-iter") == 0) st.max_iter = 300;
      return run_cluster(st, out);
    }
    if (baseline->parsed()) return run_baseline(st, out);
    if (certify_cmd->parsed()) return run_certify(st, out);
    if (seminorm->parsed()) {
      if (seminorm->count("--s") == 0) st.s = 8;
      return run_seminorm_check(st, out);
    }
    if (bench->parsed()) {
      if (bench->count("--s") == 0) st.s = 64;
      if (bench->count("--r") == 0) st.r = 3.0;
      if (bench->count("--format") == 0) st.format = "csv";
      return run_bench(st, out);
    }
    if (theorem2->parsed()) return run_theorem2(st, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  err << "error: no subcommand\n";
  return kExitInputError;
}

}  // namespace kmcert
