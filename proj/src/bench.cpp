#include "kmcert/bench.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "kmcert/synth.hpp"

namespace kmcert {

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::vector<BenchRow> bench_runtime(const BenchConfig& config) {
  if (config.Ns.empty()) throw std::invalid_argument("bench_runtime: need at least one N");
  if (config.reps < 1) throw std::invalid_argument("bench_runtime: reps must be >= 1");

  Rng master(config.seed);
  std::vector<Rng> size_streams = master.spawn(config.Ns.size());

  std::vector<BenchRow> rows;
  rows.reserve(config.Ns.size());
  for (std::size_t i = 0; i < config.Ns.size(); ++i) {
    const std::int64_t n = config.Ns[i];
    const GmmSpec spec = GmmSpec::symmetric_pair(config.dim, n, config.separation);
    std::vector<Rng> streams = size_streams[i].spawn(1 + 2 * static_cast<std::size_t>(config.reps));
    const GmmSample sample = sample_gmm(spec, streams[0]);

    std::vector<double> t_kpp, t_cert;
    BenchRow row;
    row.n = n;
    for (int rep = 0; rep < config.reps; ++rep) {
      Rng& kpp_rng = streams[1 + static_cast<std::size_t>(rep)];
      const auto start = std::chrono::steady_clock::now();
      const LloydResult res =
          kmeanspp(sample.dataset, config.k, kpp_rng, config.restarts, config.lloyd_opts);
      t_kpp.push_back(elapsed_ms(start));
      (void)res;
    }
    for (int rep = 0; rep < config.reps; ++rep) {
      CertifierConfig cert;
      cert.s = config.s;
      cert.ell = config.ell;
      cert.mode = ConfidenceBound{config.eta};
      cert.solver_opts = config.solver_opts;
      cert.master_seed = streams[1 + static_cast<std::size_t>(config.reps) +
                                 static_cast<std::size_t>(rep)]
                             .seed();
      const auto start = std::chrono::steady_clock::now();
      const CertificateReport report = certify(sample.dataset, config.k, cert);
      t_cert.push_back(elapsed_ms(start));
      if (rep == 0) {
        row.bound = report.bound;
        row.confidence = report.confidence;
      }
    }
    row.t_kmeanspp_ms = median(std::move(t_kpp));
    row.t_certify_ms = median(std::move(t_cert));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace kmcert
