#pragma once

#include <cstdint>
#include <vector>

#include "kmcert/certifier.hpp"
#include "kmcert/kmeans.hpp"

namespace kmcert {

struct BenchConfig {
  int dim = 4;
  double separation = 3.0;
  std::vector<std::int64_t> Ns;
  int k = 2;
  int s = 64;
  int ell = 7;
  double eta = 0.01;
  int reps = 3;      // repetitions per size; the median time is reported
  int restarts = 1;  // k-means++ restarts in the timed runs
  SolverOptions solver_opts;
  LloydOptions lloyd_opts;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::int64_t n = 0;
  double t_kmeanspp_ms = 0.0;  // median wall time of a full k-means++ run
  double t_certify_ms = 0.0;   // median wall time of a full certification run
  double bound = 0.0;          // confidence lower bound from the first certification
  double confidence = 0.0;
};

/**
 * For each N: draw a symmetric two-Gaussian dataset, then time k-means++
 * and the subsample certifier end-to-end (reps repetitions each, median
 * reported). The certifier's work depends on (s, ell), not N, apart from
 * the O(s) sampling step.
 */
std::vector<BenchRow> bench_runtime(const BenchConfig& config);

}  // namespace kmcert
