#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kmcert/core.hpp"
#include "kmcert/rng.hpp"

namespace kmcert {

/**
 * Result of D^2-sampling (k-means++ seeding). W is the seeding potential:
 * the mean squared distance of each point to its nearest chosen center
 * point (centers are dataset points, not centroids). The partition assigns
 * each point to its nearest center, ties broken by lowest center index.
 */
struct KppSeedResult {
  std::vector<int> center_indices;
  Partition seed_partition;
  double W = 0.0;
};

struct LloydOptions {
  int max_iter = 300;
  double tol = 1e-9;  // relative decrease threshold
};

struct LloydResult {
  Partition partition;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> value_history;  // objective after each assignment step
};

/**
 * k-means++ seeding: first center uniform, each subsequent center drawn
 * with probability proportional to squared distance to the nearest chosen
 * center. Deterministic given the rng state.
 */
KppSeedResult dsquared_seed(const Dataset& data, int k, Rng& rng);

/**
 * Lloyd's algorithm from explicit initial centers: alternate nearest-center
 * assignment and centroid update until the value decreases by less than
 * tol (relative) or max_iter is reached. A cluster emptied by an assignment
 * step is re-seeded with the point farthest from its assigned centroid.
 * The per-iteration value sequence is nonincreasing.
 */
LloydResult lloyd(const Dataset& data, const Eigen::MatrixXd& initial_centers,
                  const LloydOptions& opts = {});

/**
 * dsquared_seed + lloyd, `restarts` times with independently derived rng
 * streams; returns the best (lowest-value) run, earliest run on ties.
 */
LloydResult kmeanspp(const Dataset& data, int k, Rng& rng, int restarts = 1,
                     const LloydOptions& opts = {});

/**
 * One realization of the seeding-based lower-bound variable:
 * V = W / (8 (ln k + 2)) with W the seeding potential from dsquared_seed.
 * E[V] is at most the optimal k-means value.
 */
double baseline_bound_sample(const Dataset& data, int k, Rng& rng);

}  // namespace kmcert
