#include "kmcert/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kmcert {

namespace {

/** Nearest-center labels, ties broken by lowest center index. */
std::vector<int> assign_to_centers(const Dataset& data, const Eigen::MatrixXd& centers) {
  const Eigen::Index n = data.n_points();
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = (data.row(i) - centers.row(0)).squaredNorm();
    int arg = 0;
    for (Eigen::Index t = 1; t < centers.rows(); ++t) {
      const double d = (data.row(i) - centers.row(t)).squaredNorm();
      if (d < best) {
        best = d;
        arg = static_cast<int>(t);
      }
    }
    labels[static_cast<std::size_t>(i)] = arg;
  }
  return labels;
}

}  // namespace

KppSeedResult dsquared_seed(const Dataset& data, int k, Rng& rng) {
  const Eigen::Index n = data.n_points();
  if (k < 1 || k > n)
    throw std::invalid_argument("dsquared_seed: k = " + std::to_string(k) +
                                " out of range [1," + std::to_string(n) + "]");

  std::vector<int> centers;
  centers.reserve(static_cast<std::size_t>(k));
  std::vector<char> is_center(static_cast<std::size_t>(n), 0);

  const int first = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
  centers.push_back(first);
  is_center[static_cast<std::size_t>(first)] = 1;

  Eigen::VectorXd best_d2(n);
  std::vector<int> best_center(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i)
    best_d2(i) = (data.row(i) - data.row(first)).squaredNorm();

  for (int t = 1; t < k; ++t) {
    const double total = best_d2.sum();
    int next = -1;
    if (total > 0.0) {
      // Draw proportionally to squared distance; already-chosen points have
      // weight exactly zero and cannot be re-drawn.
      const double u = rng.next_double() * total;
      double cum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += best_d2(i);
        if (u < cum) {
          next = static_cast<int>(i);
          break;
        }
      }
      if (next < 0) {  // rounding pushed u past the last positive weight
        for (Eigen::Index i = n - 1; i >= 0; --i)
          if (best_d2(i) > 0.0) {
            next = static_cast<int>(i);
            break;
          }
      }
    }
    if (next < 0) {
      // All remaining points coincide with chosen centers; take the lowest
      // unchosen index so the centers stay distinct.
      for (Eigen::Index i = 0; i < n; ++i)
        if (!is_center[static_cast<std::size_t>(i)]) {
          next = static_cast<int>(i);
          break;
        }
    }
    centers.push_back(next);
    is_center[static_cast<std::size_t>(next)] = 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = (data.row(i) - data.row(next)).squaredNorm();
      if (d < best_d2(i)) {
        best_d2(i) = d;
        best_center[static_cast<std::size_t>(i)] = t;
      }
    }
  }

  KppSeedResult result;
  result.center_indices = std::move(centers);
  result.seed_partition = Partition{std::move(best_center), k};
  result.W = best_d2.sum() / static_cast<double>(n);
  return result;
}

LloydResult lloyd(const Dataset& data, const Eigen::MatrixXd& initial_centers,
                  const LloydOptions& opts) {
  const Eigen::Index n = data.n_points();
  const int k = static_cast<int>(initial_centers.rows());
  if (k < 1) throw std::invalid_argument("lloyd: need at least one center");
  if (initial_centers.cols() != data.dim())
    throw std::invalid_argument("lloyd: center dimension " +
                                std::to_string(initial_centers.cols()) + " != data dimension " +
                                std::to_string(data.dim()));
  if (!initial_centers.allFinite())
    throw std::invalid_argument("lloyd: centers must be finite");
  if (opts.max_iter < 1) throw std::invalid_argument("lloyd: max_iter must be >= 1");
  if (opts.tol < 0.0) throw std::invalid_argument("lloyd: tol must be >= 0");

  Eigen::MatrixXd centers = initial_centers;
  std::vector<int> labels = assign_to_centers(data, centers);
  double value = kmeans_objective(data, Partition{labels, k});

  LloydResult result;
  result.value_history.push_back(value);

  for (int it = 1; it <= opts.max_iter; ++it) {
    // Centroid step with empty-cluster repair: an emptied cluster is
    // re-seeded with the point farthest from its assigned centroid (taken
    // from clusters that can spare one).
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, data.dim());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += data.row(i);
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (int t = 0; t < k; ++t) {
      if (counts[static_cast<std::size_t>(t)] > 0) continue;
      Eigen::Index farthest = -1;
      double far_d2 = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int ci = labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(ci)] < 2) continue;
        const Eigen::VectorXd centroid =
            sums.row(ci) / static_cast<double>(counts[static_cast<std::size_t>(ci)]);
        const double d = (data.row(i).transpose() - centroid).squaredNorm();
        if (d > far_d2) {
          far_d2 = d;
          farthest = i;
        }
      }
      if (farthest < 0) continue;  // nothing to donate; cluster stays empty
      const int from = labels[static_cast<std::size_t>(farthest)];
      sums.row(from) -= data.row(farthest);
      --counts[static_cast<std::size_t>(from)];
      sums.row(t) += data.row(farthest);
      ++counts[static_cast<std::size_t>(t)];
      labels[static_cast<std::size_t>(farthest)] = t;
    }
    for (int t = 0; t < k; ++t)
      if (counts[static_cast<std::size_t>(t)] > 0)
        centers.row(t) = sums.row(t) / static_cast<double>(counts[static_cast<std::size_t>(t)]);

    std::vector<int> new_labels = assign_to_centers(data, centers);
    const double new_value = kmeans_objective(data, Partition{new_labels, k});
    result.value_history.push_back(new_value);
    result.iterations = it;

    const bool fixpoint = (new_labels == labels);
    const bool small_decrease = (value - new_value) <= opts.tol * value;
    labels = std::move(new_labels);
    value = new_value;
    if (fixpoint || small_decrease) {
      result.converged = true;
      break;
    }
  }

  result.partition = Partition{std::move(labels), k};
  result.value = value;
  return result;
}

LloydResult kmeanspp(const Dataset& data, int k, Rng& rng, int restarts,
                     const LloydOptions& opts) {
  if (restarts < 1) throw std::invalid_argument("kmeanspp: restarts must be >= 1");

  std::vector<Rng> streams = rng.spawn(static_cast<std::size_t>(restarts));
  LloydResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    const KppSeedResult seed = dsquared_seed(data, k, streams[static_cast<std::size_t>(r)]);
    Eigen::MatrixXd centers(k, data.dim());
    for (int t = 0; t < k; ++t)
      centers.row(t) = data.row(seed.center_indices[static_cast<std::size_t>(t)]);
    LloydResult run = lloyd(data, centers, opts);
    if (run.value < best.value) best = std::move(run);
  }
  return best;
}

double baseline_bound_sample(const Dataset& data, int k, Rng& rng) {
  const KppSeedResult seed = dsquared_seed(data, k, rng);
  return seed.W / (8.0 * (std::log(static_cast<double>(k)) + 2.0));
}

}  // namespace kmcert
