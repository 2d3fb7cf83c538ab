#include "kmcert/core.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace kmcert {

Dataset::Dataset(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1)
    throw std::invalid_argument("Dataset: need at least one point and one dimension");
  if (!points_.allFinite())
    throw std::invalid_argument("Dataset: coordinates must be finite");
}

double kmeans_objective(const Dataset& data, const Partition& part) {
  const Eigen::Index n = data.n_points();
  const Eigen::Index m = data.dim();
  if (static_cast<Eigen::Index>(part.labels.size()) != n)
    throw std::invalid_argument("kmeans_objective: labels length " +
                                std::to_string(part.labels.size()) + " != n_points " +
                                std::to_string(n));
  if (part.k < 1) throw std::invalid_argument("kmeans_objective: k must be positive");
  for (int label : part.labels)
    if (label < 0 || label >= part.k)
      throw std::invalid_argument("kmeans_objective: label " + std::to_string(label) +
                                  " out of range [0," + std::to_string(part.k) + ")");

  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(part.k, m);
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(part.k), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    sums.row(part.labels[static_cast<std::size_t>(i)]) += data.row(i);
    ++counts[static_cast<std::size_t>(part.labels[static_cast<std::size_t>(i)])];
  }
  Eigen::MatrixXd centroids = sums;
  for (int t = 0; t < part.k; ++t)
    if (counts[static_cast<std::size_t>(t)] > 0)
      centroids.row(t) /= static_cast<double>(counts[static_cast<std::size_t>(t)]);

  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    total += (data.row(i) - centroids.row(part.labels[static_cast<std::size_t>(i)])).squaredNorm();
  return total / static_cast<double>(n);
}

DistanceMatrix squared_distance_matrix(const Dataset& data, const std::vector<int>& indices) {
  if (indices.empty()) throw std::invalid_argument("squared_distance_matrix: empty index set");
  for (int idx : indices)
    if (idx < 0 || idx >= data.n_points())
      throw std::invalid_argument("squared_distance_matrix: index " + std::to_string(idx) +
                                  " out of range [0," + std::to_string(data.n_points()) + ")");

  const Eigen::Index s = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd subset(s, data.dim());
  for (Eigen::Index i = 0; i < s; ++i)
    subset.row(i) = data.row(indices[static_cast<std::size_t>(i)]);

  const Eigen::VectorXd sq = subset.rowwise().squaredNorm();
  const Eigen::MatrixXd gram = subset * subset.transpose();

  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = i + 1; j < s; ++j) {
      const double v = std::max(0.0, sq(i) + sq(j) - 2.0 * gram(i, j));
      d2(i, j) = v;
      d2(j, i) = v;
    }
  }
  return DistanceMatrix{std::move(d2)};
}

namespace {

// Depth-first enumeration of partitions in restricted-growth form: point i
// may join any cluster already in use or open one new cluster (up to k).
// Cluster sums-of-squares only grow as points are added, so partial sums
// prune the search.
struct BruteForceSearch {
  const Dataset& data;
  int k;
  std::vector<int> labels;
  Eigen::MatrixXd sums;          // per-cluster coordinate sums
  std::vector<double> sumsq;     // per-cluster sums of squared norms
  std::vector<Eigen::Index> counts;
  double partial = 0.0;          // sum over used clusters of (sumsq - ||sum||^2/count)
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;

  BruteForceSearch(const Dataset& d, int k_in)
      : data(d),
        k(k_in),
        labels(static_cast<std::size_t>(d.n_points()), 0),
        sums(Eigen::MatrixXd::Zero(k_in, d.dim())),
        sumsq(static_cast<std::size_t>(k_in), 0.0),
        counts(static_cast<std::size_t>(k_in), 0) {}

  double cluster_cost(int t) const {
    const auto st = static_cast<std::size_t>(t);
    if (counts[st] == 0) return 0.0;
    return sumsq[st] - sums.row(t).squaredNorm() / static_cast<double>(counts[st]);
  }

  void recurse(Eigen::Index i, int used) {
    if (partial >= best) return;
    if (i == data.n_points()) {
      best = partial;
      best_labels = labels;
      return;
    }
    const int limit = std::min(used + 1, k);
    const double point_sq = data.row(i).squaredNorm();
    for (int t = 0; t < limit; ++t) {
      const auto st = static_cast<std::size_t>(t);
      const double old_cost = cluster_cost(t);
      sums.row(t) += data.row(i);
      sumsq[st] += point_sq;
      ++counts[st];
      const double delta = cluster_cost(t) - old_cost;
      partial += delta;
      labels[static_cast<std::size_t>(i)] = t;
      recurse(i + 1, std::max(used, t + 1));
      partial -= delta;
      --counts[st];
      sumsq[st] -= point_sq;
      sums.row(t) -= data.row(i);
    }
  }
};

}  // namespace

BruteForceResult brute_force_kmeans(const Dataset& data, int k) {
  const Eigen::Index n = data.n_points();
  if (k < 1) throw std::invalid_argument("brute_force_kmeans: k must be positive");
  if (n > kBruteForceMaxPoints)
    throw std::invalid_argument("brute_force_kmeans: refusing n_points = " + std::to_string(n) +
                                " (cap is " + std::to_string(kBruteForceMaxPoints) +
                                "; partition count grows as a Bell number)");

  if (k >= n) {
    // Singletons are optimal: every cluster cost is zero.
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i);
    return BruteForceResult{Partition{std::move(labels), k}, 0.0};
  }

  BruteForceSearch search(data, k);
  search.recurse(0, 0);
  return BruteForceResult{Partition{std::move(search.best_labels), k},
                          std::max(0.0, search.best) / static_cast<double>(n)};
}

SubsampleResult subsample(const Dataset& data, int s, Rng& rng) {
  const Eigen::Index n = data.n_points();
  if (s < 1 || s > n)
    throw std::invalid_argument("subsample: s = " + std::to_string(s) +
                                " out of range [1," + std::to_string(n) + "]");

  // Floyd's algorithm: O(s) draws, every s-subset equally likely.
  std::unordered_set<int> chosen;
  chosen.reserve(static_cast<std::size_t>(s) * 2);
  for (Eigen::Index j = n - s; j < n; ++j) {
    const int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
    if (!chosen.insert(t).second) chosen.insert(static_cast<int>(j));
  }

  std::vector<int> indices(chosen.begin(), chosen.end());
  std::sort(indices.begin(), indices.end());
  return SubsampleResult{select_rows(data, indices), std::move(indices)};
}

Dataset select_rows(const Dataset& data, const std::vector<int>& indices) {
  if (indices.empty()) throw std::invalid_argument("select_rows: empty index set");
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(indices.size()), data.dim());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= data.n_points())
      throw std::invalid_argument("select_rows: index " + std::to_string(indices[i]) +
                                  " out of range");
    rows.row(static_cast<Eigen::Index>(i)) = data.row(indices[i]);
  }
  return Dataset(std::move(rows));
}

}  // namespace kmcert
