#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "kmcert/rng.hpp"

namespace kmcert {

/**
 * An ordered, immutable collection of N points in R^m (rows are points).
 * Indices are stable: index i always refers to the same row. All
 * coordinates must be finite.
 */
class Dataset {
 public:
  explicit Dataset(Eigen::MatrixXd points);

  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::Index n_points() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  Eigen::MatrixXd::ConstRowXpr row(Eigen::Index i) const { return points_.row(i); }

 private:
  Eigen::MatrixXd points_;
};

/**
 * Assignment of each point to one of k clusters. Labels are 0-based
 * (values in [0, k)); clusters may be empty and contribute zero to the
 * objective.
 */
struct Partition {
  std::vector<int> labels;
  int k = 0;
};

/** s x s matrix of pairwise squared Euclidean distances (symmetric, zero diagonal). */
struct DistanceMatrix {
  Eigen::MatrixXd d2;
  Eigen::Index size() const { return d2.rows(); }
};

struct BruteForceResult {
  Partition partition;
  double value = 0.0;
};

struct SubsampleResult {
  Dataset data;
  std::vector<int> indices;  // sorted, distinct, into the parent dataset
};

/** Largest N accepted by brute_force_kmeans (Bell-number growth beyond this). */
inline constexpr int kBruteForceMaxPoints = 12;

/**
 * Mean squared distance of each point to its cluster centroid:
 * (1/N) * sum_t sum_{i in C_t} ||x_i - centroid(C_t)||^2.
 * Empty clusters contribute zero.
 */
double kmeans_objective(const Dataset& data, const Partition& part);

/**
 * Pairwise squared distances among the selected rows, via the Gram trick
 * with a clamp-to-zero guard against negative rounding artifacts.
 * The result is exactly symmetric with an exactly zero diagonal.
 */
DistanceMatrix squared_distance_matrix(const Dataset& data, const std::vector<int>& indices);

/**
 * Exact k-means optimum by enumerating all partitions of [N] into at most
 * k nonempty parts. Refuses N > kBruteForceMaxPoints.
 */
BruteForceResult brute_force_kmeans(const Dataset& data, int k);

/**
 * s distinct indices chosen uniformly at random without replacement
 * (every s-subset equally likely), plus the induced sub-dataset.
 * Runs in O(s) work independent of N.
 */
SubsampleResult subsample(const Dataset& data, int s, Rng& rng);

/** Dataset restricted to the given rows (order preserved). */
Dataset select_rows(const Dataset& data, const std::vector<int>& indices);

}  // namespace kmcert
