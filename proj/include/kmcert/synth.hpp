#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "kmcert/core.hpp"
#include "kmcert/rng.hpp"

namespace kmcert {

struct GmmComponent {
  double weight = 0.0;
  Eigen::VectorXd mean;
};

/**
 * A finite Gaussian mixture with identity covariance. The symmetric
 * two-component family (means +r e1 and -r e1, equal weights) is the one
 * the distance-matrix decomposition supports.
 */
struct GmmSpec {
  int dim = 0;
  std::int64_t n_points = 0;
  std::vector<GmmComponent> components;

  /** Equal-weight pair centered at +r e1 and -r e1. */
  static GmmSpec symmetric_pair(int dim, std::int64_t n, double r);

  /** True iff this is an equal-weight two-component spec with means exactly +/- r e1. */
  bool is_symmetric_pair(double* r_out = nullptr) const;

  void validate() const;
};

/** A drawn sample; the noise rows g_i are retained for decomposition checks. */
struct GmmSample {
  Dataset dataset;
  std::vector<int> labels;  // true component per point
  Eigen::MatrixXd noise;    // N x m, row i is g_i with points[i] = mean(label[i]) + g_i
  GmmSpec spec;
};

/**
 * Structured form of the subset distance matrix for symmetric two-Gaussian
 * samples: D = mu 1' + 1 mu' - 2 (y y' + G' (I - v v') G) with v = e1,
 * mu_i = ||x_i||^2, y_i = <x_i, v>, and G the m x s matrix of noise columns.
 */
struct DistanceDecomposition {
  Eigen::VectorXd mu;
  Eigen::VectorXd y;
  Eigen::MatrixXd G;                 // m x s, column j is the noise of subset point j
  double reconstruction_error = 0.0; // max-abs deviation between D and the structured form
};

/** Parameters that make the two-Gaussian certification experiment provable. */
struct Theorem2Params {
  int s = 0;       // ceil(m ln m)
  double B = 0.0;  // (m + 3) / 3
  int ell = 7;
  int k = 2;
};

/**
 * Draw n_points independently: pick a component by weight, add standard
 * Gaussian noise per coordinate. Deterministic given the rng state.
 */
GmmSample sample_gmm(const GmmSpec& spec, Rng& rng);

/**
 * Evaluate the structured form of the subset distance matrix and report the
 * reconstruction error. Requires a symmetric two-component sample.
 */
DistanceDecomposition decompose_distance_matrix(const GmmSample& sample,
                                                const std::vector<int>& subset);

/** s = ceil(m ln m), B = (m+3)/3, ell = 7, k = 2; requires m >= 2. */
Theorem2Params theorem2_params(int m);

}  // namespace kmcert
