#include "kmcert/synth.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kmcert {

GmmSpec GmmSpec::symmetric_pair(int dim, std::int64_t n, double r) {
  if (dim < 1) throw std::invalid_argument("symmetric_pair: dim must be >= 1");
  if (n < 1) throw std::invalid_argument("symmetric_pair: n must be >= 1");
  if (!(r >= 0.0)) throw std::invalid_argument("symmetric_pair: r must be >= 0");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  mean(0) = r;
  GmmSpec spec;
  spec.dim = dim;
  spec.n_points = n;
  spec.components = {GmmComponent{0.5, mean}, GmmComponent{0.5, -mean}};
  return spec;
}

bool GmmSpec::is_symmetric_pair(double* r_out) const {
  if (components.size() != 2 || dim < 1) return false;
  if (components[0].weight != components[1].weight) return false;
  const Eigen::VectorXd& a = components[0].mean;
  const Eigen::VectorXd& b = components[1].mean;
  if (a.size() != dim || b.size() != dim) return false;
  const double r = a(0);
  if (!(r >= 0.0)) return false;
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(dim);
  expected(0) = r;
  if ((a.array() != expected.array()).any()) return false;
  if ((b.array() != (-expected).array()).any()) return false;
  if (r_out) *r_out = r;
  return true;
}

void GmmSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("GmmSpec: dim must be >= 1");
  if (n_points < 1) throw std::invalid_argument("GmmSpec: n_points must be >= 1");
  if (components.empty()) throw std::invalid_argument("GmmSpec: need at least one component");
  double total = 0.0;
  for (const auto& comp : components) {
    if (!(comp.weight > 0.0)) throw std::invalid_argument("GmmSpec: weights must be positive");
    if (comp.mean.size() != dim)
      throw std::invalid_argument("GmmSpec: component mean dimension != dim");
    if (!comp.mean.allFinite()) throw std::invalid_argument("GmmSpec: means must be finite");
    total += comp.weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("GmmSpec: weights must sum to 1 (got " + std::to_string(total) +
                                ")");
}

GmmSample sample_gmm(const GmmSpec& spec, Rng& rng) {
  spec.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(spec.n_points);
  const Eigen::Index m = spec.dim;

  Eigen::MatrixXd points(n, m);
  Eigen::MatrixXd noise(n, m);
  std::vector<int> labels(static_cast<std::size_t>(n), 0);

  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = rng.next_double();
    double cum = 0.0;
    int component = static_cast<int>(spec.components.size()) - 1;
    for (std::size_t c = 0; c < spec.components.size(); ++c) {
      cum += spec.components[c].weight;
      if (u < cum) {
        component = static_cast<int>(c);
        break;
      }
    }
    labels[static_cast<std::size_t>(i)] = component;
    for (Eigen::Index j = 0; j < m; ++j) noise(i, j) = rng.next_gaussian();
    points.row(i) =
        spec.components[static_cast<std::size_t>(component)].mean.transpose() + noise.row(i);
  }

  return GmmSample{Dataset(std::move(points)), std::move(labels), std::move(noise), spec};
}

DistanceDecomposition decompose_distance_matrix(const GmmSample& sample,
                                                const std::vector<int>& subset) {
  if (!sample.spec.is_symmetric_pair())
    throw std::invalid_argument(
        "decompose_distance_matrix: only symmetric two-component samples are supported");
  if (subset.empty()) throw std::invalid_argument("decompose_distance_matrix: empty subset");

  const Eigen::Index s = static_cast<Eigen::Index>(subset.size());
  const Eigen::Index m = sample.dataset.dim();
  const Dataset& data = sample.dataset;

  DistanceDecomposition out;
  out.mu.resize(s);
  out.y.resize(s);
  out.G.resize(m, s);
  for (Eigen::Index j = 0; j < s; ++j) {
    const int idx = subset[static_cast<std::size_t>(j)];
    if (idx < 0 || idx >= data.n_points())
      throw std::invalid_argument("decompose_distance_matrix: index " + std::to_string(idx) +
                                  " out of range");
    out.mu(j) = data.row(idx).squaredNorm();
    out.y(j) = data.points()(idx, 0);  // <x, v> with v the first basis vector
    out.G.col(j) = sample.noise.row(idx).transpose();
  }

  // With v = e1, (I - vv')G zeroes the first noise coordinate.
  Eigen::MatrixXd G_perp = out.G;
  G_perp.row(0).setZero();

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s);
  Eigen::MatrixXd reconstructed = out.mu * ones.transpose() + ones * out.mu.transpose() -
                                  2.0 * (out.y * out.y.transpose() + G_perp.transpose() * G_perp);

  const DistanceMatrix d = squared_distance_matrix(data, subset);
  out.reconstruction_error = (d.d2 - reconstructed).cwiseAbs().maxCoeff();
  return out;
}

Theorem2Params theorem2_params(int m) {
  if (m < 2) throw std::invalid_argument("theorem2_params: m must be >= 2");
  Theorem2Params params;
  params.s = static_cast<int>(std::ceil(static_cast<double>(m) * std::log(static_cast<double>(m))));
  params.B = (static_cast<double>(m) + 3.0) / 3.0;
  params.ell = 7;
  params.k = 2;
  return params;
}

}  // namespace kmcert
