#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "kmcert/certifier.hpp"
#include "kmcert/core.hpp"
#include "kmcert/io.hpp"
#include "kmcert/kmeans.hpp"
#include "kmcert/sdp.hpp"
#include "kmcert/synth.hpp"
#include "kmcert/version.hpp"

namespace py = pybind11;
using namespace kmcert;

namespace {

py::dict lloyd_dict(const LloydResult& result) {
  py::dict out;
  out["labels"] = result.partition.labels;
  out["k"] = result.partition.k;
  out["value"] = result.value;
  out["iterations"] = result.iterations;
  out["converged"] = result.converged;
  out["value_history"] = result.value_history;
  return out;
}

py::dict solution_dict(const SdpSolution& solution) {
  py::dict out;
  out["X"] = solution.X;
  out["y"] = solution.y;
  out["z"] = solution.z;
  out["Nmat"] = solution.Nmat;
  out["primal_value"] = solution.primal_value;
  out["dual_value"] = solution.dual_value;
  out["psd_margin"] = solution.psd_margin;
  out["iterations"] = solution.iterations;
  out["status"] = solution.status == SolveStatus::Solved
                      ? "Solved"
                      : (solution.status == SolveStatus::MaxIter ? "MaxIter" : "InfeasibleInput");
  return out;
}

py::dict report_dict(const CertificateReport& report) {
  py::dict out;
  out["values"] = report.values;
  out["t_stat"] = report.t_stat;
  out["p_value"] = report.p_value;
  out["bound"] = report.bound;
  out["confidence"] = report.confidence;
  if (const auto* fixed = std::get_if<FixedB>(&report.mode)) {
    out["mode"] = "FixedB";
    out["B"] = fixed->B;
  } else {
    out["mode"] = "ConfidenceBound";
    out["eta"] = std::get<ConfidenceBound>(report.mode).eta;
  }
  py::list trials;
  for (const auto& trial : report.trials) {
    py::dict t;
    t["subset"] = trial.subset;
    t["value"] = trial.value;
    t["primal_value"] = trial.primal_value;
    t["dual_value"] = trial.dual_value;
    t["psd_margin"] = trial.psd_margin;
    t["iterations"] = trial.iterations;
    trials.append(t);
  }
  out["trials"] = trials;
  return out;
}

CertifierConfig build_config(int s, int ell, double eta, std::optional<double> B,
                             std::uint64_t seed, double tol, int max_iter) {
  CertifierConfig config;
  config.s = s;
  config.ell = ell;
  if (B.has_value())
    config.mode = FixedB{*B};
  else
    config.mode = ConfidenceBound{eta};
  config.solver_opts = SolverOptions{tol, max_iter};
  config.master_seed = seed;
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "k-means optimality certification: clustering, subsample SDP bounds, "
            "and Monte Carlo confidence certificates";
  m.attr("__version__") = kVersion;

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<Eigen::MatrixXd>(), py::arg("points"))
      .def_property_readonly("points", &Dataset::points)
      .def_property_readonly("n_points", &Dataset::n_points)
      .def_property_readonly("dim", &Dataset::dim)
      .def("__len__", &Dataset::n_points);

  m.def(
      "kmeans_objective",
      [](const Dataset& data, const std::vector<int>& labels, int k) {
        return kmeans_objective(data, Partition{labels, k});
      },
      py::arg("data"), py::arg("labels"), py::arg("k"),
      "Mean squared distance to cluster centroids.");

  m.def(
      "squared_distance_matrix",
      [](const Dataset& data, const std::vector<int>& indices) {
        return squared_distance_matrix(data, indices).d2;
      },
      py::arg("data"), py::arg("indices"));

  m.def(
      "brute_force_kmeans",
      [](const Dataset& data, int k) {
        const BruteForceResult result = brute_force_kmeans(data, k);
        return py::make_tuple(result.partition.labels, result.value);
      },
      py::arg("data"), py::arg("k"), "Exact optimum for tiny inputs: (labels, value).");

  m.def(
      "subsample",
      [](const Dataset& data, int s, std::uint64_t seed) {
        Rng rng(seed);
        SubsampleResult result = subsample(data, s, rng);
        return py::make_tuple(std::move(result.data), result.indices);
      },
      py::arg("data"), py::arg("s"), py::arg("seed") = 0,
      "Uniform random s-subset: (sub_dataset, indices).");

  m.def(
      "dsquared_seed",
      [](const Dataset& data, int k, std::uint64_t seed) {
        Rng rng(seed);
        const KppSeedResult result = dsquared_seed(data, k, rng);
        py::dict out;
        out["center_indices"] = result.center_indices;
        out["labels"] = result.seed_partition.labels;
        out["W"] = result.W;
        return out;
      },
      py::arg("data"), py::arg("k"), py::arg("seed") = 0);

  m.def(
      "lloyd",
      [](const Dataset& data, const Eigen::MatrixXd& centers, int max_iter, double tol) {
        return lloyd_dict(lloyd(data, centers, LloydOptions{max_iter, tol}));
      },
      py::arg("data"), py::arg("initial_centers"), py::arg("max_iter") = 300,
      py::arg("tol") = 1e-9);

  m.def(
      "kmeanspp",
      [](const Dataset& data, int k, std::uint64_t seed, int restarts, int max_iter, double tol) {
        Rng rng(seed);
        return lloyd_dict(kmeanspp(data, k, rng, restarts, LloydOptions{max_iter, tol}));
      },
      py::arg("data"), py::arg("k"), py::arg("seed") = 0, py::arg("restarts") = 1,
      py::arg("max_iter") = 300, py::arg("tol") = 1e-9);

  m.def(
      "baseline_bound_sample",
      [](const Dataset& data, int k, std::uint64_t seed) {
        Rng rng(seed);
        return baseline_bound_sample(data, k, rng);
      },
      py::arg("data"), py::arg("k"), py::arg("seed") = 0);

  m.def(
      "partition_to_feasible_X",
      [](const std::vector<int>& labels, int k) {
        return partition_to_feasible_X(Partition{labels, k});
      },
      py::arg("labels"), py::arg("k"));

  m.def(
      "solve_sdp",
      [](const Dataset& subset, int k, double tol, int max_iter) {
        return solution_dict(solve_sdp(build_problem(subset, k), SolverOptions{tol, max_iter}));
      },
      py::arg("data_subset"), py::arg("k"), py::arg("tol") = 1e-6, py::arg("max_iter") = 20000);

  m.def(
      "certified_sdp_lower_bound",
      [](const Dataset& subset, int k, double tol, int max_iter) {
        return certified_sdp_lower_bound(subset, k, SolverOptions{tol, max_iter});
      },
      py::arg("data_subset"), py::arg("k"), py::arg("tol") = 1e-6, py::arg("max_iter") = 20000);

  m.def(
      "seminorm_F",
      [](const Eigen::MatrixXd& M, int k, double tol, int max_iter) {
        const SeminormResult result = seminorm_F(M, k, SolverOptions{tol, max_iter});
        return py::make_tuple(result.value, result.upper_bound);
      },
      py::arg("M"), py::arg("k"), py::arg("tol") = 1e-6, py::arg("max_iter") = 20000,
      "Max of |tr(M X)| over the relaxation's feasible set: (value, certified_upper_bound).");

  m.def("test_statistic", &test_statistic, py::arg("values"));
  m.def("p_value", &p_value, py::arg("B"), py::arg("T"), py::arg("ell"));
  m.def("confidence_lower_bound", &confidence_lower_bound, py::arg("T"), py::arg("ell"),
        py::arg("eta"));

  m.def(
      "certify",
      [](const Dataset& data, int k, int s, int ell, double eta, std::optional<double> B,
         std::uint64_t seed, double tol, int max_iter) {
        return report_dict(certify(data, k, build_config(s, ell, eta, B, seed, tol, max_iter)));
      },
      py::arg("data"), py::arg("k"), py::arg("s"), py::arg("ell") = 7, py::arg("eta") = 0.01,
      py::arg("B") = py::none(), py::arg("seed") = 0, py::arg("tol") = 1e-6,
      py::arg("max_iter") = 20000,
      "Monte Carlo SDP certificate; B=None gives the inverted confidence bound.");

  m.def(
      "certify_baseline",
      [](const Dataset& data, int k, int ell, double eta, std::optional<double> B,
         std::uint64_t seed) {
        return report_dict(
            certify_baseline(data, k, build_config(0, ell, eta, B, seed, 1e-6, 1)));
      },
      py::arg("data"), py::arg("k"), py::arg("ell") = 7, py::arg("eta") = 0.01,
      py::arg("B") = py::none(), py::arg("seed") = 0);

  m.def(
      "sample_symmetric_pair",
      [](int m, std::int64_t n, double r, std::uint64_t seed) {
        Rng rng(seed);
        GmmSample sample = sample_gmm(GmmSpec::symmetric_pair(m, n, r), rng);
        return py::make_tuple(sample.dataset.points(), sample.labels, sample.noise);
      },
      py::arg("m"), py::arg("n"), py::arg("r"), py::arg("seed") = 0,
      "Two-Gaussian sample with means +/- r e1: (points, labels, noise).");

  m.def(
      "decompose_distance_matrix",
      [](const Eigen::MatrixXd& points, const std::vector<int>& labels,
         const Eigen::MatrixXd& noise, double r, const std::vector<int>& subset) {
        GmmSample sample{Dataset(points), labels, noise,
                         GmmSpec::symmetric_pair(static_cast<int>(points.cols()),
                                                 static_cast<std::int64_t>(points.rows()), r)};
        const DistanceDecomposition d = decompose_distance_matrix(sample, subset);
        py::dict out;
        out["mu"] = d.mu;
        out["y"] = d.y;
        out["G"] = d.G;
        out["reconstruction_error"] = d.reconstruction_error;
        return out;
      },
      py::arg("points"), py::arg("labels"), py::arg("noise"), py::arg("r"), py::arg("subset"));

  m.def(
      "theorem2_params",
      [](int m) {
        const Theorem2Params params = theorem2_params(m);
        py::dict out;
        out["s"] = params.s;
        out["B"] = params.B;
        out["ell"] = params.ell;
        out["k"] = params.k;
        return out;
      },
      py::arg("m"));

  m.def("load_csv", &load_csv, py::arg("path"));
  m.def("load_idx", &load_idx, py::arg("path"), py::arg("scale") = false);
  m.def("save_csv", &save_csv, py::arg("path"), py::arg("data"));
}
