"""End-to-end smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import kmcert

TIGHT = np.array([[0.0], [1.0], [10.0], [11.0]])


def test_dataset_wraps_numpy():
    data = kmcert.Dataset(TIGHT)
    assert len(data) == 4
    assert data.n_points == 4
    assert data.dim == 1
    np.testing.assert_array_equal(data.points, TIGHT)


def test_brute_force_recovers_the_tight_optimum():
    labels, value = kmcert.brute_force_kmeans(kmcert.Dataset(TIGHT), 2)
    assert value == pytest.approx(0.25, abs=1e-12)
    assert labels[0] == labels[1]
    assert labels[2] == labels[3]
    assert labels[0] != labels[2]
    assert kmcert.kmeans_objective(kmcert.Dataset(TIGHT), labels, 2) == pytest.approx(value)


def test_distance_matrix_and_feasible_partition_match():
    data = kmcert.Dataset(TIGHT)
    D = kmcert.squared_distance_matrix(data, [0, 1, 2, 3])
    X = kmcert.partition_to_feasible_X([0, 0, 1, 1], 2)
    # The relaxation objective of a partition matrix is its k-means value.
    assert np.sum(D * X) / (2 * 4) == pytest.approx(0.25, abs=1e-12)


def test_sdp_solver_certifies_the_tight_instance():
    result = kmcert.solve_sdp(kmcert.Dataset(TIGHT), 2, tol=1e-7)
    assert result["status"] == "Solved"
    assert result["primal_value"] == pytest.approx(0.25, abs=1e-5)
    assert result["dual_value"] >= 0.25 - 1e-4
    assert result["dual_value"] <= 0.25 + 1e-8
    v = kmcert.certified_sdp_lower_bound(kmcert.Dataset(TIGHT), 2, tol=1e-7)
    assert 0.25 - 1e-4 <= v <= 0.25 + 1e-8


def test_kmeanspp_and_baseline():
    rng = np.random.default_rng(5)
    pts = np.vstack([rng.normal(size=(30, 2)) - 4, rng.normal(size=(30, 2)) + 4])
    data = kmcert.Dataset(pts)
    run = kmcert.kmeanspp(data, 2, seed=1, restarts=2)
    assert run["converged"]
    assert run["value"] > 0
    assert sorted(set(run["labels"])) == [0, 1]
    v = kmcert.baseline_bound_sample(data, 2, seed=1)
    assert 0 <= v  # one realization of a variable whose mean is below OPT


def test_certify_pipeline_exact_arithmetic():
    assert kmcert.p_value(1.0, 2.0, 7) == 0.0078125
    assert kmcert.confidence_lower_bound(2.0, 7, 1.0 / 128.0) == 1.0
    assert kmcert.test_statistic([3.0, 5.0, 2.0]) == 2.0


def test_certify_full_subsample():
    report = kmcert.certify(kmcert.Dataset(TIGHT), 2, s=4, ell=3, eta=0.01, seed=1, tol=1e-7)
    assert report["t_stat"] == pytest.approx(0.25, abs=1e-4)
    assert report["bound"] == pytest.approx(0.25 * 0.01 ** (1.0 / 3.0), rel=1e-3)
    assert report["confidence"] == 0.99
    fixed = kmcert.certify(kmcert.Dataset(TIGHT), 2, s=4, ell=3, B=0.05, seed=1, tol=1e-7)
    assert fixed["p_value"] == pytest.approx((0.05 / 0.25) ** 3, rel=1e-2)


def test_baseline_certificate_on_two_points():
    report = kmcert.certify_baseline(kmcert.Dataset(np.array([[0.0], [2.0]])), 1, ell=5, seed=2)
    assert report["t_stat"] == pytest.approx(0.125, abs=1e-12)


def test_synthesis_and_decomposition():
    points, labels, noise = kmcert.sample_symmetric_pair(3, 50, 1.5, seed=9)
    assert points.shape == (50, 3)
    assert noise.shape == (50, 3)
    assert set(labels) <= {0, 1}
    dec = kmcert.decompose_distance_matrix(points, labels, noise, 1.5, list(range(0, 50, 2)))
    D = kmcert.squared_distance_matrix(kmcert.Dataset(points), list(range(0, 50, 2)))
    assert dec["reconstruction_error"] <= 1e-8 * max(1.0, np.abs(D).max())


def test_theorem2_params_presets():
    params = kmcert.theorem2_params(16)
    assert params == {"s": 45, "B": pytest.approx(19.0 / 3.0), "ell": 7, "k": 2}
    assert kmcert.theorem2_params(32)["s"] == 111
    assert kmcert.theorem2_params(32)["s"] == math.ceil(32 * math.log(32))


def test_seminorm_of_identity_is_k():
    value, upper = kmcert.seminorm_F(np.eye(6), 2)
    assert value == pytest.approx(2.0, abs=1e-6)
    assert upper == pytest.approx(2.0, abs=1e-6)


def test_csv_round_trip(tmp_path):
    path = str(tmp_path / "points.csv")
    original = np.array([[1.0 / 3.0, 0.1], [-1e-300, 2.5]])
    kmcert.save_csv(path, kmcert.Dataset(original))
    loaded = kmcert.load_csv(path)
    np.testing.assert_array_equal(loaded.points, original)


def test_subsample_indices_are_valid():
    data = kmcert.Dataset(np.arange(20, dtype=float).reshape(-1, 1))
    sub, indices = kmcert.subsample(data, 6, seed=3)
    assert len(indices) == 6
    assert indices == sorted(set(indices))
    np.testing.assert_array_equal(sub.points[:, 0], [float(i) for i in indices])
