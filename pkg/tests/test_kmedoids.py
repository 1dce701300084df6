from itertools import combinations

import numpy as np
import pytest

from _datasets import gaussian_blobs
from sepselect.errors import DataError
from sepselect.kmedoids import kmeanspp_init, pam_cluster


def brute_force_best(points, k):
    """Exhaustive medoid enumeration; the independent optimum oracle."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    m = pts.shape[0]
    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    best_cost, best_set = np.inf, None
    for medoids in combinations(range(m), k):
        cost = dist[:, list(medoids)].min(axis=1).sum()
        if cost < best_cost:
            best_cost, best_set = cost, medoids
    return best_cost, best_set


class TestKmeansppInit:
    def test_k_equals_m_selects_all(self):
        rng = np.random.default_rng(0)
        pts = rng.normal(size=(7, 2))
        chosen = kmeanspp_init(pts, 7, seed=5)
        assert sorted(chosen.tolist()) == list(range(7))

    def test_coincident_point_never_beats_positive_weight(self):
        # points 0 and 1 coincide; once either is chosen the other has
        # selection weight 0 while point 2 still has positive weight
        pts = np.array([0.0, 0.0, 1.0])
        for seed in range(300):
            chosen = set(kmeanspp_init(pts, 2, seed=seed).tolist())
            assert chosen != {0, 1}

    def test_selection_frequencies_match_squared_distance_law(self):
        pts = np.array([0.0, 1.0, 3.0, 7.0])
        m = 4
        d2 = (pts[:, None] - pts[None, :]) ** 2

        expected = np.zeros((m, m))
        for first in range(m):
            weights = d2[:, first].copy()
            weights[first] = 0.0
            expected[first] = weights / weights.sum()
        expected /= m  # uniform first pick

        runs = 10000
        counts = np.zeros((m, m))
        for seed in range(runs):
            first, second = kmeanspp_init(pts, 2, seed=seed)
            counts[first, second] += 1

        for i in range(m):
            for j in range(m):
                p = expected[i, j]
                sigma = np.sqrt(runs * p * (1.0 - p))
                assert abs(counts[i, j] - runs * p) <= 3.0 * sigma + 1e-9

    def test_determinism_and_bounds(self):
        pts = np.random.default_rng(3).normal(size=(9, 3))
        a = kmeanspp_init(pts, 4, seed=7)
        b = kmeanspp_init(pts, 4, seed=7)
        assert np.array_equal(a, b)
        assert len(set(a.tolist())) == 4
        with pytest.raises(DataError):
            kmeanspp_init(pts, 10, seed=0)


class TestPamCluster:
    def test_two_tight_pairs(self):
        pts = np.array([0.0, 1.0, 10.0, 11.0])
        result = pam_cluster(pts, 2, seed=0)
        opt_cost, _ = brute_force_best(pts, 2)
        assert opt_cost == 2.0
        assert result.cost == pytest.approx(2.0, abs=1e-12)
        low = {m for m in result.medoids if m in (0, 1)}
        high = {m for m in result.medoids if m in (2, 3)}
        assert len(low) == 1 and len(high) == 1

    def test_k_equals_m(self):
        pts = np.random.default_rng(1).normal(size=(6, 2))
        result = pam_cluster(pts, 6, seed=4)
        assert sorted(result.medoids.tolist()) == list(range(6))
        assert result.cost == 0.0
        assert np.array_equal(result.assignment, np.arange(6))

    def test_two_blobs_recovered(self):
        pts, membership = gaussian_blobs([20, 20], [[0.0, 0.0], [10.0, 10.0]], 0.5, seed=2)
        result = pam_cluster(pts, 2, seed=9)
        opt_cost, _ = brute_force_best(pts, 2)
        assert result.cost == pytest.approx(opt_cost, abs=1e-9)
        # assignment equals blob membership (up to cluster relabeling)
        lab = result.assignment
        flip = lab[0] != membership[0]
        recovered = 1 - lab if flip else lab
        assert np.array_equal(recovered, membership)

    def test_cost_log_non_increasing(self):
        pts = np.random.default_rng(12).normal(size=(40, 2))
        log = []
        pam_cluster(pts, 5, seed=3, cost_log=log)
        assert len(log) >= 1
        assert all(a >= b - 1e-12 for a, b in zip(log, log[1:]))

    def test_matches_brute_force_on_small_instances(self):
        hits, total = 0, 100
        rng = np.random.default_rng(99)
        for trial in range(total):
            m = int(rng.integers(5, 11))
            k = int(rng.integers(2, 4))
            pts = rng.normal(size=(m, 2))
            result = pam_cluster(pts, k, seed=trial)
            opt_cost, _ = brute_force_best(pts, k)
            assert result.cost >= opt_cost - 1e-9  # never beats the optimum
            if result.cost <= opt_cost + 1e-9:
                hits += 1
        assert hits >= 95

    def test_nearest_medoid_consistency(self):
        pts = np.random.default_rng(8).normal(size=(30, 3))
        result = pam_cluster(pts, 4, seed=1)
        dist = np.linalg.norm(pts[:, None, :] - pts[result.medoids][None, :, :], axis=2)
        assigned = dist[np.arange(30), result.assignment]
        assert np.all(assigned <= dist.min(axis=1) + 1e-12)

    def test_cost_recomputable(self):
        pts = np.random.default_rng(4).normal(size=(25, 2))
        result = pam_cluster(pts, 3, seed=6)
        med_pts = pts[result.medoids[result.assignment]]
        assert result.cost == pytest.approx(
            np.linalg.norm(pts - med_pts, axis=1).sum(), abs=1e-9
        )

    def test_medoids_in_own_cluster(self):
        pts = np.random.default_rng(10).normal(size=(20, 2))
        result = pam_cluster(pts, 4, seed=2)
        for pos, m in enumerate(result.medoids):
            assert result.assignment[m] == pos

    def test_determinism(self):
        pts = np.random.default_rng(5).normal(size=(30, 2))
        a = pam_cluster(pts, 4, seed=13)
        b = pam_cluster(pts, 4, seed=13)
        assert np.array_equal(a.medoids, b.medoids)
        assert np.array_equal(a.assignment, b.assignment)
        assert a.cost == b.cost

    def test_rejects_bad_input(self):
        pts = np.random.default_rng(0).normal(size=(5, 2))
        with pytest.raises(DataError):
            pam_cluster(pts, 6, seed=0)
        bad = pts.copy()
        bad[0, 0] = np.nan
        from sepselect.errors import NumericalError

        with pytest.raises(NumericalError):
            pam_cluster(bad, 2, seed=0)
