import numpy as np
import pytest

from shrunkclust.datasets import make_blobs, make_components, make_moons
from shrunkclust.exceptions import ParameterError
from shrunkclust.metrics import acc, nmi
from shrunkclust.pipelines import (cluster_kmeans, cluster_spectral,
                                   cluster_ssc, pca, run_pca_then)
from shrunkclust.shrink import ShrinkConfig


class TestPca:
    def test_line_data_rank_one(self):
        rng = np.random.default_rng(0)
        t = rng.standard_normal(30)
        direction = np.array([1.0, 2.0, -1.0]) / np.sqrt(6.0)
        x = 5.0 + np.outer(t, direction)
        proj = pca(x, 1)
        recon = proj.projected @ proj.components.T + proj.mean
        assert np.max(np.abs(recon - x)) <= 1e-10
        centered_t = (t - t.mean())
        assert np.allclose(np.abs(proj.projected[:, 0]), np.abs(centered_t),
                           atol=1e-10)

    def test_full_rank_reconstruction(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((12, 5))
        proj = pca(x, 5)
        recon = proj.projected @ proj.components.T + proj.mean
        assert np.max(np.abs(recon - x)) <= 1e-8

    def test_captured_variance_matches_dense_oracle(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((20, 6))
        proj = pca(x, 3)
        centered = x - x.mean(axis=0)
        cov = centered.T @ centered / (len(x) - 1)
        want = np.sort(np.linalg.eigvalsh(cov))[::-1][:3].sum()
        got = proj.projected.var(axis=0, ddof=1).sum()
        assert got == pytest.approx(want, abs=1e-8)

    def test_orthonormal_components_and_monotone_variance(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((25, 6))
        prev = 0.0
        for m in (1, 2, 4, 6):
            proj = pca(x, m)
            gram = proj.components.T @ proj.components
            assert np.max(np.abs(gram - np.eye(m))) <= 1e-8
            var = proj.projected.var(axis=0, ddof=1).sum()
            assert var >= prev - 1e-10
            prev = var

    def test_dimension_out_of_range(self):
        with pytest.raises(ParameterError):
            pca(np.zeros((4, 3)), 4)


class TestClusterKmeans:
    def test_two_blobs_exact(self):
        x, y = make_blobs(n=60, d=2, c=2, std=0.3, sep=15.0, seed=0)
        labels = cluster_kmeans(x, 2, restarts=10, seed=0)
        assert acc(labels, y) == 1.0

    def test_single_cluster(self):
        rng = np.random.default_rng(4)
        labels = cluster_kmeans(rng.standard_normal((10, 2)), 1, restarts=3, seed=0)
        assert np.all(labels == 0)

    def test_seed_replay(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal((40, 3))
        a = cluster_kmeans(x, 3, restarts=5, seed=9)
        b = cluster_kmeans(x, 3, restarts=5, seed=9)
        assert np.array_equal(a, b)


class TestClusterSpectral:
    def test_two_moons(self):
        x, y = make_moons(n=200, noise=0.05, seed=0)
        labels = cluster_spectral(x, 2, k=5, restarts=20, seed=0)
        assert acc(labels, y) >= 0.95

    def test_disconnected_components_exact(self):
        for seed in range(3):
            x, y = make_components(n=90, d=2, c=3, seed=seed)
            labels = cluster_spectral(x, 3, k=5, restarts=20, seed=0)
            assert acc(labels, y) == 1.0

    def test_seed_replay(self):
        x, _ = make_blobs(n=50, d=3, c=2, seed=2)
        a = cluster_spectral(x, 2, k=5, restarts=5, seed=3)
        b = cluster_spectral(x, 2, k=5, restarts=5, seed=3)
        assert np.array_equal(a, b)


class TestClusterSsc:
    def test_vanishing_gamma_reduces_to_spectral(self):
        for seed, maker in ((0, make_blobs), (1, make_moons)):
            x, _ = (maker(n=80, seed=seed) if maker is make_moons
                    else maker(n=80, d=4, c=3, seed=seed))
            c = 2 if maker is make_moons else 3
            cfg = ShrinkConfig(gamma=1e-12)
            ssc_labels, shrunk = cluster_ssc(x, c, k=5, cfg=cfg, restarts=10, seed=7)
            sc_labels = cluster_spectral(x, c, k=5, restarts=10, seed=7)
            assert np.array_equal(ssc_labels, sc_labels)
            assert shrunk.converged

    def test_three_blobs_quality(self):
        x, y = make_blobs(n=300, d=10, c=3, std=0.5, sep=8.0, seed=0)
        labels, shrunk = cluster_ssc(x, 3, k=5, cfg=ShrinkConfig(gamma=1.0),
                                     restarts=20, seed=0)
        assert acc(labels, y) >= 0.98
        assert nmi(labels, y) >= 0.95

    def test_seed_replay(self):
        x, _ = make_blobs(n=60, d=3, c=2, seed=3)
        a, _ = cluster_ssc(x, 2, k=5, restarts=5, seed=4)
        b, _ = cluster_ssc(x, 2, k=5, restarts=5, seed=4)
        assert np.array_equal(a, b)


class TestPcaPipelines:
    def test_grid_falls_back_on_small_d(self):
        x, y = make_blobs(n=60, d=2, c=2, std=0.3, sep=15.0, seed=4)
        res = run_pca_then("kmeans", x, 2, restarts=10, seed=0, truth=y)
        assert res.pca_dim == 2
        assert acc(res.labels, y) == 1.0

    def test_spectral_inner(self):
        x, y = make_blobs(n=90, d=30, c=3, std=0.5, sep=10.0, seed=5)
        res = run_pca_then("spectral", x, 3, k=5, restarts=10, seed=0, truth=y)
        assert res.pca_dim in (10, 25)
        assert acc(res.labels, y) == 1.0

    def test_unknown_inner_rejected(self):
        with pytest.raises(ParameterError):
            run_pca_then("svm", np.zeros((10, 3)), 2)
