"""K-means, PCA and community-geometry tests."""

import numpy as np
import pytest

from cbfl import autoencoder, clustering, nn_core
from cbfl.clustering import Pca2D


def sorted_rows(matrix):
    return matrix[np.lexsort(matrix.T[::-1])]


class TestFitKmeans:
    def test_k_equals_c_zero_inertia(self):
        rng = np.random.default_rng(0)
        points = rng.random((6, 50))
        model = clustering.fit_kmeans(points, 6, seed=1)
        assert model.inertia == 0.0
        np.testing.assert_allclose(sorted_rows(model.centroids), sorted_rows(points))

    def test_two_separated_blobs(self):
        blob_a = np.array([[0.0, 0.0], [0.0, 2.0]])
        blob_b = np.array([[10.0, 10.0], [10.0, 12.0]])
        points = np.vstack([blob_a, blob_b])
        model = clustering.fit_kmeans(points, 2, seed=5)
        got = sorted_rows(model.centroids)
        expected = sorted_rows(np.array([blob_a.mean(axis=0), blob_b.mean(axis=0)]))
        np.testing.assert_allclose(got, expected)

    def test_k1_is_global_mean(self):
        rng = np.random.default_rng(2)
        points = rng.random((9, 4))
        model = clustering.fit_kmeans(points, 1, seed=0)
        np.testing.assert_allclose(model.centroids[0], points.mean(axis=0), atol=1e-12)

    def test_k_greater_than_points_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            clustering.fit_kmeans(np.zeros((3, 2)), 4, seed=0)

    def test_non_finite_rejected(self):
        points = np.array([[0.0, 1.0], [np.nan, 0.0]])
        with pytest.raises(ValueError, match="NaN"):
            clustering.fit_kmeans(points, 1, seed=0)

    def test_inertia_non_increasing(self):
        rng = np.random.default_rng(33)
        for trial in range(10):
            points = rng.normal(size=(40, 8))
            model = clustering.fit_kmeans(points, 4, seed=trial)
            history = np.array(model.inertia_history)
            assert np.all(np.diff(history) <= 1e-9)
            assert model.inertia == history[-1]

    def test_duplicated_rows_same_centroid_set(self):
        rng = np.random.default_rng(4)
        distinct = rng.random((5, 6))
        doubled = np.vstack([distinct, distinct])
        a = clustering.fit_kmeans(distinct, 5, seed=9)
        b = clustering.fit_kmeans(doubled, 5, seed=9)
        np.testing.assert_allclose(sorted_rows(a.centroids), sorted_rows(b.centroids))

    def test_duplicate_heavy_input_terminates_quickly(self):
        # duplicated points can starve a centroid (ties break away from
        # it); the run must still reach a fixpoint, not spin to the
        # iteration cap
        a = np.array([1.0, 2.0, 3.0])
        b = np.array([9.0, 9.0, 9.0])
        points = np.vstack([a, a, a, a, b])
        for seed in range(6):
            model = clustering.fit_kmeans(points, 3, seed=seed)
            assert model.inertia == 0.0
            assert model.iterations_run < 10

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(8)
        points = rng.normal(size=(30, 5))
        a = clustering.fit_kmeans(points, 3, seed=77)
        b = clustering.fit_kmeans(points, 3, seed=77)
        np.testing.assert_array_equal(a.centroids, b.centroids)
        assert a.inertia == b.inertia

    def test_assign_consistent_with_final_iteration(self):
        # at the fixpoint, one more Lloyd update (means of the assigned
        # points) must reproduce the stored centroids exactly
        rng = np.random.default_rng(12)
        points = rng.normal(size=(50, 4))
        model = clustering.fit_kmeans(points, 5, seed=3)
        assignments = clustering.assign_many(model, points)
        np.testing.assert_array_equal(assignments, clustering.assign_many(model, points))
        for k in range(5):
            members = points[assignments == k]
            assert members.shape[0] > 0
            np.testing.assert_allclose(model.centroids[k], members.mean(axis=0), atol=1e-12)


class TestAssign:
    def make_model(self, centroids):
        return clustering.KMeansModel(
            centroids=np.asarray(centroids, dtype=float), iterations_run=1, inertia=0.0
        )

    def test_centroid_assigns_to_itself(self):
        rng = np.random.default_rng(1)
        model = self.make_model(rng.random((4, 6)))
        for j in range(4):
            assert clustering.assign(model, model.centroids[j]) == j

    def test_tie_breaks_to_lowest_index(self):
        model = self.make_model([[0.0, 0.0], [2.0, 0.0]])
        assert clustering.assign(model, np.array([1.0, 0.0])) == 0

    def test_matches_brute_force_scan(self):
        rng = np.random.default_rng(6)
        model = self.make_model(rng.normal(size=(7, 10)))
        for _ in range(50):
            probe = rng.normal(size=10)
            distances = [float(((probe - c) ** 2).sum()) for c in model.centroids]
            expected = int(np.argmin(distances))
            assert clustering.assign(model, probe) == expected

    def test_assign_many_matches_scalar_path(self):
        rng = np.random.default_rng(9)
        model = self.make_model(rng.normal(size=(5, 8)))
        probes = rng.normal(size=(40, 8))
        batched = clustering.assign_many(model, probes)
        singles = np.array([clustering.assign(model, p) for p in probes])
        np.testing.assert_array_equal(batched, singles)

    def test_dimension_mismatch(self):
        model = self.make_model(np.zeros((2, 4)))
        with pytest.raises(ValueError):
            clustering.assign(model, np.zeros(5))


class TestCountCommunities:
    def make_encoder(self, input_dim, seed=0):
        spec = autoencoder.AutoencoderSpec(input_dim)
        return autoencoder.extract_encoder(spec.init_params(seed))

    def test_counts_sum_to_client_size(self):
        rng = np.random.default_rng(5)
        encoder = self.make_encoder(60)
        features = (rng.random((33, 60)) < 0.3).astype(float)
        means = np.stack([autoencoder.encode(encoder, features[:10]).mean(axis=0),
                          autoencoder.encode(encoder, features[10:]).mean(axis=0)])
        model = clustering.fit_kmeans(means, 2, seed=3)
        counts = clustering.count_communities(model, encoder, features)
        assert counts.sum() == 33
        assert (counts >= 0).all()

    def test_identical_examples_single_bucket(self):
        rng = np.random.default_rng(7)
        encoder = self.make_encoder(60)
        row = (rng.random(60) < 0.4).astype(float)
        features = np.tile(row, (12, 1))
        means = rng.normal(size=(3, 50))
        model = clustering.fit_kmeans(means, 3, seed=1)
        counts = clustering.count_communities(model, encoder, features)
        assert counts.sum() == 12
        assert (counts > 0).sum() == 1
        assert counts.max() == 12

    def test_matches_per_example_tally(self):
        rng = np.random.default_rng(11)
        encoder = self.make_encoder(64)
        features = (rng.random((25, 64)) < 0.25).astype(float)
        means = rng.normal(size=(4, 50))
        model = clustering.fit_kmeans(means, 4, seed=2)
        counts = clustering.count_communities(model, encoder, features)
        tally = np.zeros(4, dtype=int)
        for row in features:
            encoding = autoencoder.encode(encoder, row)
            tally[clustering.assign(model, encoding)] += 1
        np.testing.assert_array_equal(counts, tally)


class TestPca2D:
    def test_collinear_points_second_variance_vanishes(self):
        rng = np.random.default_rng(3)
        direction = rng.normal(size=50)
        direction /= np.linalg.norm(direction)
        points = np.outer(np.linspace(-2, 2, 12), direction)
        pca = clustering.fit_pca2d(points)
        assert pca.explained_variance[1] < 1e-9 * pca.explained_variance[0]

    def test_mean_projects_to_origin(self):
        rng = np.random.default_rng(4)
        points = rng.normal(size=(20, 50))
        pca = clustering.fit_pca2d(points)
        np.testing.assert_allclose(clustering.project(pca, points.mean(axis=0)), [0.0, 0.0], atol=1e-12)

    def test_components_orthonormal(self):
        rng = np.random.default_rng(5)
        pca = clustering.fit_pca2d(rng.normal(size=(15, 30)))
        gram = pca.components @ pca.components.T
        np.testing.assert_allclose(gram, np.eye(2), atol=1e-9)

    def test_projected_variance_bounded(self):
        rng = np.random.default_rng(6)
        points = rng.normal(size=(25, 10))
        pca = clustering.fit_pca2d(points)
        total = ((points - points.mean(axis=0)) ** 2).sum() / (points.shape[0] - 1)
        assert pca.explained_variance.sum() <= total + 1e-9

    def test_rank_two_data_keeps_all_variance(self):
        rng = np.random.default_rng(7)
        basis = rng.normal(size=(2, 40))
        coeffs = rng.normal(size=(30, 2))
        points = coeffs @ basis
        pca = clustering.fit_pca2d(points)
        total = ((points - points.mean(axis=0)) ** 2).sum() / (points.shape[0] - 1)
        assert pca.explained_variance.sum() == pytest.approx(total, rel=1e-9)

    def test_sign_convention_deterministic(self):
        rng = np.random.default_rng(8)
        points = rng.normal(size=(12, 9))
        a = clustering.fit_pca2d(points)
        b = clustering.fit_pca2d(points.copy())
        np.testing.assert_array_equal(a.components, b.components)
        for row in a.components:
            first_nonzero = row[np.nonzero(row)[0][0]]
            assert first_nonzero > 0

    def test_variances_descending(self):
        rng = np.random.default_rng(9)
        pca = clustering.fit_pca2d(rng.normal(size=(40, 6)))
        assert pca.explained_variance[0] >= pca.explained_variance[1] >= 0

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError, match="two points"):
            clustering.fit_pca2d(np.zeros((1, 5)))


class TestCommunityDistances:
    def make(self, centroids_2d):
        """Model whose centroids project to the given 2-d coordinates."""
        coords = np.asarray(centroids_2d, dtype=float)
        dim = 50
        centroids = np.zeros((coords.shape[0], dim))
        centroids[:, :2] = coords
        model = clustering.KMeansModel(centroids=centroids, iterations_run=1, inertia=0.0)
        components = np.zeros((2, dim))
        components[0, 0] = 1.0
        components[1, 1] = 1.0
        pca = Pca2D(components=components, explained_variance=np.array([1.0, 1.0]), mean=np.zeros(dim))
        return model, pca

    def test_three_four_five(self):
        model, pca = self.make([[0.0, 0.0], [3.0, 4.0]])
        np.testing.assert_allclose(clustering.community_distances(model, pca), [5.0, 5.0])

    def test_collinear_hand_values(self):
        model, pca = self.make([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        np.testing.assert_allclose(clustering.community_distances(model, pca), [1.5, 1.0, 1.5])

    def test_identical_centroids(self):
        model, pca = self.make([[1.0, 1.0]] * 4)
        np.testing.assert_allclose(clustering.community_distances(model, pca), np.zeros(4))

    def test_single_community_rejected(self):
        model, pca = self.make([[0.0, 0.0]])
        with pytest.raises(ValueError, match="two communities"):
            clustering.community_distances(model, pca)
