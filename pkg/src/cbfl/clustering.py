"""K-means over client mean encodings plus 2-d PCA geometry analysis.

The clustering model is fit on one point per client (the mean encoding)
but applied to individual example encodings — communities partition
examples, not hospitals. That asymmetry is deliberate: hospitals
contribute members to every community they have examples in.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import autoencoder

MAX_LLOYD_ITERATIONS = 300


@dataclass
class KMeansModel:
    """Fitted centroids; immutable once fit, safe to share across threads."""

    centroids: np.ndarray
    iterations_run: int
    inertia: float
    inertia_history: list[float] = field(default_factory=list)

    @property
    def n_clusters(self) -> int:
        return self.centroids.shape[0]

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Exact per-centroid squared Euclidean distances, points x centroids.

    Computed centroid by centroid with the same arithmetic as the
    single-point path so tie-breaking is reproducible.
    """
    out = np.empty((points.shape[0], centroids.shape[0]))
    for k in range(centroids.shape[0]):
        diff = points - centroids[k]
        out[:, k] = np.einsum("ij,ij->i", diff, diff)
    return out


def _kmeans_plus_plus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding restricted to the input points themselves."""
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    while len(chosen) < k:
        d2 = _squared_distances(points, points[chosen]).min(axis=1)
        total = d2.sum()
        if total <= 0.0:
            # remaining points all duplicate a chosen centroid
            remaining = [i for i in range(n) if i not in chosen]
            chosen.append(int(rng.choice(remaining)))
            continue
        chosen.append(int(rng.choice(n, p=d2 / total)))
    return points[chosen].copy()


def fit_kmeans(
    client_means,
    k: int,
    seed: int,
    max_iterations: int = MAX_LLOYD_ITERATIONS,
) -> KMeansModel:
    """Lloyd iterations from k-means++ seeds until assignments stop changing.

    Empty clusters are re-seeded to the point farthest from its current
    centroid. Inertia is tracked per iteration and is non-increasing.
    """
    points = np.asarray(client_means, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 1:
        raise ValueError("client_means must be a non-empty 2-d matrix")
    if not np.isfinite(points).all():
        raise ValueError("client_means contain NaN/Inf")
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > points.shape[0]:
        raise ValueError(f"k={k} exceeds number of points {points.shape[0]}")

    rng = np.random.default_rng(seed)
    centroids = _kmeans_plus_plus(points, k, rng)
    assignments = np.full(points.shape[0], -1, dtype=np.int64)
    history: list[float] = []
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        d2 = _squared_distances(points, centroids)
        new_assignments = d2.argmin(axis=1)
        inertia = float(d2[np.arange(points.shape[0]), new_assignments].sum())
        history.append(inertia)
        if np.array_equal(new_assignments, assignments):
            break
        assignments = new_assignments
        for j in range(k):
            members = points[assignments == j]
            if members.shape[0] > 0:
                centroids[j] = members.mean(axis=0)
            else:
                d2_assigned = _squared_distances(points, centroids)[
                    np.arange(points.shape[0]), assignments
                ]
                farthest = int(d2_assigned.argmax())
                if d2_assigned[farthest] > 0.0:
                    centroids[j] = points[farthest]
                    assignments[farthest] = j
                # every point already sits on its centroid: nothing to
                # repair, the cluster legitimately stays empty
    final_d2 = _squared_distances(points, centroids)
    final_assign = final_d2.argmin(axis=1)
    inertia = float(final_d2[np.arange(points.shape[0]), final_assign].sum())
    return KMeansModel(
        centroids=centroids,
        iterations_run=iterations,
        inertia=inertia,
        inertia_history=history,
    )


def assign(model: KMeansModel, encoding) -> int:
    """Index of the nearest centroid; ties break to the lowest index."""
    x = np.asarray(encoding, dtype=np.float64)
    if x.shape != (model.dim,):
        raise ValueError(f"encoding shape {x.shape} != ({model.dim},)")
    diff = model.centroids - x
    return int(np.einsum("ij,ij->i", diff, diff).argmin())


def assign_many(model: KMeansModel, encodings) -> np.ndarray:
    """Vectorized assign; identical tie-breaking to the scalar path."""
    x = np.asarray(encodings, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.dim:
        raise ValueError(f"encodings must be (n, {model.dim})")
    return _squared_distances(x, model.centroids).argmin(axis=1)


def count_communities(
    model: KMeansModel, encoder: "autoencoder.EncoderModel", client_features
) -> np.ndarray:
    """Per-community example counts for one client; sums to the client size."""
    features = np.asarray(client_features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] < 1:
        raise ValueError("client must have at least one example")
    encoded = autoencoder.encode(encoder, features)
    labels = assign_many(model, encoded)
    return np.bincount(labels, minlength=model.n_clusters).astype(np.int64)


@dataclass
class Pca2D:
    """Top-2 principal directions of centered points, with a fixed sign
    convention (first nonzero entry of each component is positive) so
    projections are reproducible."""

    components: np.ndarray
    explained_variance: np.ndarray
    mean: np.ndarray


def fit_pca2d(points) -> Pca2D:
    x = np.asarray(points, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("PCA needs at least two points")
    mean = x.mean(axis=0)
    centered = x - mean
    _, singular_values, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:2].copy()
    if components.shape[0] < 2:
        raise ValueError("PCA needs at least two singular directions")
    for row in components:
        nonzero = np.nonzero(row)[0]
        if nonzero.size and row[nonzero[0]] < 0:
            row *= -1.0
    explained = singular_values[:2] ** 2 / (x.shape[0] - 1)
    return Pca2D(components=components, explained_variance=explained, mean=mean)


def project(pca: Pca2D, points) -> np.ndarray:
    """Center then project onto the two components; (n, 2) or (2,) output."""
    x = np.asarray(points, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.shape[1] != pca.mean.shape[0]:
        raise ValueError("point dimension does not match the fitted PCA")
    coords = (x - pca.mean) @ pca.components.T
    return coords[0] if single else coords


def community_distances(model: KMeansModel, pca: Pca2D) -> np.ndarray:
    """Average 2-d distance from each projected centroid to all others."""
    if model.n_clusters < 2:
        raise ValueError("need at least two communities")
    coords = project(pca, model.centroids)
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    k = model.n_clusters
    return dist.sum(axis=1) / (k - 1)
