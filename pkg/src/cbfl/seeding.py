"""Stateless derivation of child seeds from a root experiment seed.

Every randomized stage (model init, per-client local training, corruption,
k-means seeding, splits) gets its own namespaced seed so that stages never
share or advance each other's RNG streams. This is what makes parallel
client execution bit-identical to sequential execution.
"""

from __future__ import annotations

import numpy as np

# namespace codes; values are part of the reproducibility contract
MODEL_INIT = 1
LOCAL_TRAIN = 2
AUTOENCODER_INIT = 3
AUTOENCODER_TRAIN = 4
CORRUPTION = 5
KMEANS = 6
DATAGEN = 7
SPLIT = 8
CENTRALIZED_TRAIN = 9


def derive_seed(root: int, namespace: int, *parts: int) -> int:
    """Deterministic, well-mixed child seed for (root, namespace, parts)."""
    seq = np.random.SeedSequence([int(root), int(namespace), *map(int, parts)])
    return int(seq.generate_state(1, np.uint64)[0])
