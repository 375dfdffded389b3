"""Community-based federated learning simulator.

Clients (hospitals) jointly train a denoising autoencoder, the server
clusters per-client mean encodings with k-means, and one model per
community is trained by count-weighted federated averaging. FedAvg and
centralized baselines plus exact communication accounting make the three
arms directly comparable.
"""

from . import autoencoder, clustering, datagen, federation, metrics, nn_core, seeding

__all__ = [
    "autoencoder",
    "clustering",
    "datagen",
    "federation",
    "metrics",
    "nn_core",
    "seeding",
]

__version__ = "0.1.0"
