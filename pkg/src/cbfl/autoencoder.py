"""Federated denoising-autoencoder training and 50-dim encodings.

Clients reconstruct their clean binary drug features from masked copies;
only the encoder half of the trained network (and later the per-client
mean encoding) ever leaves a client. The decoder is dropped locally, which
is what makes the encodings usable as a privacy-preserving representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import nn_core, seeding
from .nn_core import Batch, LayerSpec, MlpParams

HIDDEN_SIZES = (200, 100, 50, 100, 200)
ENCODER_LAYERS = 3
BOTTLENECK_DIM = HIDDEN_SIZES[ENCODER_LAYERS - 1]
DEFAULT_CORRUPTION_RATE = 0.2


@dataclass(frozen=True)
class AutoencoderSpec:
    """Fixed-architecture denoising autoencoder over binary features.

    Hidden layers are 200-100-50-100-200 ReLU units; the sigmoid output
    reconstructs each of the `input_dim` binary features. The encoder is
    the first three layers, the decoder the rest.
    """

    input_dim: int
    corruption_rate: float = DEFAULT_CORRUPTION_RATE

    def __post_init__(self):
        if self.input_dim <= BOTTLENECK_DIM:
            raise ValueError(
                f"input_dim must exceed the {BOTTLENECK_DIM}-dim bottleneck"
            )
        if not 0.0 <= self.corruption_rate < 1.0:
            raise ValueError("corruption_rate must lie in [0, 1)")

    def layer_specs(self) -> list[LayerSpec]:
        dims = (self.input_dim, *HIDDEN_SIZES, self.input_dim)
        specs = []
        for i, (d_in, d_out) in enumerate(zip(dims, dims[1:])):
            activation = "sigmoid" if i == len(dims) - 2 else "relu"
            specs.append(LayerSpec(d_in, d_out, activation))
        return specs

    def init_params(self, seed: int) -> MlpParams:
        return nn_core.init_params(self.layer_specs(), seed)


@dataclass
class EncoderModel:
    """The shared encoder (input -> 200 -> 100 -> 50, all ReLU)."""

    params: MlpParams
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.params.layers) != ENCODER_LAYERS:
            raise ValueError(
                f"encoder must have exactly {ENCODER_LAYERS} layers, "
                f"got {len(self.params.layers)}"
            )

    @property
    def output_dim(self) -> int:
        return self.params.output_dim


def corrupt(features, rate: float, seed: int) -> np.ndarray:
    """Masking noise: each entry is independently zeroed with probability
    `rate`. Targets stay the clean features; only the inputs are masked."""
    if not 0.0 <= rate < 1.0:
        raise ValueError("rate must lie in [0, 1)")
    x = np.asarray(features, dtype=np.float64)
    if rate == 0.0:
        return x.copy()
    rng = np.random.default_rng(seed)
    mask = rng.random(x.shape) >= rate
    return x * mask


def train_autoencoder_local(
    params: MlpParams,
    client_features,
    epochs: int,
    seed: int,
    batch_size: int = 64,
    corruption_rate: float = DEFAULT_CORRUPTION_RATE,
) -> MlpParams:
    """Local denoising training: reconstruct clean features from inputs
    that are re-masked with a fresh seed every epoch."""
    clean = np.asarray(client_features, dtype=np.float64)
    if clean.ndim != 2 or clean.shape[0] < 1:
        raise ValueError("client data must be a non-empty 2-d matrix")

    def corrupted_epoch(epoch: int) -> Batch:
        noisy = corrupt(
            clean, corruption_rate, seeding.derive_seed(seed, seeding.CORRUPTION, epoch)
        )
        return Batch(noisy, clean)

    return nn_core.train_local(
        params, corrupted_epoch, epochs=epochs, batch_size=batch_size, seed=seed
    )


def extract_encoder(autoencoder_params: MlpParams, provenance: dict | None = None) -> EncoderModel:
    """First three layers only; the decoder never leaves the client."""
    n_hidden_plus_out = len(HIDDEN_SIZES) + 1
    if len(autoencoder_params.layers) != n_hidden_plus_out:
        raise ValueError(
            f"expected {n_hidden_plus_out} layers, got {len(autoencoder_params.layers)}"
        )
    hidden_dims = tuple(l.spec.output_dim for l in autoencoder_params.layers[:-1])
    if hidden_dims != HIDDEN_SIZES:
        raise ValueError(f"hidden sizes {hidden_dims} != {HIDDEN_SIZES}")
    layers = [
        nn_core.LayerParams(l.weights.copy(), l.biases.copy(), l.spec)
        for l in autoencoder_params.layers[:ENCODER_LAYERS]
    ]
    return EncoderModel(MlpParams(layers), provenance=dict(provenance or {}))


def average_encoders(entries: list[tuple[EncoderModel, int]]) -> EncoderModel:
    """Size-weighted average of client encoders, reduced in list order.

    Weights are n_c / N. Computed in base-plus-delta form so averaging
    identical encoders returns them bit-exactly.
    """
    if not entries:
        raise ValueError("need at least one encoder")
    for _, n_c in entries:
        if n_c < 1:
            raise ValueError("client sizes must be >= 1")
    params = nn_core.weighted_mean_params(
        [enc.params for enc, _ in entries], [n_c for _, n_c in entries]
    )
    return EncoderModel(params, provenance={"clients": len(entries)})


def encode(encoder: EncoderModel, features) -> np.ndarray:
    """Bottleneck representations; (n, 50) for a matrix, (50,) for a vector."""
    x = np.asarray(features, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    out = nn_core.forward(encoder.params, x)[-1]
    return out[0] if single else out


def client_mean_encoding(encoder: EncoderModel, client_features) -> np.ndarray:
    """Mean of the client's example encodings — the only encoding-level
    payload a client ever uploads."""
    x = np.asarray(client_features, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError("client must have at least one example")
    return encode(encoder, x).mean(axis=0)
