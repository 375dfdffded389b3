"""Minimal dense feed-forward network engine.

Everything the federated simulator trains is a plain MLP: forward pass,
backprop of the binary cross-entropy loss, Adam updates, deterministic
initialization and a binary weight-file format. All math is float64 so
results can be checked against independent oracles (finite differences,
hand-rolled matrix products) at tight tolerances.
"""

from __future__ import annotations

import struct
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

ACTIVATIONS = ("relu", "sigmoid", "linear")
_ACT_CODE = {name: code for code, name in enumerate(ACTIVATIONS)}
_CODE_ACT = {code: name for name, code in _ACT_CODE.items()}

BCE_EPS = 1e-7

WEIGHT_MAGIC = b"CBFLW1"


class WeightFormatError(ValueError):
    """Raised when a serialized weight blob is truncated or corrupt."""


@dataclass(frozen=True)
class LayerSpec:
    """Shape and activation of one dense layer."""

    input_dim: int
    output_dim: int
    activation: str

    def __post_init__(self):
        if self.input_dim < 1 or self.output_dim < 1:
            raise ValueError(
                f"layer dims must be >= 1, got {self.input_dim}->{self.output_dim}"
            )
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")

    @property
    def parameter_count(self) -> int:
        return self.input_dim * self.output_dim + self.output_dim


def _layer_unchecked(weights: np.ndarray, biases: np.ndarray, spec: LayerSpec) -> "LayerParams":
    """Optimizer-internal constructor: shapes are known good, finiteness is
    re-checked at module boundaries (aggregation, serialization, training
    return) rather than on every Adam step."""
    layer = object.__new__(LayerParams)
    layer.weights = weights
    layer.biases = biases
    layer.spec = spec
    return layer


@dataclass
class LayerParams:
    """Weights [output_dim x input_dim], biases [output_dim] for one layer."""

    weights: np.ndarray
    biases: np.ndarray
    spec: LayerSpec

    def __post_init__(self):
        expected_w = (self.spec.output_dim, self.spec.input_dim)
        if self.weights.shape != expected_w:
            raise ValueError(
                f"weight shape {self.weights.shape} != spec shape {expected_w}"
            )
        if self.biases.shape != (self.spec.output_dim,):
            raise ValueError(
                f"bias shape {self.biases.shape} != ({self.spec.output_dim},)"
            )
        # single-reduction finiteness check: any NaN/Inf poisons the sum
        if not np.isfinite(self.weights.sum() + self.biases.sum()):
            raise ValueError("layer parameters contain NaN/Inf")


@dataclass
class MlpParams:
    """Ordered layer parameters of a dense network.

    Instances are treated as immutable snapshots: every operation that
    changes weights returns a new object, so params can be shared across
    threads freely.
    """

    layers: list[LayerParams]

    def __post_init__(self):
        if not self.layers:
            raise ValueError("network needs at least one layer")
        for prev, nxt in zip(self.layers, self.layers[1:]):
            if prev.spec.output_dim != nxt.spec.input_dim:
                raise ValueError(
                    f"layer chain broken: {prev.spec.output_dim} -> "
                    f"{nxt.spec.input_dim}"
                )

    @property
    def specs(self) -> list[LayerSpec]:
        return [layer.spec for layer in self.layers]

    @property
    def input_dim(self) -> int:
        return self.layers[0].spec.input_dim

    @property
    def output_dim(self) -> int:
        return self.layers[-1].spec.output_dim

    @property
    def parameter_count(self) -> int:
        return sum(spec.parameter_count for spec in self.specs)

    def copy(self) -> "MlpParams":
        return MlpParams(
            [
                LayerParams(l.weights.copy(), l.biases.copy(), l.spec)
                for l in self.layers
            ]
        )


@dataclass
class Batch:
    """Feature/target matrices for one training batch (values in [0, 1])."""

    features: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.targets = np.asarray(self.targets, dtype=np.float64)
        if self.features.ndim != 2 or self.targets.ndim != 2:
            raise ValueError("features and targets must be 2-d matrices")
        if self.features.shape[0] != self.targets.shape[0]:
            raise ValueError("features and targets disagree on batch size")
        if self.features.shape[0] < 1:
            raise ValueError("batch must contain at least one example")
        if np.isnan(self.features).any() or np.isnan(self.targets).any():
            raise ValueError("batch contains NaN entries")

    def __len__(self) -> int:
        return self.features.shape[0]


# A batch source is either a fixed dataset or a per-epoch factory (used by
# the denoising autoencoder to re-corrupt its inputs every epoch).
BatchSource = Batch | Callable[[int], Batch]

# Gradients mirror MlpParams layer by layer as (d_weights, d_biases) pairs.
Gradients = list[tuple[np.ndarray, np.ndarray]]


@dataclass
class AdamState:
    """Adam moment estimates; shapes mirror the tracked MlpParams."""

    first_moments: Gradients
    second_moments: Gradients
    timestep: int = 0
    eta: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def init_like(cls, params: MlpParams, eta: float = 1e-3) -> "AdamState":
        zeros = lambda: [
            (np.zeros_like(l.weights), np.zeros_like(l.biases)) for l in params.layers
        ]
        return cls(first_moments=zeros(), second_moments=zeros(), eta=eta)


def init_params(specs: list[LayerSpec], seed: int) -> MlpParams:
    """Glorot-uniform weights, zero biases; bit-reproducible per seed."""
    for prev, nxt in zip(specs, specs[1:]):
        if prev.output_dim != nxt.input_dim:
            raise ValueError(
                f"layer chain broken: {prev.output_dim} -> {nxt.input_dim}"
            )
    rng = np.random.default_rng(seed)
    layers = []
    for spec in specs:
        limit = np.sqrt(6.0 / (spec.input_dim + spec.output_dim))
        weights = rng.uniform(-limit, limit, size=(spec.output_dim, spec.input_dim))
        biases = np.zeros(spec.output_dim)
        layers.append(LayerParams(weights, biases, spec))
    return MlpParams(layers)


def _apply_activation(z: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return np.maximum(z, 0.0)
    if activation == "sigmoid":
        # stable: never exponentiate a large positive argument
        out = np.empty_like(z)
        pos = z >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        ez = np.exp(z[~pos])
        out[~pos] = ez / (1.0 + ez)
        return out
    return z


def forward(params: MlpParams, features: np.ndarray) -> list[np.ndarray]:
    """Run the network; returns activations of every layer (last = output)."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("features must be a 2-d matrix")
    if x.shape[1] != params.input_dim:
        raise ValueError(
            f"feature dim {x.shape[1]} != network input dim {params.input_dim}"
        )
    activations = []
    for layer in params.layers:
        z = x @ layer.weights.T + layer.biases
        x = _apply_activation(z, layer.spec.activation)
        activations.append(x)
    return activations


def predict(params: MlpParams, features: np.ndarray) -> np.ndarray:
    """Network output only (convenience wrapper around forward)."""
    return forward(params, features)[-1]


def bce_loss(predictions: np.ndarray, targets: np.ndarray) -> float:
    """Mean binary cross-entropy over all matrix elements.

    Predictions are clamped to [BCE_EPS, 1 - BCE_EPS] so a saturated
    output never produces log(0).
    """
    p = np.asarray(predictions, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if p.shape != t.shape:
        raise ValueError(f"prediction shape {p.shape} != target shape {t.shape}")
    p = np.clip(p, BCE_EPS, 1.0 - BCE_EPS)
    return float(np.mean(-(t * np.log(p) + (1.0 - t) * np.log1p(-p))))


def backward(params: MlpParams, batch: Batch) -> tuple[Gradients, float]:
    """Gradients of the mean BCE loss w.r.t. every weight and bias.

    The derivative honours the loss clamp: where a prediction falls outside
    [BCE_EPS, 1 - BCE_EPS] the clipped loss is locally constant, so the
    gradient contribution is zero. This keeps finite-difference checks of
    the implemented loss exact.
    """
    if batch.targets.shape[1] != params.output_dim:
        raise ValueError(
            f"target dim {batch.targets.shape[1]} != output dim {params.output_dim}"
        )
    return _backward_arrays(params, batch.features, batch.targets)


def _backward_arrays(params: MlpParams, features: np.ndarray, t: np.ndarray) -> tuple[Gradients, float]:
    activations = forward(params, features)
    preds = activations[-1]
    n_elements = preds.size

    inside = (preds > BCE_EPS) & (preds < 1.0 - BCE_EPS)
    denom = np.where(inside, preds * (1.0 - preds), 1.0)
    delta = np.where(inside, (preds - t) / denom, 0.0) / n_elements

    grads: Gradients = [None] * len(params.layers)  # type: ignore[list-item]
    for i in range(len(params.layers) - 1, -1, -1):
        layer = params.layers[i]
        out = activations[i]
        act = layer.spec.activation
        if act == "sigmoid":
            dz = delta * out * (1.0 - out)
        elif act == "relu":
            dz = delta * (out > 0.0)
        else:
            dz = delta
        inputs = activations[i - 1] if i > 0 else features
        grads[i] = (dz.T @ inputs, dz.sum(axis=0))
        if i > 0:
            delta = dz @ layer.weights
    return grads, bce_loss(preds, t)


def _check_grad_shapes(params: MlpParams, grads: Gradients) -> None:
    if len(grads) != len(params.layers):
        raise ValueError("gradient layer count != parameter layer count")
    for layer, (dw, db) in zip(params.layers, grads):
        if dw.shape != layer.weights.shape or db.shape != layer.biases.shape:
            raise ValueError("gradient shapes do not match parameters")


def adam_step(
    params: MlpParams, grads: Gradients, state: AdamState
) -> tuple[MlpParams, AdamState]:
    """One Adam update with bias correction; returns new params and state."""
    _check_grad_shapes(params, grads)
    _check_grad_shapes(params, state.first_moments)
    _check_grad_shapes(params, state.second_moments)
    t = state.timestep + 1
    b1, b2 = state.beta1, state.beta2
    corr1 = 1.0 - b1**t
    corr2 = 1.0 - b2**t
    new_layers = []
    new_m: Gradients = []
    new_v: Gradients = []

    def moment_update(decay, moment, grad_term):
        out = decay * moment
        out += (1.0 - decay) * grad_term
        return out

    def apply(value, m, v):
        step = np.sqrt(v / corr2)
        step += state.epsilon
        np.divide(m, step, out=step)
        step *= state.eta / corr1
        return value - step

    for layer, (dw, db), (mw, mb), (vw, vb) in zip(
        params.layers, grads, state.first_moments, state.second_moments
    ):
        mw = moment_update(b1, mw, dw)
        mb = moment_update(b1, mb, db)
        vw = moment_update(b2, vw, dw * dw)
        vb = moment_update(b2, vb, db * db)
        new_m.append((mw, mb))
        new_v.append((vw, vb))
        new_layers.append(
            _layer_unchecked(apply(layer.weights, mw, vw), apply(layer.biases, mb, vb), layer.spec)
        )
    new_state = AdamState(
        first_moments=new_m,
        second_moments=new_v,
        timestep=t,
        eta=state.eta,
        beta1=state.beta1,
        beta2=state.beta2,
        epsilon=state.epsilon,
    )
    return MlpParams(new_layers), new_state


def train_local(
    params: MlpParams,
    data: BatchSource,
    epochs: int,
    batch_size: int = 64,
    seed: int = 0,
    learning_rate: float = 1e-3,
) -> MlpParams:
    """Mini-batch Adam training over full passes of `data`.

    `data` may be a Batch or a callable epoch -> Batch (the latter lets the
    denoising autoencoder draw fresh corruption every epoch). Example order
    is reshuffled per epoch from the seeded generator; the final mini-batch
    of an epoch may be short. Adam state starts fresh on every call, so
    repeated calls with the same arguments are bit-identical.
    """
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    rng = np.random.default_rng(seed)
    state = AdamState.init_like(params, eta=learning_rate)
    for epoch in range(epochs):
        batch = data(epoch) if callable(data) else data
        if batch.targets.shape[1] != params.output_dim:
            raise ValueError(
                f"target dim {batch.targets.shape[1]} != output dim {params.output_dim}"
            )
        n = len(batch)
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            grads, _ = _backward_arrays(params, batch.features[idx], batch.targets[idx])
            params, state = adam_step(params, grads, state)
    for layer in params.layers:  # boundary finiteness check (divergence guard)
        if not np.isfinite(layer.weights.sum() + layer.biases.sum()):
            raise ValueError("training diverged: parameters contain NaN/Inf")
    return params


def train_local_stacked(
    models: list[MlpParams],
    data: Batch,
    epochs: int,
    batch_size: int = 64,
    seed: int = 0,
    learning_rate: float = 1e-3,
) -> list[MlpParams]:
    """Train several shape-identical networks on the same data in one pass.

    Every model sees the identical shuffled mini-batch stream (the seed
    drives one shared permutation per epoch); weights, activations and
    Adam moments carry a leading model axis so each step is a handful of
    stacked array ops instead of one pass per model. Up to floating-point
    op ordering this matches calling train_local per model with this seed.
    """
    if not models:
        raise ValueError("need at least one model")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    specs = models[0].specs
    for model in models[1:]:
        if model.specs != specs:
            raise ValueError("models must be shape-identical")
    if data.targets.shape[1] != specs[-1].output_dim:
        raise ValueError(
            f"target dim {data.targets.shape[1]} != output dim {specs[-1].output_dim}"
        )
    n_models = len(models)
    n_layers = len(specs)
    weights = [np.stack([m.layers[i].weights for m in models]) for i in range(n_layers)]
    biases = [np.stack([m.layers[i].biases for m in models]) for i in range(n_layers)]
    m_w = [np.zeros_like(w) for w in weights]
    v_w = [np.zeros_like(w) for w in weights]
    m_b = [np.zeros_like(b) for b in biases]
    v_b = [np.zeros_like(b) for b in biases]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    timestep = 0

    rng = np.random.default_rng(seed)
    n = len(data)
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            x = data.features[idx]
            t = data.targets[idx]
            b = x.shape[0]

            activations = []
            # input layer as one flat gemm over all models
            flat = x @ weights[0].reshape(n_models * specs[0].output_dim, specs[0].input_dim).T
            z = flat.reshape(b, n_models, specs[0].output_dim).transpose(1, 0, 2) + biases[0][:, None, :]
            a = _apply_activation(z, specs[0].activation)
            activations.append(a)
            for i in range(1, n_layers):
                z = a @ weights[i].transpose(0, 2, 1) + biases[i][:, None, :]
                a = _apply_activation(z, specs[i].activation)
                activations.append(a)

            preds = activations[-1]
            n_elements = b * specs[-1].output_dim  # per-model element count
            inside = (preds > BCE_EPS) & (preds < 1.0 - BCE_EPS)
            denom = np.where(inside, preds * (1.0 - preds), 1.0)
            delta = np.where(inside, (preds - t) / denom, 0.0) / n_elements

            grads_w: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
            grads_b: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
            for i in range(n_layers - 1, -1, -1):
                out = activations[i]
                act = specs[i].activation
                if act == "sigmoid":
                    dz = delta * out * (1.0 - out)
                elif act == "relu":
                    dz = delta * (out > 0.0)
                else:
                    dz = delta
                if i > 0:
                    grads_w[i] = dz.transpose(0, 2, 1) @ activations[i - 1]
                    delta = dz @ weights[i]
                else:
                    dz_flat = dz.transpose(1, 0, 2).reshape(b, n_models * specs[0].output_dim)
                    grads_w[0] = (dz_flat.T @ x).reshape(
                        n_models, specs[0].output_dim, specs[0].input_dim
                    )
                grads_b[i] = dz.sum(axis=1)

            timestep += 1
            corr1 = 1.0 - beta1**timestep
            corr2 = 1.0 - beta2**timestep
            for i in range(n_layers):
                for value, moments1, moments2, grad in (
                    (weights[i], m_w, v_w, grads_w[i]),
                    (biases[i], m_b, v_b, grads_b[i]),
                ):
                    moments1[i] *= beta1
                    moments1[i] += (1.0 - beta1) * grad
                    moments2[i] *= beta2
                    moments2[i] += (1.0 - beta2) * grad * grad
                    step = np.sqrt(moments2[i] / corr2)
                    step += eps
                    np.divide(moments1[i], step, out=step)
                    step /= corr1
                    value -= learning_rate * step

    results = []
    for k in range(n_models):
        layers = []
        for i, spec in enumerate(specs):
            w = weights[i][k].copy()
            bias = biases[i][k].copy()
            if not np.isfinite(w.sum() + bias.sum()):
                raise ValueError("training diverged: parameters contain NaN/Inf")
            layers.append(_layer_unchecked(w, bias, spec))
        results.append(MlpParams(layers))
    return results


def serialized_size(params: MlpParams) -> int:
    """Exact byte length serialize_params would produce, without allocating."""
    return (
        len(WEIGHT_MAGIC)
        + 4
        + sum(9 + 8 * spec.parameter_count for spec in params.specs)
    )


def serialize_params(params: MlpParams) -> bytes:
    """Weight file format: magic, u32 layer count, then per layer
    u32 input_dim, u32 output_dim, u8 activation code, row-major weights
    and biases as little-endian float64."""
    out = bytearray(WEIGHT_MAGIC)
    out += struct.pack("<I", len(params.layers))
    for layer in params.layers:
        spec = layer.spec
        out += struct.pack(
            "<IIB", spec.input_dim, spec.output_dim, _ACT_CODE[spec.activation]
        )
        out += np.ascontiguousarray(layer.weights, dtype="<f8").tobytes()
        out += np.ascontiguousarray(layer.biases, dtype="<f8").tobytes()
    return bytes(out)


def deserialize_params(data: bytes) -> MlpParams:
    """Inverse of serialize_params; raises WeightFormatError on bad input."""
    if len(data) < len(WEIGHT_MAGIC) + 4:
        raise WeightFormatError("weight blob too short for header")
    if data[: len(WEIGHT_MAGIC)] != WEIGHT_MAGIC:
        raise WeightFormatError("bad magic bytes")
    offset = len(WEIGHT_MAGIC)
    (n_layers,) = struct.unpack_from("<I", data, offset)
    offset += 4
    if n_layers == 0:
        raise WeightFormatError("zero layers")
    layers = []
    for _ in range(n_layers):
        if offset + 9 > len(data):
            raise WeightFormatError("truncated layer header")
        input_dim, output_dim, code = struct.unpack_from("<IIB", data, offset)
        offset += 9
        if code not in _CODE_ACT:
            raise WeightFormatError(f"unknown activation code {code}")
        if input_dim < 1 or output_dim < 1:
            raise WeightFormatError("layer dims must be >= 1")
        n_w = input_dim * output_dim
        n_bytes = 8 * (n_w + output_dim)
        if offset + n_bytes > len(data):
            raise WeightFormatError("truncated layer payload")
        flat = np.frombuffer(data, dtype="<f8", count=n_w + output_dim, offset=offset)
        offset += n_bytes
        spec = LayerSpec(input_dim, output_dim, _CODE_ACT[code])
        try:
            layers.append(
                LayerParams(
                    flat[:n_w].reshape(output_dim, input_dim).copy(),
                    flat[n_w:].copy(),
                    spec,
                )
            )
        except ValueError as exc:
            raise WeightFormatError(str(exc)) from exc
    if offset != len(data):
        raise WeightFormatError(f"{len(data) - offset} trailing bytes")
    try:
        return MlpParams(layers)
    except ValueError as exc:
        raise WeightFormatError(str(exc)) from exc


def save_params(params: MlpParams, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_params(params))


def load_params(path) -> MlpParams:
    with open(path, "rb") as fh:
        return deserialize_params(fh.read())


def weighted_mean_params(params_list: list[MlpParams], counts) -> MlpParams:
    """Count-weighted average sum(m_i * w_i) / sum(m_i) of parameter sets.

    Evaluated as w_0 + sum(lambda_i * (w_i - w_0)) with lambda_i =
    m_i / sum(m_i): mathematically the same convex combination, but exact
    when all inputs are equal (all deltas vanish), which the federation
    degeneracy identities rely on. Reduction runs in list order.
    """
    if not params_list:
        raise ValueError("nothing to average")
    counts = np.asarray(counts, dtype=np.float64)
    if counts.shape != (len(params_list),):
        raise ValueError("one count per parameter set required")
    if (counts < 0).any() or not np.isfinite(counts).all():
        raise ValueError("counts must be finite and non-negative")
    total = counts.sum()
    if total <= 0:
        raise ValueError("counts sum to zero")
    base = params_list[0]
    base_specs = base.specs
    for other in params_list[1:]:
        if other.specs != base_specs:
            raise ValueError("parameter sets have mismatched layer shapes")
    weights = counts / total
    acc = [(np.zeros_like(l.weights), np.zeros_like(l.biases)) for l in base.layers]
    for lam, candidate in zip(weights, params_list):
        if candidate is base:
            continue
        for (acc_w, acc_b), cand_l, base_l in zip(acc, candidate.layers, base.layers):
            acc_w += lam * (cand_l.weights - base_l.weights)
            acc_b += lam * (cand_l.biases - base_l.biases)
    layers = [
        LayerParams(base_l.weights + acc_w, base_l.biases + acc_b, base_l.spec)
        for base_l, (acc_w, acc_b) in zip(base.layers, acc)
    ]
    return MlpParams(layers)


def params_equal(a: MlpParams, b: MlpParams) -> bool:
    """Bit-exact equality of two parameter sets."""
    if len(a.layers) != len(b.layers):
        return False
    for la, lb in zip(a.layers, b.layers):
        if la.spec != lb.spec:
            return False
        if not (
            np.array_equal(la.weights, lb.weights)
            and np.array_equal(la.biases, lb.biases)
        ):
            return False
    return True
