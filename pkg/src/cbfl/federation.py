"""Simulated federated training: FedAvg, community-based learning, and a
centralized baseline, with exact communication accounting.

Message passing is simulated: every payload a real deployment would move
is logged with its exact serialized byte size, but nothing crosses a
network. Client work may fan out to a thread pool; aggregation always
reduces in client list order, so results are independent of scheduling.
"""

from __future__ import annotations

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import autoencoder, clustering, metrics, nn_core, seeding
from .autoencoder import AutoencoderSpec, EncoderModel
from .clustering import KMeansModel
from .nn_core import Batch, LayerSpec, MlpParams

logger = logging.getLogger(__name__)

# wire message kinds; raw features and decoder weights are never valid kinds
KIND_MODEL = "model_weights"
KIND_ENCODER = "encoder_weights"
KIND_INIT_SEED = "init_seed"
KIND_MEAN_ENCODING = "mean_encoding"
KIND_CENTROIDS = "kmeans_centroids"
KIND_COUNTS = "count_vector"
ALLOWED_KINDS = frozenset(
    {KIND_MODEL, KIND_ENCODER, KIND_INIT_SEED, KIND_MEAN_ENCODING, KIND_CENTROIDS, KIND_COUNTS}
)

TRAIN_ON_FULL = "full_client_data"
TRAIN_ON_SUBSET = "community_subset"

PHASE_ENCODER = "setup:encoder"
PHASE_CLUSTERING = "setup:clustering"
PHASE_ROUND = "round"

_VECTOR_HEADER_BYTES = 4  # u32 element count before little-endian payloads


@dataclass
class ClientState:
    """One hospital: local data plus the metadata the server may know."""

    client_id: int
    features: np.ndarray
    labels: np.ndarray
    region: str = ""

    def __post_init__(self):
        if self.client_id < 0:
            raise ValueError("client_id must be non-negative")
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.float64)
        if self.features.ndim != 2 or self.features.shape[0] < 1:
            raise ValueError("client features must be a non-empty 2-d matrix")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("labels must be one scalar target per example")

    @property
    def n_c(self) -> int:
        return self.features.shape[0]


@dataclass(frozen=True)
class FederationConfig:
    """Knobs shared by all arms; defaults follow the experimental setup."""

    E1: int = 5
    E2: int = 1
    K: int = 1
    batch_size: int = 64
    max_rounds: int = 200
    patience: int = 10
    min_delta: float = 1e-4
    seed: int = 0
    train_on: str = TRAIN_ON_FULL
    corruption_rate: float = autoencoder.DEFAULT_CORRUPTION_RATE
    n_workers: int = 1

    def __post_init__(self):
        for name in ("E1", "E2", "K", "max_rounds", "batch_size", "patience", "n_workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.min_delta < 0:
            raise ValueError("min_delta must be >= 0")
        if self.train_on not in (TRAIN_ON_FULL, TRAIN_ON_SUBSET):
            raise ValueError(f"unknown train_on {self.train_on!r}")
        if not 0.0 <= self.corruption_rate < 1.0:
            raise ValueError("corruption_rate must lie in [0, 1)")


@dataclass
class CbflBundle:
    """Everything needed for inference: encoder, communities, K models."""

    encoder: EncoderModel
    kmeans: KMeansModel
    community_models: list[MlpParams]

    def __post_init__(self):
        if len(self.community_models) != self.kmeans.n_clusters:
            raise ValueError("need exactly one model per community")
        specs = self.community_models[0].specs
        for model in self.community_models[1:]:
            if model.specs != specs:
                raise ValueError("community models must be shape-identical")


@dataclass(frozen=True)
class Message:
    """One simulated transfer between a client and the server."""

    direction: str  # "up" (client -> server) or "down"
    kind: str
    client_id: int
    model_id: int
    param_count: int
    byte_count: int

    def __post_init__(self):
        if self.direction not in ("up", "down"):
            raise ValueError("direction must be 'up' or 'down'")
        if self.kind not in ALLOWED_KINDS:
            raise ValueError(f"{self.kind!r} is not a permitted message kind")


@dataclass
class RoundLog:
    round_index: int
    phase: str
    arm: str
    metric: float | None
    per_model_metrics: dict[int, float | None]
    messages: list[Message]
    model_digests: list[str]
    notes: list[str] = field(default_factory=list)


def community_model_spec(input_dim: int) -> list[LayerSpec]:
    """The prediction network: input -> 20 -> 10 -> 5 ReLU, sigmoid scalar out."""
    return [
        LayerSpec(input_dim, 20, "relu"),
        LayerSpec(20, 10, "relu"),
        LayerSpec(10, 5, "relu"),
        LayerSpec(5, 1, "sigmoid"),
    ]


def clients_from_cohort(features, labels, hospital_ids, regions=None) -> list[ClientState]:
    """Group per-patient rows into one ClientState per hospital."""
    hospital_ids = np.asarray(hospital_ids)
    features = np.asarray(features)
    labels = np.asarray(labels)
    clients = []
    for hospital in np.unique(hospital_ids):
        idx = np.nonzero(hospital_ids == hospital)[0]
        region = ""
        if regions is not None:
            region = str(np.asarray(regions)[idx[0]])
        clients.append(
            ClientState(
                client_id=int(hospital),
                features=features[idx].astype(np.float64),
                labels=labels[idx].astype(np.float64),
                region=region,
            )
        )
    return clients


class _EarlyStopper:
    """Patience rule on an evaluation metric; tracks the best round.

    A round "improves" iff it beats the reference best by at least
    min_delta; training stops after `patience` consecutive rounds without
    improvement, or at max_rounds.
    """

    def __init__(self, config: FederationConfig):
        self.min_delta = config.min_delta
        self.patience = config.patience
        self.max_rounds = config.max_rounds
        self.best_metric = -np.inf
        self.best_round = 0
        self.rounds_seen = 0
        self.stall = 0

    def update(self, metric: float) -> tuple[bool, bool]:
        self.rounds_seen += 1
        improved = metric >= self.best_metric + self.min_delta or self.best_round == 0
        if improved:
            self.best_metric = metric
            self.best_round = self.rounds_seen
            self.stall = 0
        else:
            self.stall += 1
        should_stop = self.stall >= self.patience or self.rounds_seen >= self.max_rounds
        return improved, should_stop


def check_convergence(metric_history, config: FederationConfig) -> bool:
    """True when the patience/max-rounds rule fires on this history."""
    history = list(metric_history)
    if not history:
        raise ValueError("metric history must be non-empty")
    stopper = _EarlyStopper(config)
    stop = False
    for metric in history:
        _, stop = stopper.update(metric)
    return stop


def best_round_index(metric_history, config: FederationConfig) -> int:
    """1-based round whose model the run keeps (last >= min_delta improvement)."""
    history = list(metric_history)
    if not history:
        raise ValueError("metric history must be non-empty")
    stopper = _EarlyStopper(config)
    for metric in history:
        stopper.update(metric)
    return stopper.best_round


def _digest(params: MlpParams) -> str:
    return hashlib.sha256(nn_core.serialize_params(params)).hexdigest()


def _map_jobs(fn, jobs, n_workers: int) -> list:
    if n_workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(fn, jobs))


def _eval_arrays(eval_features, eval_labels) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(eval_features, dtype=np.float64)
    y = np.asarray(eval_labels, dtype=np.int64)
    if x.ndim != 2 or y.shape != (x.shape[0],):
        raise ValueError("evaluation set must be a feature matrix with 1-d labels")
    return x, y


def _check_clients(clients: list[ClientState]) -> list[ClientState]:
    """Validate and return clients in client-id order: every reduction in
    this module runs in that fixed order, so results do not depend on how
    the caller happened to order the list."""
    if not clients:
        raise ValueError("need at least one client")
    dim = clients[0].features.shape[1]
    for client in clients:
        if client.features.shape[1] != dim:
            raise ValueError("clients disagree on feature dimension")
    if len({c.client_id for c in clients}) != len(clients):
        raise ValueError("client ids must be unique")
    return sorted(clients, key=lambda c: c.client_id)


def run_fedavg(
    clients: list[ClientState],
    model_spec: list[LayerSpec],
    config: FederationConfig,
    eval_features,
    eval_labels,
) -> tuple[MlpParams, list[RoundLog]]:
    """Plain size-weighted federated averaging until convergence.

    Per round: broadcast the global weights, every client trains E2 local
    epochs, the server takes the n_c/N-weighted average. Returns the
    best-round snapshot and the full round log.
    """
    clients = _check_clients(clients)
    eval_x, eval_y = _eval_arrays(eval_features, eval_labels)
    weights = nn_core.init_params(model_spec, seeding.derive_seed(config.seed, seeding.MODEL_INIT, 0))
    param_count = weights.parameter_count
    byte_count = nn_core.serialized_size(weights)
    sizes = [client.n_c for client in clients]
    batches = [Batch(client.features, client.labels[:, None]) for client in clients]

    stopper = _EarlyStopper(config)
    best_weights = weights
    logs: list[RoundLog] = []
    for round_index in range(1, config.max_rounds + 1):
        msgs = [
            Message("down", KIND_MODEL, client.client_id, 0, param_count, byte_count)
            for client in clients
        ]
        jobs = [
            (batches[i], seeding.derive_seed(config.seed, seeding.LOCAL_TRAIN, round_index, client.client_id))
            for i, client in enumerate(clients)
        ]
        local_updates = _map_jobs(
            lambda job: nn_core.train_local(
                weights, job[0], epochs=config.E2, batch_size=config.batch_size, seed=job[1]
            ),
            jobs,
            config.n_workers,
        )
        msgs += [
            Message("up", KIND_MODEL, client.client_id, 0, param_count, byte_count)
            for client in clients
        ]
        weights = nn_core.weighted_mean_params(local_updates, sizes)
        metric = metrics.roc_auc(nn_core.predict(weights, eval_x)[:, 0], eval_y)
        improved, stop = stopper.update(metric)
        if improved:
            best_weights = weights
        logs.append(
            RoundLog(
                round_index=round_index,
                phase=PHASE_ROUND,
                arm="fl",
                metric=metric,
                per_model_metrics={0: metric},
                messages=msgs,
                model_digests=[_digest(weights)],
            )
        )
        if stop:
            break
    return best_weights, logs


def federated_encoder_round(
    clients: list[ClientState], config: FederationConfig
) -> tuple[EncoderModel, list[RoundLog]]:
    """One federated round of denoising-autoencoder training.

    Clients rebuild the shared initial autoencoder from a broadcast seed,
    train locally for E1 epochs, and upload encoder layers only; the
    size-weighted average encoder is then broadcast back. The decoder never
    leaves any client.
    """
    clients = _check_clients(clients)
    dim = clients[0].features.shape[1]
    spec = AutoencoderSpec(dim, config.corruption_rate)
    init_weights = spec.init_params(seeding.derive_seed(config.seed, seeding.AUTOENCODER_INIT))

    msgs = [Message("down", KIND_INIT_SEED, c.client_id, 0, 0, 8) for c in clients]
    jobs = [
        (client.features, seeding.derive_seed(config.seed, seeding.AUTOENCODER_TRAIN, client.client_id))
        for client in clients
    ]
    trained = _map_jobs(
        lambda job: autoencoder.train_autoencoder_local(
            init_weights,
            job[0],
            epochs=config.E1,
            seed=job[1],
            batch_size=config.batch_size,
            corruption_rate=config.corruption_rate,
        ),
        jobs,
        config.n_workers,
    )
    encoders = [autoencoder.extract_encoder(params) for params in trained]
    enc_params = encoders[0].params.parameter_count
    enc_bytes = nn_core.serialized_size(encoders[0].params)
    msgs += [Message("up", KIND_ENCODER, c.client_id, 0, enc_params, enc_bytes) for c in clients]
    averaged = autoencoder.average_encoders(
        [(enc, client.n_c) for enc, client in zip(encoders, clients)]
    )
    averaged.provenance.update({"seed": config.seed, "round": 0})
    msgs += [Message("down", KIND_ENCODER, c.client_id, 0, enc_params, enc_bytes) for c in clients]
    log = RoundLog(
        round_index=0,
        phase=PHASE_ENCODER,
        arm="cbfl",
        metric=None,
        per_model_metrics={},
        messages=msgs,
        model_digests=[_digest(averaged.params)],
    )
    return averaged, [log]


def run_cbfl(
    clients: list[ClientState],
    config: FederationConfig,
    eval_features,
    eval_labels,
    model_spec: list[LayerSpec] | None = None,
    encoder_round: tuple[EncoderModel, list[RoundLog]] | None = None,
) -> tuple[CbflBundle, list[RoundLog]]:
    """Community-based federated learning, end to end.

    Setup: one federated encoder round, then k-means on per-client mean
    encodings. Community learning: every client trains every one of the K
    models for E2 epochs and uploads them with its community counts; the
    server takes the count-weighted average per model. `encoder_round` may
    carry a precomputed result of federated_encoder_round(clients, config)
    (it is bit-identical to recomputing; callers sharing one encoder across
    several K values avoid redundant work).
    """
    clients = _check_clients(clients)
    dim = clients[0].features.shape[1]
    if config.K > len(clients):
        raise ValueError("K must not exceed the number of clients")
    eval_x, eval_y = _eval_arrays(eval_features, eval_labels)
    if model_spec is None:
        model_spec = community_model_spec(dim)

    encoder, logs = encoder_round if encoder_round is not None else federated_encoder_round(clients, config)
    logs = list(logs)
    k_communities = config.K

    # clustering phase: clients upload mean encodings, server fits k-means,
    # centroids are broadcast so clients can assign their own examples
    client_means = np.stack(
        [autoencoder.client_mean_encoding(encoder, c.features) for c in clients]
    )
    mean_bytes = _VECTOR_HEADER_BYTES + 8 * client_means.shape[1]
    msgs = [Message("up", KIND_MEAN_ENCODING, c.client_id, 0, 0, mean_bytes) for c in clients]
    kmeans = clustering.fit_kmeans(
        client_means, k_communities, seeding.derive_seed(config.seed, seeding.KMEANS)
    )
    centroid_params = kmeans.centroids.size
    centroid_bytes = _VECTOR_HEADER_BYTES + 8 * kmeans.centroids.size
    msgs += [
        Message("down", KIND_CENTROIDS, c.client_id, 0, centroid_params, centroid_bytes)
        for c in clients
    ]
    logs.append(
        RoundLog(
            round_index=0,
            phase=PHASE_CLUSTERING,
            arm="cbfl",
            metric=None,
            per_model_metrics={},
            messages=msgs,
            model_digests=[],
        )
    )

    # fixed for the whole community-learning phase: encoder and centroids
    # do not change, so per-client assignments and counts are cached
    client_assignments = [
        clustering.assign_many(kmeans, autoencoder.encode(encoder, c.features)) for c in clients
    ]
    counts = np.stack(
        [np.bincount(a, minlength=k_communities) for a in client_assignments]
    ).astype(np.int64)
    count_bytes = _VECTOR_HEADER_BYTES + 8 * k_communities

    eval_assign = clustering.assign_many(kmeans, autoencoder.encode(encoder, eval_x))
    eval_groups = [np.nonzero(eval_assign == k)[0] for k in range(k_communities)]

    batches = [Batch(c.features, c.labels[:, None]) for c in clients]
    subset_batches: list[list[Batch | None]] = []
    if config.train_on == TRAIN_ON_SUBSET:
        for i, client in enumerate(clients):
            per_k: list[Batch | None] = []
            for k in range(k_communities):
                idx = np.nonzero(client_assignments[i] == k)[0]
                per_k.append(
                    Batch(client.features[idx], client.labels[idx, None]) if idx.size else None
                )
            subset_batches.append(per_k)

    init_seed = seeding.derive_seed(config.seed, seeding.MODEL_INIT, 0)
    shared_init = nn_core.init_params(model_spec, init_seed)
    models: list[MlpParams] = [shared_init] * k_communities
    param_count = shared_init.parameter_count
    byte_count = nn_core.serialized_size(shared_init)

    stopper = _EarlyStopper(config)
    best_models = list(models)
    for round_index in range(1, config.max_rounds + 1):
        msgs = [
            Message("down", KIND_MODEL, c.client_id, k, param_count, byte_count)
            for k in range(k_communities)
            for c in clients
        ]
        # every model sees the same shuffled stream of a client's data, so
        # one stacked pass per client trains all K models; K=1 keeps the
        # plain path, making the FedAvg degeneracy identity bit-exact
        train_seeds = [
            seeding.derive_seed(config.seed, seeding.LOCAL_TRAIN, round_index, c.client_id)
            for c in clients
        ]
        if config.train_on == TRAIN_ON_FULL and k_communities > 1:
            per_client = _map_jobs(
                lambda i: nn_core.train_local_stacked(
                    models,
                    batches[i],
                    epochs=config.E2,
                    batch_size=config.batch_size,
                    seed=train_seeds[i],
                ),
                range(len(clients)),
                config.n_workers,
            )
            updates = [
                [per_client[i][k] for i in range(len(clients))] for k in range(k_communities)
            ]
        else:
            tasks = []
            for k in range(k_communities):
                for i in range(len(clients)):
                    if config.train_on == TRAIN_ON_SUBSET:
                        batch = subset_batches[i][k]
                    else:
                        batch = batches[i]
                    tasks.append((k, batch, train_seeds[i]))

            def train_task(task):
                k, batch, seed = task
                if batch is None:
                    return models[k]  # nothing assigned here; upload unchanged
                return nn_core.train_local(
                    models[k], batch, epochs=config.E2, batch_size=config.batch_size, seed=seed
                )

            results = _map_jobs(train_task, tasks, config.n_workers)
            updates = [
                results[k * len(clients) : (k + 1) * len(clients)] for k in range(k_communities)
            ]
        msgs += [
            Message("up", KIND_MODEL, c.client_id, k, param_count, byte_count)
            for k in range(k_communities)
            for c in clients
        ]
        msgs += [Message("up", KIND_COUNTS, c.client_id, 0, 0, count_bytes) for c in clients]

        notes: list[str] = []
        new_models = []
        for k in range(k_communities):
            total = int(counts[:, k].sum())
            if total == 0:
                logger.warning("community %d has no members; carrying weights forward", k)
                notes.append(f"community {k} empty; weights carried forward")
                new_models.append(models[k])
            else:
                new_models.append(nn_core.weighted_mean_params(updates[k], counts[:, k]))
        models = new_models

        scores = np.empty(eval_x.shape[0])
        per_model: dict[int, float | None] = {}
        for k in range(k_communities):
            idx = eval_groups[k]
            if idx.size:
                scores[idx] = nn_core.predict(models[k], eval_x[idx])[:, 0]
                try:
                    per_model[k] = metrics.roc_auc(scores[idx], eval_y[idx])
                except ValueError:
                    per_model[k] = None
            else:
                per_model[k] = None
        metric = metrics.roc_auc(scores, eval_y)
        improved, stop = stopper.update(metric)
        if improved:
            best_models = list(models)
        logs.append(
            RoundLog(
                round_index=round_index,
                phase=PHASE_ROUND,
                arm="cbfl",
                metric=metric,
                per_model_metrics=per_model,
                messages=msgs,
                model_digests=[_digest(m) for m in models],
                notes=notes,
            )
        )
        if stop:
            break
    bundle = CbflBundle(encoder=encoder, kmeans=kmeans, community_models=best_models)
    return bundle, logs


def run_centralized(
    clients: list[ClientState],
    model_spec: list[LayerSpec],
    config: FederationConfig,
    eval_features,
    eval_labels,
) -> tuple[MlpParams, list[RoundLog]]:
    """Pool all client data on one machine and train to the same stopping
    rule, evaluated per epoch. No communication is ledgered."""
    clients = _check_clients(clients)
    eval_x, eval_y = _eval_arrays(eval_features, eval_labels)
    pooled = Batch(
        np.vstack([c.features for c in clients]),
        np.concatenate([c.labels for c in clients])[:, None],
    )
    weights = nn_core.init_params(model_spec, seeding.derive_seed(config.seed, seeding.MODEL_INIT, 0))
    stopper = _EarlyStopper(config)
    best_weights = weights
    logs: list[RoundLog] = []
    for epoch in range(1, config.max_rounds + 1):
        weights = nn_core.train_local(
            weights,
            pooled,
            epochs=1,
            batch_size=config.batch_size,
            seed=seeding.derive_seed(config.seed, seeding.CENTRALIZED_TRAIN, epoch),
        )
        metric = metrics.roc_auc(nn_core.predict(weights, eval_x)[:, 0], eval_y)
        improved, stop = stopper.update(metric)
        if improved:
            best_weights = weights
        logs.append(
            RoundLog(
                round_index=epoch,
                phase=PHASE_ROUND,
                arm="centralized",
                metric=metric,
                per_model_metrics={0: metric},
                messages=[],
                model_digests=[_digest(weights)],
            )
        )
        if stop:
            break
    return best_weights, logs


def predict_detailed(bundle: CbflBundle, features) -> tuple[np.ndarray, np.ndarray]:
    """(scores, community indices) for a feature matrix."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("features must be a 2-d matrix")
    encodings = autoencoder.encode(bundle.encoder, x)
    communities = clustering.assign_many(bundle.kmeans, encodings)
    scores = np.empty(x.shape[0])
    for k in range(bundle.kmeans.n_clusters):
        idx = np.nonzero(communities == k)[0]
        if idx.size:
            scores[idx] = nn_core.predict(bundle.community_models[k], x[idx])[:, 0]
    return scores, communities


def predict(bundle: CbflBundle, features) -> np.ndarray | float:
    """Route each example through its community's model: encode, assign,
    forward. A single feature vector yields a scalar probability."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim == 1:
        scores, _ = predict_detailed(bundle, x[None, :])
        return float(scores[0])
    scores, _ = predict_detailed(bundle, x)
    return scores


@dataclass
class TrafficTotals:
    params_up: int = 0
    params_down: int = 0
    bytes_up: int = 0
    bytes_down: int = 0
    model_params_up: int = 0
    model_params_down: int = 0

    def add(self, message: Message) -> None:
        if message.direction == "up":
            self.params_up += message.param_count
            self.bytes_up += message.byte_count
            if message.kind == KIND_MODEL:
                self.model_params_up += message.param_count
        else:
            self.params_down += message.param_count
            self.bytes_down += message.byte_count
            if message.kind == KIND_MODEL:
                self.model_params_down += message.param_count


@dataclass
class LedgerReport:
    arm: str
    training_rounds: int
    setup: TrafficTotals
    rounds: TrafficTotals
    total: TrafficTotals
    model_params_per_round: float
    kinds_seen: frozenset[str]

    def as_dict(self) -> dict:
        def totals(t: TrafficTotals) -> dict:
            return {
                "params_up": t.params_up,
                "params_down": t.params_down,
                "bytes_up": t.bytes_up,
                "bytes_down": t.bytes_down,
                "model_params_up": t.model_params_up,
                "model_params_down": t.model_params_down,
            }

        return {
            "arm": self.arm,
            "training_rounds": self.training_rounds,
            "setup": totals(self.setup),
            "rounds": totals(self.rounds),
            "total": totals(self.total),
            "model_params_per_round": self.model_params_per_round,
            "kinds_seen": sorted(self.kinds_seen),
        }


def ledger_report(logs: list[RoundLog]) -> LedgerReport:
    """Exact traffic sums for one completed run, with setup (encoder and
    clustering exchanges) reported separately from training rounds."""
    setup = TrafficTotals()
    rounds = TrafficTotals()
    total = TrafficTotals()
    kinds: set[str] = set()
    n_rounds = 0
    arm = logs[0].arm if logs else ""
    for log in logs:
        bucket = rounds if log.phase == PHASE_ROUND else setup
        if log.phase == PHASE_ROUND:
            n_rounds += 1
        for message in log.messages:
            kinds.add(message.kind)
            bucket.add(message)
            total.add(message)
    model_params = rounds.model_params_up + rounds.model_params_down
    per_round = model_params / n_rounds if n_rounds else 0.0
    return LedgerReport(
        arm=arm,
        training_rounds=n_rounds,
        setup=setup,
        rounds=rounds,
        total=total,
        model_params_per_round=per_round,
        kinds_seen=frozenset(kinds),
    )
