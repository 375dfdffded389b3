"""Synthetic non-IID hospital cohorts and the two train/test split protocols.

The generator is a stand-in for a restricted multi-hospital ICU extract:
hospitals belong to latent groups, each group has its own drug-prevalence
profile, diagnosis mix, region bias and outcome model, so the clustering
stage has recoverable structure. The CSV schema doubles as the ingestion
path for real extracts shaped the same way.
"""

from __future__ import annotations

import csv
import statistics as _statistics
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import seeding

REGIONS = ("Midwest", "South", "West", "Northeast", "Unknown")

DIAGNOSIS_CATEGORIES = (
    "burns/trauma",
    "cardiovascular",
    "endocrine",
    "gastrointestinal",
    "general",
    "hematology",
    "infectious diseases",
    "musculoskeletal",
    "neurologic",
    "obstetrics/gynecology",
    "oncology",
    "pulmonary",
    "renal",
    "toxicology",
    "transplant",
    "surgery",
)

PROLONGED_STAY_MINUTES = 8 * 24 * 60  # eight days
MEAN_STAY_MINUTES = 3858.0

_CSV_PREFIX = ("patient_id", "hospital_id", "region", "mortality", "unit_stay_minutes", "diagnoses")


class CohortCsvError(ValueError):
    """Raised on schema violations while reading a cohort CSV."""


@dataclass(frozen=True)
class GeneratorConfig:
    n_hospitals: int = 50
    patients_per_hospital: int = 560
    n_latent_groups: int = 5
    n_features: int = 1399
    mortality_rate: float = 0.05
    prolonged_stay_rate: float = 0.06
    seed: int = 0

    def __post_init__(self):
        if self.n_hospitals < 1 or self.patients_per_hospital < 1:
            raise ValueError("need at least one hospital and one patient")
        if not 1 <= self.n_latent_groups <= self.n_hospitals:
            raise ValueError("n_latent_groups must lie in [1, n_hospitals]")
        if self.n_features < 1:
            raise ValueError("n_features must be >= 1")
        for rate in (self.mortality_rate, self.prolonged_stay_rate):
            if not 0.0 < rate < 1.0:
                raise ValueError("rates must lie in (0, 1)")


@dataclass
class CohortDataset:
    """Column-oriented patient table; one row per ICU stay."""

    patient_ids: np.ndarray
    hospital_ids: np.ndarray
    regions: np.ndarray
    features: np.ndarray
    mortality: np.ndarray
    unit_stay_minutes: np.ndarray
    diagnoses: list[tuple[str, ...]]

    def __post_init__(self):
        n = self.features.shape[0]
        for name in ("patient_ids", "hospital_ids", "regions", "mortality", "unit_stay_minutes"):
            if getattr(self, name).shape[0] != n:
                raise ValueError(f"{name} length != number of patients")
        if len(self.diagnoses) != n:
            raise ValueError("diagnoses length != number of patients")
        if self.features.ndim != 2:
            raise ValueError("features must be 2-d")
        if ((self.features != 0) & (self.features != 1)).any():
            raise ValueError("features must be strictly binary")
        if ((self.mortality != 0) & (self.mortality != 1)).any():
            raise ValueError("mortality labels must be 0/1")
        if (self.unit_stay_minutes < 0).any():
            raise ValueError("stay minutes must be >= 0")

    @property
    def n_patients(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def hospital_list(self) -> np.ndarray:
        return np.unique(self.hospital_ids)

    def indices_of_hospital(self, hospital_id: int) -> np.ndarray:
        return np.nonzero(self.hospital_ids == hospital_id)[0]

    def subset(self, indices) -> "CohortDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return CohortDataset(
            patient_ids=self.patient_ids[idx],
            hospital_ids=self.hospital_ids[idx],
            regions=self.regions[idx],
            features=self.features[idx],
            mortality=self.mortality[idx],
            unit_stay_minutes=self.unit_stay_minutes[idx],
            diagnoses=[self.diagnoses[i] for i in idx],
        )


def task_labels(dataset: CohortDataset, task: str) -> np.ndarray:
    """Binary targets for a prediction task: mortality or prolonged stay."""
    if task == "mortality":
        return dataset.mortality.astype(np.int64)
    if task == "stay_time":
        return label_prolonged_stay(dataset.unit_stay_minutes)
    raise ValueError(f"unknown task {task!r}")


def label_prolonged_stay(unit_stay_minutes):
    """1 iff the ICU stay lasted at least eight days (11,520 minutes)."""
    minutes = np.asarray(unit_stay_minutes, dtype=np.float64)
    if (minutes < 0).any():
        raise ValueError("stay minutes must be >= 0")
    labels = (minutes >= PROLONGED_STAY_MINUTES).astype(np.int64)
    return int(labels) if np.isscalar(unit_stay_minutes) or minutes.ndim == 0 else labels


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _calibrate_shift(rate_at_shift, target: float, lo: float = -80.0, hi: float = 80.0) -> float:
    """Bisect a scalar shift so that rate_at_shift(shift) hits the target.

    rate_at_shift must be non-decreasing in the shift. Calibrating against
    the already-drawn noise makes the realized label rates land within one
    patient of the configured targets.
    """
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if rate_at_shift(mid) < target:
            lo = mid
        else:
            hi = mid
    return hi


# Generator shape constants. Signature-block prevalence sits far above the
# base rate so cross-group profiles are always farther (L1) than
# within-group ones (hospitals in one group share the group profile). The
# common block is prescribed everywhere at moderate rates; its risk weights
# carry a shared part (learnable by every arm from the first rounds) and a
# group-specific deviation (the non-IID conflict a single global model has
# to untangle).
_BASE_PREV_RANGE = (0.002, 0.02)
_SIGNATURE_PREV_RANGE = (0.10, 0.35)
_COMMON_BLOCK_SIZE = 40
_COMMON_PREV_RANGE = (0.15, 0.50)
_COMMON_SHARED_SCALE = 0.35
_COMMON_GROUP_SCALE = 0.35
_SIGNATURE_RISK_SCALE = 0.20
_GROUP_OFFSET_SCALE = 0.30
_STAY_SHARE_OF_RISK = 0.5
_STAY_GROUP_SCALE = 0.20
_TAG_BOOST = 8.0
_TAGS_PER_GROUP = 3


def _block_layout(config: GeneratorConfig) -> tuple[int, list[slice], slice]:
    """Feature layout: one signature block per group, then a common block."""
    dim = config.n_features
    n_groups = config.n_latent_groups
    signature_size = max(1, (dim - min(_COMMON_BLOCK_SIZE, dim // 4)) // (2 * n_groups))
    signature_slices = [
        slice(g * signature_size, (g + 1) * signature_size) for g in range(n_groups)
    ]
    common_start = n_groups * signature_size
    common_end = min(common_start + _COMMON_BLOCK_SIZE, dim)
    return signature_size, signature_slices, slice(common_start, common_end)


def latent_group_profiles(config: GeneratorConfig) -> tuple[np.ndarray, np.ndarray]:
    """(group of each hospital, per-group drug prevalence profiles).

    Hospitals in one latent group share the group's profile exactly; each
    group boosts its own signature block of drugs well above base
    prevalence, and every group prescribes the common block at the same
    moderate rates. Deterministic per config.seed and reproduced verbatim
    by generate_cohort.
    """
    rng = np.random.default_rng(seeding.derive_seed(config.seed, seeding.DATAGEN, 1))
    n_groups = config.n_latent_groups
    dim = config.n_features
    group_of_hospital = rng.permutation(np.arange(config.n_hospitals) % n_groups)
    base_prev = rng.uniform(*_BASE_PREV_RANGE, size=dim)
    signature_size, signature_slices, common = _block_layout(config)
    group_prev = np.tile(base_prev, (n_groups, 1))
    for g in range(n_groups):
        group_prev[g, signature_slices[g]] = rng.uniform(
            *_SIGNATURE_PREV_RANGE, size=signature_size
        )
    group_prev[:, common] = rng.uniform(
        *_COMMON_PREV_RANGE, size=common.stop - common.start
    )
    return group_of_hospital, group_prev


def hospital_prevalence_profiles(config: GeneratorConfig) -> np.ndarray:
    """Per-hospital drug prevalence vectors (n_hospitals x n_features)."""
    group_of_hospital, group_prev = latent_group_profiles(config)
    return group_prev[group_of_hospital]


def generate_cohort(config: GeneratorConfig) -> CohortDataset:
    """Draw a full synthetic cohort; bit-reproducible per config.seed."""
    rng = np.random.default_rng(seeding.derive_seed(config.seed, seeding.DATAGEN, 2))
    n_hosp = config.n_hospitals
    per_hosp = config.patients_per_hospital
    n_groups = config.n_latent_groups
    dim = config.n_features
    n_total = n_hosp * per_hosp

    group_of_hospital, group_prev = latent_group_profiles(config)
    signature_size, signature_slices, common = _block_layout(config)
    common_size = common.stop - common.start

    # outcome model: shared weights on the common drugs (every arm can learn
    # these immediately), group-specific deviations on the same drugs (the
    # conflict a single global model must untangle), group-specific weights
    # on the group's signature drugs, and a group severity offset
    beta_shared = np.zeros(dim)
    beta_shared[common] = rng.normal(0.0, _COMMON_SHARED_SCALE, size=common_size)
    beta_group = np.zeros((n_groups, dim))
    for g in range(n_groups):
        beta_group[g, common] = rng.normal(0.0, _COMMON_GROUP_SCALE, size=common_size)
        beta_group[g, signature_slices[g]] = rng.normal(
            0.0, _SIGNATURE_RISK_SCALE, size=signature_size
        )
    group_offset = rng.normal(0.0, _GROUP_OFFSET_SCALE, size=n_groups)

    gamma_shared = np.zeros(dim)
    gamma_shared[common] = rng.normal(0.0, _COMMON_SHARED_SCALE, size=common_size)
    gamma_group = np.zeros((n_groups, dim))
    for g in range(n_groups):
        gamma_group[g, common] = rng.normal(0.0, _COMMON_GROUP_SCALE, size=common_size)
        gamma_group[g, signature_slices[g]] = rng.normal(
            0.0, _STAY_GROUP_SCALE, size=signature_size
        )
    stay_offset = rng.normal(0.0, _GROUP_OFFSET_SCALE, size=n_groups)

    # each group leans on one named region; "Unknown" stays rare everywhere
    group_region_probs = np.zeros((n_groups, len(REGIONS)))
    for g in range(n_groups):
        probs = np.full(len(REGIONS), 0.30 / (len(REGIONS) - 2))
        probs[-1] = 0.05
        probs[g % (len(REGIONS) - 1)] = 0.65
        group_region_probs[g] = probs / probs.sum()

    tag_probs = np.zeros((n_groups, len(DIAGNOSIS_CATEGORIES)))
    for g in range(n_groups):
        alphas = np.ones(len(DIAGNOSIS_CATEGORIES))
        for j in range(_TAGS_PER_GROUP):
            alphas[(g * _TAGS_PER_GROUP + j) % len(DIAGNOSIS_CATEGORIES)] += _TAG_BOOST
        tag_probs[g] = rng.dirichlet(alphas)

    features = np.empty((n_total, dim), dtype=np.uint8)
    hospital_ids = np.repeat(np.arange(n_hosp), per_hosp)
    regions_by_hospital = np.array(
        [rng.choice(REGIONS, p=group_region_probs[g]) for g in group_of_hospital]
    )
    for h in range(n_hosp):
        prevalence = group_prev[group_of_hospital[h]]
        rows = slice(h * per_hosp, (h + 1) * per_hosp)
        features[rows] = rng.random((per_hosp, dim)) < prevalence

    group_of_patient = group_of_hospital[hospital_ids]
    x = features.astype(np.float64)
    risk_raw = (
        x @ beta_shared
        + np.einsum("ij,ij->i", x, beta_group[group_of_patient])
        + group_offset[group_of_patient]
    )
    mortality_u = rng.random(n_total)
    shift = _calibrate_shift(
        lambda c: float(np.mean(mortality_u < _sigmoid(risk_raw + c))),
        config.mortality_rate,
    )
    mortality = (mortality_u < _sigmoid(risk_raw + shift)).astype(np.int64)

    stay_raw = (
        _STAY_SHARE_OF_RISK * (risk_raw - risk_raw.mean())
        + x @ gamma_shared
        + np.einsum("ij,ij->i", x, gamma_group[group_of_patient])
        + stay_offset[group_of_patient]
    )
    stay_score = (stay_raw - stay_raw.mean()) / max(float(stay_raw.std()), 1e-12)
    sigma, mu_base = _lognormal_stay_parameters()
    mu = mu_base + 0.35 * sigma * stay_score
    stay_noise = sigma * rng.standard_normal(n_total)
    log_threshold = np.log(PROLONGED_STAY_MINUTES)
    stay_shift = _calibrate_shift(
        lambda d: float(np.mean(mu + stay_noise + d >= log_threshold)),
        config.prolonged_stay_rate,
    )
    minutes = np.exp(mu + stay_shift + stay_noise)

    diagnoses: list[tuple[str, ...]] = []
    n_cats = len(DIAGNOSIS_CATEGORIES)
    for i in range(n_total):
        n_tags = int(rng.integers(1, min(4, n_cats + 1)))
        picks = rng.choice(n_cats, size=n_tags, replace=False, p=tag_probs[group_of_patient[i]])
        diagnoses.append(tuple(sorted(DIAGNOSIS_CATEGORIES[j] for j in picks)))

    return CohortDataset(
        patient_ids=np.arange(n_total, dtype=np.int64),
        hospital_ids=hospital_ids,
        regions=regions_by_hospital[hospital_ids],
        features=features,
        mortality=mortality,
        unit_stay_minutes=minutes,
        diagnoses=diagnoses,
    )


def _lognormal_stay_parameters() -> tuple[float, float]:
    """(sigma, mu) of a log-normal with the target mean stay and the target
    prolonged-stay tail mass. Smaller sigma root keeps the tail sane."""
    z_tail = _statistics.NormalDist().inv_cdf(1.0 - 0.06)
    log_thresh = np.log(PROLONGED_STAY_MINUTES)
    log_mean = np.log(MEAN_STAY_MINUTES)
    # mu + sigma^2/2 = log_mean and mu + z*sigma = log_thresh
    b = -2.0 * z_tail
    c = 2.0 * (log_thresh - log_mean)
    sigma = (-b - np.sqrt(b * b - 4.0 * c)) / 2.0
    mu = log_thresh - z_tail * sigma
    return float(sigma), float(mu)


def split_within_hospital(
    dataset: CohortDataset, train_per: int = 400, test_per: int = 160, seed: int = 0
) -> tuple[CohortDataset, CohortDataset]:
    """Disjoint per-hospital random split; every hospital appears in both."""
    if train_per < 1 or test_per < 1:
        raise ValueError("train_per and test_per must be >= 1")
    rng = np.random.default_rng(seeding.derive_seed(seed, seeding.SPLIT, 0))
    train_idx: list[np.ndarray] = []
    test_idx: list[np.ndarray] = []
    for hospital in dataset.hospital_list():
        members = dataset.indices_of_hospital(int(hospital))
        if members.size < train_per + test_per:
            raise ValueError(
                f"hospital {hospital} has {members.size} patients, "
                f"needs >= {train_per + test_per}"
            )
        order = rng.permutation(members.size)
        train_idx.append(members[order[:train_per]])
        test_idx.append(members[order[train_per : train_per + test_per]])
    train = np.sort(np.concatenate(train_idx))
    test = np.sort(np.concatenate(test_idx))
    return dataset.subset(train), dataset.subset(test)


def split_by_hospital(
    dataset: CohortDataset, n_train_hospitals: int = 35, seed: int = 0
) -> tuple[CohortDataset, CohortDataset]:
    """Hospital-level partition: all of a hospital's patients land on one side."""
    hospitals = dataset.hospital_list()
    if not 1 <= n_train_hospitals < hospitals.size:
        raise ValueError(
            f"n_train_hospitals must lie in [1, {hospitals.size - 1}]"
        )
    rng = np.random.default_rng(seeding.derive_seed(seed, seeding.SPLIT, 1))
    order = rng.permutation(hospitals.size)
    train_hospitals = set(hospitals[order[:n_train_hospitals]].tolist())
    mask = np.fromiter(
        (h in train_hospitals for h in dataset.hospital_ids),
        dtype=bool,
        count=dataset.n_patients,
    )
    return dataset.subset(np.nonzero(mask)[0]), dataset.subset(np.nonzero(~mask)[0])


def save_cohort_csv(dataset: CohortDataset, path) -> None:
    """Write the cohort in the documented CSV schema (one row per patient)."""
    path = Path(path)
    dim = dataset.n_features
    header = ",".join((*_CSV_PREFIX, *(f"f{j}" for j in range(dim))))
    # features rendered via a byte matrix: '0'/'1' and ',' interleaved
    feature_bytes = np.empty((dataset.n_patients, 2 * dim), dtype=np.uint8)
    feature_bytes[:, ::2] = dataset.features + ord("0")
    feature_bytes[:, 1::2] = ord(",")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for i in range(dataset.n_patients):
            prefix = (
                f"{int(dataset.patient_ids[i])},{int(dataset.hospital_ids[i])},"
                f"{dataset.regions[i]},{int(dataset.mortality[i])},"
                f"{float(dataset.unit_stay_minutes[i])!r},{';'.join(dataset.diagnoses[i])},"
            )
            fh.write(prefix)
            fh.write(feature_bytes[i, : 2 * dim - 1].tobytes().decode("ascii"))
            fh.write("\n")


def load_cohort_csv(path) -> CohortDataset:
    """Read a cohort CSV, validating the schema row by row."""
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CohortCsvError("empty file") from None
        if len(header) < len(_CSV_PREFIX) + 1 or tuple(header[: len(_CSV_PREFIX)]) != _CSV_PREFIX:
            raise CohortCsvError(
                f"header must start with {','.join(_CSV_PREFIX)} followed by f0..fD-1"
            )
        dim = len(header) - len(_CSV_PREFIX)
        expected_f = [f"f{j}" for j in range(dim)]
        if header[len(_CSV_PREFIX) :] != expected_f:
            raise CohortCsvError("feature columns must be f0..fD-1 in order")

        patient_ids, hospital_ids, regions = [], [], []
        mortality, minutes, diagnoses = [], [], []
        feature_rows = []
        for row_number, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise CohortCsvError(
                    f"row {row_number}: expected {len(header)} fields, got {len(row)}"
                )
            try:
                patient_ids.append(int(row[0]))
                hospital_ids.append(int(row[1]))
                regions.append(row[2])
                dead = int(row[3])
                if dead not in (0, 1):
                    raise ValueError
                mortality.append(dead)
                stay = float(row[4])
                if stay < 0:
                    raise ValueError
                minutes.append(stay)
            except ValueError:
                raise CohortCsvError(f"row {row_number}: bad prefix field") from None
            diagnoses.append(tuple(d for d in row[5].split(";") if d))
            joined = "".join(row[len(_CSV_PREFIX) :])
            if len(joined) != dim:
                raise CohortCsvError(f"row {row_number}: non-binary feature value")
            values = np.frombuffer(joined.encode("ascii"), dtype=np.uint8) - ord("0")
            if not np.isin(values, (0, 1)).all():
                raise CohortCsvError(f"row {row_number}: non-binary feature value")
            feature_rows.append(values)
    if not feature_rows:
        raise CohortCsvError("no data rows")
    return CohortDataset(
        patient_ids=np.array(patient_ids, dtype=np.int64),
        hospital_ids=np.array(hospital_ids, dtype=np.int64),
        regions=np.array(regions),
        features=np.vstack(feature_rows).astype(np.uint8),
        mortality=np.array(mortality, dtype=np.int64),
        unit_stay_minutes=np.array(minutes, dtype=np.float64),
        diagnoses=diagnoses,
    )


def cohorts_equal(a: CohortDataset, b: CohortDataset) -> bool:
    """Exact equality; used to verify lossless CSV round-trips."""
    return (
        np.array_equal(a.patient_ids, b.patient_ids)
        and np.array_equal(a.hospital_ids, b.hospital_ids)
        and np.array_equal(a.regions, b.regions)
        and np.array_equal(a.features, b.features)
        and np.array_equal(a.mortality, b.mortality)
        and np.array_equal(a.unit_stay_minutes, b.unit_stay_minutes)
        and a.diagnoses == b.diagnoses
    )
