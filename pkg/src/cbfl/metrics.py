"""Evaluation metrics and diagnosis enrichment statistics.

ROC AUC is the tie-aware Mann-Whitney statistic, PR AUC is step-wise
average precision, and enrichment uses one-sided hypergeometric tail
p-values with Benjamini-Hochberg adjustment across all
(community, diagnosis) tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ENRICHMENT_ALPHA = 0.05


def _validate_scored(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.ndim != 1 or y.ndim != 1 or s.shape != y.shape:
        raise ValueError("scores and labels must be 1-d and the same length")
    if s.size < 1:
        raise ValueError("need at least one scored example")
    if not np.isfinite(s).all():
        raise ValueError("scores contain NaN/Inf")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0 or 1")
    return s, y.astype(np.int64)


def roc_auc(scores, labels) -> float:
    """Probability a random positive outscores a random negative.

    Ties count 0.5. Computed from average ranks in O(n log n); agrees with
    the all-pairs definition exactly.
    """
    s, y = _validate_scored(scores, labels)
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC AUC needs at least one positive and one negative")
    ranks = _average_ranks(s)
    rank_sum = float(ranks[y == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned the mean rank of their block."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def pr_auc(scores, labels) -> float:
    """Average precision: sum of precision x recall-step over descending
    score thresholds, with tied scores processed as one block."""
    s, y = _validate_scored(scores, labels)
    n_pos = int(y.sum())
    if n_pos == 0:
        raise ValueError("PR AUC needs at least one positive")
    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    y_sorted = y[order]
    # last index of each tied block = one threshold
    block_ends = np.nonzero(np.diff(s_sorted))[0]
    thresholds = np.append(block_ends, s_sorted.size - 1)
    tp_cum = np.cumsum(y_sorted)[thresholds]
    count_cum = thresholds + 1
    precision = tp_cum / count_cum
    recall = tp_cum / n_pos
    recall_steps = np.diff(np.concatenate(([0.0], recall)))
    return float(np.sum(precision * recall_steps))


def log_hypergeom_tail(population: int, successes: int, draws: int, overlap: int) -> float:
    """log P(X >= overlap) for X ~ Hypergeometric(population, successes, draws).

    Log-gamma arithmetic keeps this stable for cohort-sized counts.
    """
    if not 0 <= successes <= population or not 0 <= draws <= population:
        raise ValueError("need 0 <= successes, draws <= population")
    lo = max(0, successes + draws - population)
    hi = min(successes, draws)
    if overlap <= lo:
        return 0.0
    if overlap > hi:
        return -math.inf
    log_denom = _log_comb(population, draws)
    terms = [
        _log_comb(successes, i) + _log_comb(population - successes, draws - i) - log_denom
        for i in range(overlap, hi + 1)
    ]
    peak = max(terms)
    return peak + math.log(sum(math.exp(t - peak) for t in terms))


def hypergeom_tail(population: int, successes: int, draws: int, overlap: int) -> float:
    """P(X >= overlap); the enrichment test's raw p-value."""
    return min(1.0, math.exp(log_hypergeom_tail(population, successes, draws, overlap)))


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def benjamini_hochberg(p_values) -> np.ndarray:
    """Step-up adjusted p-values: monotone in raw order and capped at 1."""
    p = np.asarray(p_values, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError("p_values must be 1-d")
    if p.size == 0:
        return p.copy()
    if (p < 0).any() or (p > 1).any():
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    order = np.argsort(p, kind="stable")
    scaled = p[order] * m / np.arange(1, m + 1)
    adjusted_sorted = np.minimum.accumulate(scaled[::-1])[::-1]
    adjusted_sorted = np.minimum(adjusted_sorted, 1.0)
    adjusted = np.empty_like(adjusted_sorted)
    adjusted[order] = adjusted_sorted
    return adjusted


@dataclass(frozen=True)
class EnrichmentRow:
    """One (community, diagnosis) test with raw and adjusted p-values."""

    community: int
    diagnosis: str
    overlap: int
    community_size: int
    diagnosis_total: int
    population: int
    p_value: float
    p_adjusted: float
    overrepresented: bool


def enrichment(
    community_ids,
    diagnoses,
    n_communities: int,
    categories,
    alpha: float = ENRICHMENT_ALPHA,
) -> tuple[list[EnrichmentRow], list[str]]:
    """Per-community diagnosis overrepresentation table.

    `community_ids` maps each patient to a community; `diagnoses` is the
    per-patient tag collection. Empty communities are skipped (reported in
    the returned notes) and do not count toward the number of tests.
    """
    comm = np.asarray(community_ids, dtype=np.int64)
    if comm.ndim != 1 or comm.size != len(diagnoses):
        raise ValueError("community_ids and diagnoses must align per patient")
    if comm.size == 0:
        raise ValueError("empty population")
    if (comm < 0).any() or (comm >= n_communities).any():
        raise ValueError("community index out of range")
    categories = list(categories)
    population = comm.size

    tag_members: dict[str, np.ndarray] = {}
    for cat in categories:
        tag_members[cat] = np.fromiter(
            (cat in tags for tags in diagnoses), dtype=bool, count=population
        )

    notes: list[str] = []
    raw: list[tuple[int, str, int, int, int]] = []
    for k in range(n_communities):
        in_comm = comm == k
        size = int(in_comm.sum())
        if size == 0:
            notes.append(f"community {k} is empty; skipped")
            continue
        for cat in categories:
            total = int(tag_members[cat].sum())
            overlap = int((tag_members[cat] & in_comm).sum())
            raw.append((k, cat, overlap, size, total))

    p_values = np.array(
        [
            hypergeom_tail(population, total, size, overlap)
            for (_, _, overlap, size, total) in raw
        ]
    )
    adjusted = benjamini_hochberg(p_values)
    rows = [
        EnrichmentRow(
            community=k,
            diagnosis=cat,
            overlap=overlap,
            community_size=size,
            diagnosis_total=total,
            population=population,
            p_value=float(p),
            p_adjusted=float(q),
            overrepresented=bool(q < alpha),
        )
        for (k, cat, overlap, size, total), p, q in zip(raw, p_values, adjusted)
    ]
    return rows, notes
