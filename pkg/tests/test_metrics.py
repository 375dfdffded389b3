"""Metric tests: every fast implementation is checked against a slow,
obviously-correct oracle (all-pairs scan, threshold sweep, exact integer
combinatorics)."""

import math
from fractions import Fraction

import numpy as np
import pytest

from cbfl import metrics


def roc_auc_all_pairs(scores, labels):
    """O(n^2) positive/negative pair scan; ties earn half credit."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def pr_auc_threshold_sweep(scores, labels):
    """Average precision via explicit sweep over distinct score thresholds."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    n_pos = labels.sum()
    ap = 0.0
    prev_recall = 0.0
    for threshold in sorted(set(scores.tolist()), reverse=True):
        keep = scores >= threshold
        tp = labels[keep].sum()
        precision = tp / keep.sum()
        recall = tp / n_pos
        ap += (recall - prev_recall) * precision
        prev_recall = recall
    return ap


def hypergeom_tail_exact(population, successes, draws, overlap):
    """Exact rational tail probability from integer binomials."""
    lo = max(0, successes + draws - population)
    hi = min(successes, draws)
    if overlap <= lo:
        return 1.0
    total = sum(
        math.comb(successes, i) * math.comb(population - successes, draws - i)
        for i in range(overlap, hi + 1)
    )
    return float(Fraction(total, math.comb(population, draws)))


def random_scored(rng, n, with_ties):
    if with_ties:
        scores = rng.integers(0, max(2, n // 3), size=n).astype(float) / 10.0
    else:
        scores = rng.random(n)
    labels = rng.integers(0, 2, size=n)
    if labels.sum() == 0:
        labels[0] = 1
    if labels.sum() == n:
        labels[0] = 0
    return scores, labels


class TestRocAuc:
    def test_perfect_ranking(self):
        assert metrics.roc_auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_all_ties(self):
        assert metrics.roc_auc([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0]) == 0.5

    def test_hand_value(self):
        assert metrics.roc_auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75

    def test_single_class_rejected(self):
        with pytest.raises(ValueError, match="positive and"):
            metrics.roc_auc([0.1, 0.2], [1, 1])

    def test_matches_all_pairs_oracle(self):
        rng = np.random.default_rng(7)
        for trial in range(60):
            scores, labels = random_scored(rng, int(rng.integers(2, 80)), trial % 2 == 0)
            fast = metrics.roc_auc(scores, labels)
            slow = roc_auc_all_pairs(scores, labels)
            assert fast == pytest.approx(slow, abs=1e-9), trial

    def test_invariant_under_monotone_transforms(self):
        rng = np.random.default_rng(11)
        scores = rng.random(60)
        labels = rng.integers(0, 2, 60)
        labels[0], labels[1] = 0, 1
        base = metrics.roc_auc(scores, labels)
        assert metrics.roc_auc(2.0 * scores + 1.0, labels) == base
        assert metrics.roc_auc(scores**3, labels) == base

    def test_rejects_nan_scores(self):
        with pytest.raises(ValueError, match="NaN"):
            metrics.roc_auc([0.1, float("nan")], [0, 1])


class TestPrAuc:
    def test_perfect_ranking(self):
        assert metrics.pr_auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_all_positive(self):
        assert metrics.pr_auc([0.3, 0.9, 0.5], [1, 1, 1]) == 1.0

    def test_hand_value(self):
        ap = metrics.pr_auc([0.9, 0.8, 0.7], [1, 0, 1])
        assert ap == pytest.approx(1.0 * 0.5 + (2.0 / 3.0) * 0.5, abs=1e-12)

    def test_no_positive_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            metrics.pr_auc([0.1, 0.2], [0, 0])

    def test_matches_threshold_sweep_oracle(self):
        rng = np.random.default_rng(13)
        for trial in range(60):
            scores, labels = random_scored(rng, int(rng.integers(2, 80)), trial % 2 == 1)
            fast = metrics.pr_auc(scores, labels)
            slow = pr_auc_threshold_sweep(scores, labels)
            assert fast == pytest.approx(slow, abs=1e-9), trial


class TestHypergeometric:
    def test_exact_overlap_case(self):
        # community exactly equals the 5 diagnosis holders among 100
        p = metrics.hypergeom_tail(100, 5, 5, 5)
        assert p == pytest.approx(1.0 / math.comb(100, 5), rel=1e-9)

    def test_everyone_has_diagnosis(self):
        assert metrics.hypergeom_tail(50, 50, 12, 12) == pytest.approx(1.0, rel=1e-12)

    def test_zero_overlap_is_certain(self):
        assert metrics.hypergeom_tail(30, 10, 5, 0) == 1.0

    def test_impossible_overlap(self):
        assert metrics.hypergeom_tail(30, 4, 5, 6) == 0.0

    def test_matches_exact_oracle_small_populations(self):
        rng = np.random.default_rng(17)
        for _ in range(400):
            population = int(rng.integers(1, 40))
            successes = int(rng.integers(0, population + 1))
            draws = int(rng.integers(0, population + 1))
            hi = min(successes, draws)
            overlap = int(rng.integers(0, hi + 2))
            fast = metrics.hypergeom_tail(population, successes, draws, overlap)
            slow = hypergeom_tail_exact(population, successes, draws, overlap)
            assert fast == pytest.approx(slow, rel=1e-10, abs=1e-300)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            metrics.hypergeom_tail(10, 11, 5, 1)


class TestBenjaminiHochberg:
    def test_hand_computed_stepup(self):
        adjusted = metrics.benjamini_hochberg([0.01, 0.02, 0.03, 0.04])
        np.testing.assert_allclose(adjusted, [0.04, 0.04, 0.04, 0.04], atol=1e-15)

    def test_monotone_in_raw_order_and_capped(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            p = rng.random(int(rng.integers(1, 40)))
            adjusted = metrics.benjamini_hochberg(p)
            assert np.all(adjusted <= 1.0)
            assert np.all(adjusted >= p - 1e-15)
            order = np.argsort(p, kind="stable")
            assert np.all(np.diff(adjusted[order]) >= -1e-15)

    def test_single_value(self):
        np.testing.assert_allclose(metrics.benjamini_hochberg([0.2]), [0.2])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            metrics.benjamini_hochberg([0.5, 1.5])


class TestEnrichment:
    def test_perfectly_enriched_community(self):
        # patients 0..4 carry the tag and form community 0 of population 100
        communities = np.zeros(100, dtype=int)
        communities[5:] = 1
        diagnoses = [("cardiovascular",) if i < 5 else () for i in range(100)]
        rows, notes = metrics.enrichment(communities, diagnoses, 2, ["cardiovascular"])
        assert notes == []
        by_comm = {r.community: r for r in rows}
        assert by_comm[0].overlap == 5
        assert by_comm[0].p_value == pytest.approx(1.0 / math.comb(100, 5), rel=1e-9)
        assert by_comm[0].overrepresented
        assert not by_comm[1].overrepresented

    def test_universal_diagnosis_never_enriched(self):
        communities = np.array([0, 0, 1, 1, 1])
        diagnoses = [("renal",)] * 5
        rows, _ = metrics.enrichment(communities, diagnoses, 2, ["renal"])
        for row in rows:
            assert row.p_value == pytest.approx(1.0, rel=1e-12)
            assert not row.overrepresented

    def test_empty_community_skipped_with_note(self):
        communities = np.zeros(10, dtype=int)
        diagnoses = [("renal",)] * 10
        rows, notes = metrics.enrichment(communities, diagnoses, 3, ["renal"])
        assert {r.community for r in rows} == {0}
        assert len(notes) == 2

    def test_counts_consistent(self):
        rng = np.random.default_rng(3)
        communities = rng.integers(0, 3, 200)
        categories = ["a", "b", "c"]
        diagnoses = [
            tuple(c for c in categories if rng.random() < 0.3) for _ in range(200)
        ]
        rows, _ = metrics.enrichment(communities, diagnoses, 3, categories)
        assert len(rows) == 9
        for row in rows:
            assert row.overlap <= min(row.community_size, row.diagnosis_total)
            assert 0.0 <= row.p_value <= 1.0
            assert row.p_value <= row.p_adjusted <= 1.0
