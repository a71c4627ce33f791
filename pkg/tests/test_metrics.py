import numpy as np
import pytest

from slidekit.errors import UsageError
from slidekit.evaluation.metrics import ConfusionCounts, confusion, f1


def test_perfect_prediction():
    assert f1(ConfusionCounts(tp=5, fp=0, fn=0, tn=0)) == 1.0


def test_all_positives_missed():
    assert f1(ConfusionCounts(tp=0, fp=0, fn=3, tn=10)) == 0.0


def test_direct_formula_case():
    assert f1(ConfusionCounts(tp=8, fp=2, fn=2, tn=0)) == pytest.approx(0.8)


def test_zero_denominator_returns_zero():
    assert f1(ConfusionCounts(tp=0, fp=0, fn=0, tn=7)) == 0.0


def test_matches_harmonic_mean_by_enumeration():
    # brute force over all small confusion matrices against the
    # precision/recall harmonic-mean definition
    for tp in range(6):
        for fp in range(6):
            for fn in range(6):
                counts = ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=2)
                got = f1(counts)
                if tp == 0:
                    expected = 0.0
                else:
                    precision = tp / (tp + fp)
                    recall = tp / (tp + fn)
                    expected = 2 * precision * recall / (precision + recall)
                assert got == pytest.approx(expected, abs=1e-12)


def test_confusion_from_arrays():
    y = np.array([1, 1, 0, 0, 1, 0])
    p = np.array([1, 0, 0, 1, 1, 0])
    counts = confusion(y, p)
    assert (counts.tp, counts.fp, counts.fn, counts.tn) == (2, 1, 1, 2)
    assert counts.total == 6


def test_counts_validation():
    with pytest.raises(UsageError):
        ConfusionCounts(tp=-1)
    with pytest.raises(UsageError):
        confusion(np.array([1, 0]), np.array([1]))
