"""Test-set PRBEP and ROCArea."""

import numpy as np
from scipy.stats import rankdata


def prbep_metric(scores, labels):
    """Precision among the n_plus top-scored examples (ties: lower index first).

    At that cutoff precision and recall coincide.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    n_plus = int(np.sum(labels == 1))
    if n_plus == 0:
        raise ValueError("PRBEP needs at least one positive example")
    top = np.lexsort((np.arange(scores.size), -scores))[:n_plus]
    return float(np.sum(labels[top] == 1)) / n_plus


def rocarea_metric(scores, labels):
    """Fraction of (positive, negative) pairs ranked correctly; ties count 1/2."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = labels == 1
    n_plus = int(pos.sum())
    n_minus = labels.size - n_plus
    if n_plus == 0 or n_minus == 0:
        raise ValueError("ROCArea needs both classes")
    # Mann-Whitney: midranks give each tie half a win
    ranks = rankdata(scores, method="average")
    u = ranks[pos].sum() - n_plus * (n_plus + 1) / 2.0
    return float(u / (n_plus * n_minus))
