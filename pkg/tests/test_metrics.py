import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smoothperf.metrics import prbep_metric, rocarea_metric


def test_prbep_examples():
    assert prbep_metric([0.9, 0.8, 0.1], [1, 1, -1]) == 1.0
    assert prbep_metric([0.0, 1.0], [1, -1]) == 0.0
    assert prbep_metric([3, 1, 2, 0], [1, 1, -1, -1]) == 0.5


def test_prbep_tie_prefers_lower_index():
    assert prbep_metric([1.0, 1.0], [1, -1]) == 1.0
    assert prbep_metric([1.0, 1.0], [-1, 1]) == 0.0


def test_rocarea_examples():
    assert rocarea_metric([2.0, 1.0, 0.0], [1, 1, -1]) == 1.0
    assert rocarea_metric([0.3] * 5, [1, -1, 1, -1, -1]) == 0.5
    assert rocarea_metric([3, 1, 2, 0], [1, 1, -1, -1]) == 0.75


def test_errors():
    with pytest.raises(ValueError):
        prbep_metric([1.0, 2.0], [-1, -1])
    with pytest.raises(ValueError):
        rocarea_metric([1.0, 2.0], [1, 1])


def brute_auc(s, y):
    P, N = s[y == 1], s[y == -1]
    diff = np.subtract.outer(P, N)
    return ((diff > 0).sum() + 0.5 * (diff == 0).sum()) / diff.size


labelled = st.integers(2, 200).flatmap(lambda n: st.tuples(
    st.lists(st.integers(-5, 5), min_size=n, max_size=n),
    st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n)))


@settings(max_examples=150, deadline=None)
@given(labelled)
def test_rocarea_matches_pair_count(case):
    s, y = np.array(case[0], dtype=float), np.array(case[1])
    y[0], y[1] = 1, -1
    assert rocarea_metric(s, y) == brute_auc(s, y)


@settings(max_examples=100, deadline=None)
@given(labelled)
def test_monotone_invariance(case):
    s, y = np.array(case[0], dtype=float), np.array(case[1])
    y[0], y[1] = 1, -1
    t = np.exp(s) * 3 + 1
    assert rocarea_metric(t, y) == rocarea_metric(s, y)
    assert prbep_metric(t, y) == prbep_metric(s, y)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 100), st.integers(0, 10_000))
def test_rocarea_reversal(n, seed):
    rng = np.random.default_rng(seed)
    s = rng.permutation(n).astype(float)
    y = np.where(rng.random(n) < 0.5, 1, -1)
    y[0], y[1] = 1, -1
    assert rocarea_metric(s, y) + rocarea_metric(-s, y) == pytest.approx(1.0, abs=1e-15)
