import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_dataset
from smoothperf import oracle
from smoothperf.data import Dataset
from smoothperf.prbep import (clip_beta, contingency_counts, dual_value, exact_prbep_risk,
                              exact_prbep_separation, prbep_dual, prbep_linear_coeffs,
                              smoothed_prbep_eval, solve_coupled_clip)


def test_linear_coeffs(two_point):
    np.testing.assert_allclose(prbep_linear_coeffs([0.0], two_point), [1.0, 0.0])
    np.testing.assert_allclose(prbep_linear_coeffs([1.0], two_point), [0.0, -1.0])
    np.testing.assert_allclose(prbep_linear_coeffs([-1.0], two_point), [2.0, 1.0])


def test_coupled_clip_examples():
    r = solve_coupled_clip([1.0, 0.0], 1.0, [0])
    assert r.nu == pytest.approx(0.5)
    np.testing.assert_allclose(r.beta, [0.5, 0.5])
    for mu in (1e-3, 1.0, 10.0):
        assert np.all(solve_coupled_clip(np.zeros(6), mu, [0, 1, 2]).beta == 0.0)
    np.testing.assert_array_equal(solve_coupled_clip([0.0, -1.0], 1.0, [0]).beta, [0.0, 0.0])


def test_coupled_clip_rejects_bad_mu():
    with pytest.raises(ValueError):
        solve_coupled_clip([1.0, 0.0], 0.0, [0])


def test_smoothed_examples(two_point):
    r = smoothed_prbep_eval([0.0], two_point, 1.0)
    assert r.value == pytest.approx(0.25)
    np.testing.assert_allclose(r.gradient, [-1.0])
    r = smoothed_prbep_eval([1.0], two_point, 1.0)
    assert r.value == pytest.approx(0.0, abs=1e-15)
    np.testing.assert_allclose(r.gradient, [0.0], atol=1e-15)


def test_exact_examples(two_point):
    d = Dataset.from_dense(np.eye(5)[:, :2], [1, 1, -1, -1, -1])
    assert exact_prbep_risk(np.zeros(2), d).value == pytest.approx(1.0)
    assert exact_prbep_risk([1.0], two_point).value == pytest.approx(0.0)
    r = exact_prbep_risk([-1.0], two_point)
    assert r.value == pytest.approx(3.0)
    np.testing.assert_allclose(r.gradient, [-2.0])


def test_separation_keeps_counts_balanced():
    rng = np.random.default_rng(3)
    for _ in range(30):
        d = random_dataset(rng, int(rng.integers(2, 40)), 3)
        _, z = exact_prbep_separation(rng.normal(size=3), d)
        cc = contingency_counts(z, d)
        assert cc.b == cc.c


def test_smallest_k_wins_ties(two_point):
    # scores 0.5 and -0.5: flipping both gives 1 + (-0.5 - 0.5) = 0, same as k = 0
    value, z = exact_prbep_separation([0.5], two_point)
    assert value == 0.0
    np.testing.assert_array_equal(z, two_point.y)


coupled = st.integers(2, 30).flatmap(lambda n: st.tuples(
    st.lists(st.floats(-3, 3, allow_nan=False), min_size=n, max_size=n),
    st.lists(st.booleans(), min_size=n, max_size=n),
    st.sampled_from([1e-3, 1e-2, 0.1, 1.0, 10.0])))


@settings(max_examples=200, deadline=None)
@given(coupled)
def test_coupled_clip_kkt(case):
    c, mask, mu = case
    c = np.array(c)
    mask = np.array(mask)
    mask[0], mask[1] = True, False
    pos_idx = np.flatnonzero(mask)
    r = solve_coupled_clip(c, mu, pos_idx)
    s = np.where(mask, 1.0, -1.0)
    assert np.all((r.beta >= 0) & (r.beta <= 1))
    assert abs(s @ r.beta) <= 1e-9 * (1 + np.abs(c).sum() / mu)
    np.testing.assert_allclose(r.beta, clip_beta(c, r.nu, mu, s), atol=1e-9)


def test_smoothed_value_is_dual_value():
    rng = np.random.default_rng(5)
    d = random_dataset(rng, 25, 4)
    w = rng.normal(size=4)
    dual = prbep_dual(w, d, 0.01)
    assert smoothed_prbep_eval(w, d, 0.01).value == dual_value(dual.coeffs, dual.beta, 0.01)


def test_smoothed_converges_to_exact():
    rng = np.random.default_rng(6)
    d = random_dataset(rng, 20, 3)
    w = rng.normal(size=3)
    exact = exact_prbep_risk(w, d).value
    gaps = [exact - smoothed_prbep_eval(w, d, mu).value for mu in (1.0, 0.1, 1e-2, 1e-4)]
    assert all(0 <= g <= mu * d.n / 2 + 1e-12 for g, mu in zip(gaps, (1.0, 0.1, 1e-2, 1e-4)))
    assert gaps[-1] <= 1e-4 * d.n / 2


def test_exact_matches_enumeration_small():
    rng = np.random.default_rng(7)
    for _ in range(20):
        d = random_dataset(rng, int(rng.integers(2, 9)), 2)
        w = rng.normal(size=2)
        assert exact_prbep_risk(w, d).value == pytest.approx(oracle.enumerate_prbep_risk(w, d),
                                                             abs=1e-12)


def test_exact_subgradient_inequality():
    rng = np.random.default_rng(8)
    d = random_dataset(rng, 30, 4)
    w = rng.normal(size=4)
    r = exact_prbep_risk(w, d)
    for _ in range(50):
        v = w + rng.normal(size=4)
        assert exact_prbep_risk(v, d).value >= r.value + r.gradient @ (v - w) - 1e-12
