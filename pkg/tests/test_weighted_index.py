"""WeightedIndex: exact totals, selection law, drift, and error contracts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import matroid_mcmc.weighted_index as wi_mod
from matroid_mcmc import EmptySelectionError, ValidationError, WeightedIndex


def test_empty_total_zero():
    w = WeightedIndex([0.0] * 8)
    assert w.total == 0.0
    assert w.active_count == 0


def test_set_and_total_singleton():
    w = WeightedIndex([0.0] * 4)
    w.set(0, 2.5)
    assert w.total == 2.5
    assert w.active_count == 1
    w.set(0, 0.0)
    assert w.total == 0.0
    assert w.active_count == 0


def test_two_point_selection():
    w = WeightedIndex([1.0, 1.0])
    assert w.sample(0.5) == 0
    assert w.sample(1.5) == 1
    # boundary tie resolves to the lower index
    assert w.sample(1.0) == 0


def test_zero_weight_elements_never_selected():
    w = WeightedIndex([5.0, 0.0, 0.0, 0.0])
    for u in np.linspace(1e-9, 5.0, 37):
        assert w.sample(float(u)) == 0


def test_sample_on_zero_total_raises():
    w = WeightedIndex([0.0, 0.0])
    with pytest.raises(EmptySelectionError):
        w.sample(0.5)


def test_bad_weights_rejected():
    w = WeightedIndex([1.0, 1.0])
    with pytest.raises(ValidationError):
        w.set(0, -1.0)
    with pytest.raises(ValidationError):
        w.set(0, float("nan"))
    with pytest.raises(ValidationError):
        w.set(0, float("inf"))
    with pytest.raises(ValidationError):
        WeightedIndex([1.0, -2.0])
    with pytest.raises(IndexError):
        w.set(5, 1.0)


def test_differential_total_vs_fresh_sum():
    rng = np.random.default_rng(11)
    n = 93
    w = WeightedIndex([0.0] * n)
    ref = [0.0] * n
    for _ in range(1000):
        i = int(rng.integers(n))
        x = float(rng.uniform(0.0, 10.0)) if rng.random() < 0.8 else 0.0
        w.set(i, x)
        ref[i] = x
        fresh = math.fsum(ref)
        assert abs(w.total - fresh) <= 1e-9 * max(1.0, fresh)
        assert w.active_count == sum(1 for v in ref if v != 0.0)


def test_selection_matches_linear_scan():
    rng = np.random.default_rng(5)
    n = 17
    vals = rng.uniform(0.0, 3.0, n)
    vals[rng.random(n) < 0.3] = 0.0
    w = WeightedIndex(list(vals))
    cum = np.cumsum(vals)
    for _ in range(500):
        u = float(rng.uniform(1e-12, w.total))
        expect = int(np.argmax(cum >= u))
        assert w.sample(u) == expect


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=100.0, allow_nan=False),
                min_size=1, max_size=40),
       st.floats(min_value=1e-9, max_value=1.0 - 1e-9))
def test_sample_always_lands_on_positive_weight(vals, frac):
    w = WeightedIndex(vals)
    if w.total <= 0.0:
        with pytest.raises(EmptySelectionError):
            w.sample(0.5)
        return
    u = frac * w.total
    i = w.sample(u)
    assert 0 <= i < len(vals)
    assert vals[i] > 0.0


def test_empirical_frequencies_1_2_3():
    w = WeightedIndex([1.0, 2.0, 3.0])
    rng = np.random.default_rng(42)
    draws = 600_000
    us = (1.0 - rng.random(draws)) * w.total
    counts = np.zeros(3)
    for u in us:
        counts[w.sample(float(u))] += 1
    freq = counts / draws
    want = np.array([1.0, 2.0, 3.0]) / 6.0
    assert np.abs(freq - want).max() < 0.01


def test_drift_after_1e6_updates():
    rng = np.random.default_rng(99)
    n = 512
    w = WeightedIndex([0.0] * n)
    ref = np.zeros(n)
    idx = rng.integers(0, n, 1_000_000)
    raw = rng.uniform(-3.0, 3.0, 1_000_000)
    vals = 10.0 ** raw  # weights spread over [1e-3, 1e3]
    for i, x in zip(idx, vals):
        w.set(int(i), float(x))
        ref[int(i)] = x
    fresh = math.fsum(ref)
    assert abs(w.total - fresh) / fresh <= 1e-9
    w.rebuild()
    assert abs(w.total - math.fsum(ref)) / fresh <= 1e-12


def test_periodic_rebuild_triggers(monkeypatch):
    monkeypatch.setattr(wi_mod, "REBUILD_EVERY", 64)
    w = WeightedIndex([1.0] * 8)
    for k in range(300):
        w.set(k % 8, 1.0 + (k % 5) * 0.25)
    total = w.total
    w.rebuild()
    assert w.total == total  # drift already cancelled by periodic rebuilds


def test_determinism_same_u_same_element():
    vals = [0.3, 0.0, 1.7, 2.2, 0.9]
    a = WeightedIndex(vals)
    b = WeightedIndex(vals)
    for u in np.linspace(1e-6, sum(vals) - 1e-6, 101):
        assert a.sample(float(u)) == b.sample(float(u))
