import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ltdenoise.detection import second_differences, select_noisy_indices
from ltdenoise.errors import BadParamsError, TooShortError


def test_second_differences_examples():
    assert second_differences([1, 2, 3, 4]).tolist() == [0, 0]
    assert second_differences([0, 1, 0]).tolist() == [-2]


def test_second_differences_match_direct_formula():
    x = np.random.default_rng(3).normal(size=10)
    assert second_differences(x).tolist() == oracles.second_differences(x.tolist())


def test_too_short():
    with pytest.raises(TooShortError):
        second_differences([1, 2])
    with pytest.raises(TooShortError):
        select_noisy_indices([1.0])


def test_bad_ratio():
    with pytest.raises(BadParamsError):
        select_noisy_indices([0, 1, 0], ratio=0)


def test_affine_selects_nothing():
    det = select_noisy_indices([1, 2, 3, 4, 5])
    assert det.max_abs == 0
    assert det.indices.size == 0 and det.gt.size == 0


def test_single_spike():
    det = select_noisy_indices([0, 0, 1, 0, 0])
    assert det.dd.tolist() == [1, -2, 1]
    assert det.max_abs == 2
    assert det.indices.tolist() == [2]
    assert det.gt.tolist() == [1]


def test_tie_at_threshold_is_excluded():
    # |dd| = [1, 2, 1] with ratio 0.5: the flanks sit exactly on 0.5 * M
    det = select_noisy_indices([0, 0, 1, 0, 0], ratio=0.5)
    assert det.indices.tolist() == [2]


def test_matches_brute_force_scan_seed_9():
    rng = np.random.default_rng(9)
    x = rng.normal(scale=0.1, size=50)
    x[rng.choice(50, 5, replace=False)] += rng.choice([-1, 1], 5)
    det = select_noisy_indices(x)
    assert det.indices.tolist() == oracles.noisy_positions(x.tolist(), 0.7)
    np.testing.assert_array_equal(det.gt, x[det.indices])


int_signals = st.lists(st.integers(-1000, 1000), min_size=3, max_size=40)


@settings(max_examples=200, deadline=None)
@given(sig=int_signals, c=st.integers(-10**6, 10**6))
def test_translation_invariance(sig, c):
    a = select_noisy_indices(np.array(sig, float))
    b = select_noisy_indices(np.array(sig, float) + c)
    assert a.dd.tolist() == b.dd.tolist() and a.max_abs == b.max_abs
    assert a.indices.tolist() == b.indices.tolist()


@settings(max_examples=200, deadline=None)
@given(sig=int_signals, power=st.integers(-20, 20), sign=st.sampled_from([-1.0, 1.0]))
def test_scale_equivariance(sig, power, sign):
    c = sign * 2.0 ** power
    x = np.array(sig, float)
    assert select_noisy_indices(c * x).indices.tolist() == select_noisy_indices(x).indices.tolist()


@settings(max_examples=200, deadline=None)
@given(sig=st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=20),
       ratio=st.floats(0.05, 1.0))
def test_selection_is_exact_partition(sig, ratio):
    x = np.array(sig)
    det = select_noisy_indices(x, ratio)
    dd = second_differences(x)
    chosen = set(det.indices.tolist())
    for j in range(1, x.size - 1):
        assert (abs(dd[j - 1]) - ratio * det.max_abs > 0) == (j in chosen)
    # at ratio 1 the strict rule excludes even the maximum
    if det.max_abs > 0 and ratio <= 0.99:
        assert int(np.argmax(np.abs(dd))) + 1 in chosen


def test_ratio_one_selects_nothing():
    assert select_noisy_indices([0, 0, 1], ratio=1.0).indices.size == 0


@given(a=st.floats(-100, 100), b=st.floats(-100, 100), n=st.integers(3, 30))
def test_integer_affine_signals_select_nothing(a, b, n):
    x = np.round(a) + np.round(b) * np.arange(n)
    assert select_noisy_indices(x).indices.size == 0
