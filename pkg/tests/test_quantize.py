import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import exact_cell
from quantpdfa.errors import InputError
from quantpdfa.quantize import (format_vector, interval_index, linf_distance, quant_equal,
                                quantize_distribution)

probs = st.floats(0.0, 1.0, allow_nan=False)
kappas = st.integers(1, 5000)


def test_interval_examples():
    assert interval_index(0.5, 2) == 1
    assert interval_index(0.4999, 2) == 0
    assert interval_index(0.45, 5) == 2
    assert interval_index(0.55, 5) == 2
    for k in (1, 2, 7, 1000):
        assert interval_index(1.0, k) == k - 1
        assert interval_index(0.0, k) == 0


def test_interval_errors():
    with pytest.raises(InputError):
        interval_index(1.5, 3)
    with pytest.raises(InputError):
        interval_index(-0.1, 3)
    with pytest.raises(InputError):
        interval_index(float("nan"), 3)
    for bad in (0, -2, 2.0, True):
        with pytest.raises(InputError):
            interval_index(0.3, bad)


def test_quantize_examples():
    assert quantize_distribution((0.1, 0.3, 0.6), 2) == (0, 0, 1)
    assert quantize_distribution((0.0, 0.5, 0.5), 10) == (0, 5, 5)
    assert quantize_distribution((0.1, 0.6, 0.3), 10) == (1, 6, 3)
    assert quantize_distribution((1.0, 0.0, 0.0), 37) == (36, 0, 0)


def test_quant_equal_examples():
    assert quant_equal((0.0, 1.0), (0.0, 1.0), 5)
    assert quant_equal((0.5, 0.5), (0.55, 0.45), 5)
    assert not quant_equal((0.19, 0.81, 0.0), (0.21, 0.79, 0.0), 10)
    with pytest.raises(InputError):
        quant_equal((0.5, 0.5), (1.0,), 3)


def test_linf_examples():
    assert linf_distance((0.0, 0.5, 0.5), (0.1, 0.6, 0.3)) == pytest.approx(0.2)
    assert linf_distance((0.5, 0.5), (0.55, 0.45)) == pytest.approx(0.05)
    assert linf_distance((0.2, 0.8), (0.2, 0.8)) == 0.0


def test_format_vector():
    assert format_vector((1, 6, 3)) == "(1, 6, 3)"


@given(probs, kappas)
def test_index_in_range_and_matches_exact_cell(x, k):
    n = interval_index(x, k)
    assert 0 <= n <= k - 1
    exact = exact_cell(x, k)
    # double-precision product may round up onto a boundary; never further
    assert n in (exact, exact + 1)
    if n == exact + 1:
        assert abs(x * k - n) <= 1e-9 * k


@given(probs, probs, kappas)
def test_index_monotone(x, y, k):
    if x <= y:
        assert interval_index(x, k) <= interval_index(y, k)


@given(probs, kappas)
def test_cells_cover_unit_interval(x, k):
    n = interval_index(x, k)
    lo, hi = n / k, (n + 1) / k
    assert lo - 1e-12 <= x
    assert x < hi + 1e-12 or n == k - 1


@given(st.lists(probs, min_size=2, max_size=5))
def test_kappa_one_collapses(d):
    assert quantize_distribution(d, 1) == (0,) * len(d)


@given(st.lists(probs, min_size=3, max_size=3), st.lists(probs, min_size=3, max_size=3), kappas)
def test_equal_cells_are_within_one_over_kappa(d1, d2, k):
    if quant_equal(d1, d2, k):
        assert linf_distance(d1, d2) <= 1.0 / k + 1e-12


def test_quant_equal_is_equivalence_on_grid():
    grid = [(x / 6, 1 - x / 6) for x in range(7)] + [(0.33, 0.67), (0.5, 0.5), (0.49, 0.51)]
    for k in (1, 2, 3, 5, 10):
        for a in grid:
            assert quant_equal(a, a, k)
        for a, b in itertools.product(grid, repeat=2):
            assert quant_equal(a, b, k) == quant_equal(b, a, k)
        for a, b, c in itertools.product(grid, repeat=3):
            if quant_equal(a, b, k) and quant_equal(b, c, k):
                assert quant_equal(a, c, k)
