import numpy as np
import pytest
from hypothesis import given

from conftest import pdfas
from oracles import bfs_difference, congruent
from quantpdfa import zoo
from quantpdfa.errors import InputError
from quantpdfa.pdfa import Pdfa, quantized_key
from quantpdfa.quantize import quantize_distribution
from quantpdfa.teacher import PdfaTeacher, eq_quantized, eq_tolerance, oracle_bisim


def test_membership_queries_and_cache():
    t = PdfaTeacher(zoo.weighted_tomita2())
    assert t.mq_next_symbol(()) == (0.0, 0.5, 0.5)
    assert t.mq_next_symbol((1, 0)) == (0.1, 0.3, 0.6)
    assert t.mq_next_symbol([1, 0]) == (0.1, 0.3, 0.6)
    assert t.mq_calls == 3 and t.mq_misses == 2 and t.mq_count == 2
    assert t.mq_last_symbol((1,)) == 0.5
    assert t.mq_last_symbol((1, -1)) == 0.1
    with pytest.raises(InputError):
        t.mq_last_symbol(())
    with pytest.raises(InputError):
        t.mq_next_symbol((5,))


def test_uncached_teacher_counts_every_call():
    t = PdfaTeacher(zoo.geometric(), cache=False)
    t.mq_next_symbol((0,))
    t.mq_next_symbol((0,))
    assert t.mq_count == 2


def test_eq_counts():
    t = PdfaTeacher(zoo.geometric())
    assert t.eq_quantized(zoo.geometric(0.05), 5) is None
    assert t.eq_tolerance(zoo.geometric(0.05), 0.1) is None
    assert t.eq_count == 2


def test_eq_quantized_on_geometric_pair(backend):
    a, b = zoo.geometric(), zoo.geometric(0.05)
    assert eq_quantized(a, b, 5) is None
    assert eq_quantized(a, b, 100) == (0,)
    assert oracle_bisim(a, b, 5)
    assert not oracle_bisim(a, b, 100)


def test_same_function_but_not_equivalent(backend):
    a, b = zoo.alternating(), zoo.alternating_unrolled()
    cex = eq_quantized(a, b, 100)
    assert cex is not None
    assert quantize_distribution(a.next_dist(cex), 100) != quantize_distribution(b.next_dist(cex), 100)
    assert not oracle_bisim(a, b, 100)


def test_initial_difference_gives_empty_word(backend):
    a = zoo.uniform_loop()
    b = Pdfa(["a", "b"], [(0.9, 0.05, 0.05)], [[0, 0]], 0)
    assert eq_quantized(a, b, 10) == ()
    assert eq_tolerance(a, b, 0.1) == ()


def test_eq_tolerance_threshold(backend):
    a, b = zoo.geometric(), zoo.geometric(0.05)
    assert eq_tolerance(a, b, 0.05 + 1e-9) is None
    assert eq_tolerance(a, b, 0.04) == (0,)
    with pytest.raises(InputError):
        eq_tolerance(a, b, 1.5)


def test_alphabet_mismatch():
    with pytest.raises(InputError):
        eq_quantized(zoo.geometric(), zoo.uniform_loop(), 10)


@given(pdfas(grain=4), pdfas(grain=4))
def test_eq_quantized_agrees_with_pair_marking(backend, a, b):
    if a.alphabet != b.alphabet:
        return
    for k in (2, 10):
        key = quantized_key(k)
        cex = eq_quantized(a, b, k)
        same = congruent({"a": a, "b": b}, key, ("a", a.initial), ("b", b.initial))
        assert (cex is None) == same
        assert oracle_bisim(a, b, k) == same
        if cex is not None:
            assert key(a.next_dist(cex)) != key(b.next_dist(cex))


@given(pdfas(), pdfas())
def test_eq_tolerance_witness_is_valid(backend, a, b):
    if a.alphabet != b.alphabet:
        return
    t = 0.1
    cex = eq_tolerance(a, b, t)
    far = lambda d1, d2: max(abs(x - y) for x, y in zip(d1, d2)) > t  # noqa: E731
    if cex is not None:
        assert far(a.next_dist(cex), b.next_dist(cex))
    if bfs_difference(a, b, far) is None:
        # no reachable far pair at all: the check must accept
        assert cex is None


def test_eq_on_random_generated(backend):
    rng = np.random.default_rng(5)
    from conftest import random_small_pdfa

    for _ in range(20):
        a = random_small_pdfa(rng, 10, 2)
        assert eq_quantized(a, a, 1000) is None
        assert oracle_bisim(a, a, 1000)
