"""Minimally adequate teachers for PDFA learning.

A teacher answers membership queries (the next-symbol distribution after a
string, or the probability of a string's last symbol) and equivalence
queries against a hypothesis. :class:`PdfaTeacher` hides a target PDFA.
"""
from __future__ import annotations

import abc
from typing import Sequence

import numpy as np

from . import kernels
from .errors import InputError
from .pdfa import Alphabet, Distribution, Pdfa, compute_partition, disjoint_union, quantized_key
from .quantize import quantize_distribution


class Teacher(abc.ABC):
    """Oracle interface used by the learners. Strings are tuples of symbol codes."""

    def __init__(self):
        self.mq_calls = 0
        self.mq_misses = 0
        self.eq_count = 0

    @property
    @abc.abstractmethod
    def alphabet(self) -> Alphabet:
        ...

    @abc.abstractmethod
    def mq_next_symbol(self, s: Sequence[int]) -> Distribution:
        ...

    def mq_last_symbol(self, s: Sequence[int]) -> float:
        """Probability of the last symbol of ``s`` (code -1 is the terminal)."""
        if not s:
            raise InputError("last-symbol query needs a non-empty string")
        return self.mq_next_symbol(s[:-1])[s[-1] + 1]

    @abc.abstractmethod
    def eq_quantized(self, hyp: Pdfa, kappa: int) -> tuple[int, ...] | None:
        ...

    @abc.abstractmethod
    def eq_tolerance(self, hyp: Pdfa, t: float) -> tuple[int, ...] | None:
        ...

    @property
    def mq_count(self) -> int:
        """Queries that reached the target (cache misses)."""
        return self.mq_misses


class PdfaTeacher(Teacher):
    def __init__(self, target: Pdfa, cache: bool = True):
        super().__init__()
        self.target = target
        self._cache: dict | None = {} if cache else None

    @property
    def alphabet(self) -> Alphabet:
        return self.target.alphabet

    def mq_next_symbol(self, s):
        self.mq_calls += 1
        s = tuple(s)
        cache = self._cache
        if cache is not None:
            d = cache.get(s)
            if d is not None:
                return d
        m = len(self.target.alphabet)
        if any(not 0 <= c < m for c in s):
            raise InputError(f"string {s!r} contains codes outside the alphabet")
        self.mq_misses += 1
        d = self.target.next_dist(s)
        if cache is not None:
            cache[s] = d
        return d

    def eq_quantized(self, hyp, kappa):
        self.eq_count += 1
        return eq_quantized(self.target, hyp, kappa)

    def eq_tolerance(self, hyp, t):
        self.eq_count += 1
        return eq_tolerance(self.target, hyp, t)


def _check_pair(a: Pdfa, b: Pdfa):
    if a.alphabet != b.alphabet:
        raise InputError("automata have different alphabets")


def eq_quantized(target: Pdfa, hyp: Pdfa, kappa: int) -> tuple[int, ...] | None:
    """Quantized equivalence check by union-find over the product automaton.

    Returns ``None`` when the automata are equivalent under quantization
    ``kappa``; otherwise the shortest-by-BFS word after which the two reached
    states have different quantization vectors.
    """
    _check_pair(target, hyp)
    ids: dict = {}
    la = [ids.setdefault(quantize_distribution(d, kappa), len(ids)) for d in target.dists]
    lb = [ids.setdefault(quantize_distribution(d, kappa), len(ids)) for d in hyp.dists]
    cex = kernels.hk_labels(target.trans_array, hyp.trans_array, target.initial, hyp.initial,
                            np.array(la, dtype=np.int64), np.array(lb, dtype=np.int64))
    return None if cex is None else tuple(cex)


def eq_tolerance(target: Pdfa, hyp: Pdfa, t: float) -> tuple[int, ...] | None:
    """Same traversal as :func:`eq_quantized`, comparing pairs by L-inf <= t.

    t-closeness is not transitive, so merged classes may hide pairs that were
    never compared directly. ``None`` only means every compared pair passed.
    """
    _check_pair(target, hyp)
    if not 0.0 <= t <= 1.0:
        raise InputError(f"tolerance must lie in [0, 1], got {t!r}")
    cex = kernels.hk_tolerance(target.trans_array, hyp.trans_array, target.initial, hyp.initial,
                               target.prob_array, hyp.prob_array, t)
    return None if cex is None else tuple(cex)


def oracle_bisim(a: Pdfa, b: Pdfa, kappa: int) -> bool:
    """Whether the initial states share a class of the joint quantized partition."""
    _check_pair(a, b)
    union, off = disjoint_union(a, b)
    part = compute_partition(union, quantized_key(kappa))
    return part.same(a.initial, off + b.initial)
