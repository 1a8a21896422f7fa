"""Next-symbol prediction metrics between a target and a hypothesis PDFA.

All metrics are evaluated over a test set of strings sampled from the target.
WER and NDCG look at every prefix of every string (including the empty one);
the log-probability error compares whole-string probabilities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .pdfa import Pdfa

LOG_FLOOR = 1e-300


@dataclass
class TestSet:
    __test__ = False  # not a pytest class

    strings: list  # list of tuples of symbol codes
    max_len: int
    seed: int | None = None
    truncated: list = field(default_factory=list)

    def __len__(self):
        return len(self.strings)


def sample_strings(target: Pdfa, count: int, max_len: int, rng: np.random.Generator,
                   seed: int | None = None) -> TestSet:
    """Walk the target from its initial state, drawing symbols from each state's law.

    Stops at the terminal or after ``max_len`` symbols (the string is then
    kept and flagged as truncated).
    """
    if count < 1 or max_len < 0:
        raise InputError("count must be positive and max_len non-negative")
    cum = np.cumsum(target.prob_array, axis=1)
    cum[:, -1] = np.inf
    trans = target.trans
    strings, truncated = [], []
    for _ in range(count):
        q = target.initial
        s = []
        cut = True
        while len(s) < max_len:
            k = int(np.searchsorted(cum[q], rng.random(), side="right"))
            if k == 0:
                cut = False
                break
            s.append(k - 1)
            q = trans[q][k - 1]
        strings.append(tuple(s))
        truncated.append(cut)
    return TestSet(strings, max_len, seed, truncated)


def _check(target: Pdfa, hyp: Pdfa):
    if target.alphabet != hyp.alphabet:
        raise InputError("automata have different alphabets")


def _positions(target: Pdfa, hyp: Pdfa, ts: TestSet):
    """Yield (target distribution, hypothesis distribution) at every prefix."""
    td, hd, tt, ht = target.dists, hyp.dists, target.trans, hyp.trans
    for s in ts.strings:
        p, q = target.initial, hyp.initial
        yield td[p], hd[q]
        for c in s:
            p, q = tt[p][c], ht[q][c]
            yield td[p], hd[q]


def _argmax(d) -> int:
    best = 0
    for i in range(1, len(d)):
        if d[i] > d[best]:
            best = i
    return best


def wer(target: Pdfa, hyp: Pdfa, ts: TestSet) -> float:
    """Fraction of positions where the most likely next symbol differs (ties: layout order)."""
    _check(target, hyp)
    errs = total = 0
    for a, b in _positions(target, hyp, ts):
        total += 1
        if _argmax(a) != _argmax(b):
            errs += 1
    return errs / total if total else 0.0


_DISCOUNT: dict[int, np.ndarray] = {}


def _discount(k: int) -> np.ndarray:
    d = _DISCOUNT.get(k)
    if d is None:
        d = _DISCOUNT[k] = 1.0 / np.log2(np.arange(2, k + 2))
    return d


def ndcg_position(target_dist, hyp_dist) -> float:
    """NDCG of the hypothesis ranking of next symbols, graded by target probabilities."""
    rel = np.asarray(target_dist, dtype=np.float64)
    disc = _discount(len(rel))
    order = np.argsort(-np.asarray(hyp_dist, dtype=np.float64), kind="stable")
    ideal = np.argsort(-rel, kind="stable")
    idcg = float(np.dot(rel[ideal], disc))
    if idcg == 0.0:
        return 1.0
    return float(np.dot(rel[order], disc)) / idcg


def ndcg(target: Pdfa, hyp: Pdfa, ts: TestSet) -> float:
    _check(target, hyp)
    cache: dict = {}
    total = 0.0
    count = 0
    for a, b in _positions(target, hyp, ts):
        key = (a, b)
        v = cache.get(key)
        if v is None:
            v = cache[key] = ndcg_position(a, b)
        total += v
        count += 1
    return total / count if count else 1.0


def logprob_err(target: Pdfa, hyp: Pdfa, ts: TestSet) -> float:
    """Mean absolute gap between log string probabilities (floored at 1e-300)."""
    _check(target, hyp)
    if not ts.strings:
        return 0.0
    total = 0.0
    for s in ts.strings:
        a = max(target.prob(s), LOG_FLOOR)
        b = max(hyp.prob(s), LOG_FLOOR)
        total += abs(math.log(a) - math.log(b))
    return total / len(ts.strings)
