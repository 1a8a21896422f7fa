"""Random PDFA generation.

A random DFA with ``N`` states (uniform transitions) has an accessible part
of expected size about ``N * rho_m / m``, where
``rho_m = m + W0(-m * exp(-m))``. To aim at ``n`` reachable states we draw
``N = round(n * m / rho_m)`` states, keep the accessible part, and attach a
next-symbol distribution to each state. The actual size varies around ``n``;
no rejection loop is used.

Randomness comes from numpy's PCG64. Independent trials use child streams
spawned from one ``SeedSequence``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .pdfa import Pdfa

_INV_E = math.exp(-1.0)


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function (real, x >= -1/e)."""
    if x < -_INV_E:
        if x > -_INV_E - 1e-15:
            return -1.0
        raise InputError(f"lambert_w0 is undefined for x < -1/e, got {x!r}")
    if x == 0.0:
        return 0.0
    if x == -_INV_E:
        return -1.0
    # initial guess: branch-point series near -1/e, log asymptotics for large x
    if x < -0.25:
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    elif x < 3.0:
        w = math.log1p(x)
    else:
        lx = math.log(x)
        w = lx - math.log(lx)
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        if f == 0.0:
            break
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w_new = w - step
        # damping keeps the iterate on the principal branch
        if w_new <= -1.0:
            w_new = (w - 1.0) / 2.0
        if abs(w_new - w) <= 1e-16 * max(1.0, abs(w_new)):
            w = w_new
            break
        w = w_new
    return w


def accessible_ratio(m: int) -> float:
    """``rho_m = m + W0(-m e^{-m})``."""
    return m + lambert_w0(-m * math.exp(-m))


def sample_size(n: int, m: int) -> int:
    if n < 1 or m < 1:
        raise InputError("n and m must be positive")
    if m == 1:
        return n
    return max(n, round(n * m / accessible_ratio(m)))


def random_dfa(n_states: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform transition table, shape ``(n_states, m)``; state 0 is initial."""
    if n_states < 1:
        raise InputError("need at least one state")
    return rng.integers(0, n_states, size=(n_states, m), dtype=np.int64)


def accessible_part(trans: np.ndarray, initial: int = 0) -> np.ndarray:
    """Reachable sub-table, states renumbered in depth-first discovery order."""
    rows = trans.tolist()
    order = {initial: 0}
    stack = [(initial, 0)]
    while stack:
        q, a = stack[-1]
        if a == len(rows[q]):
            stack.pop()
            continue
        stack[-1] = (q, a + 1)
        t = rows[q][a]
        if t not in order:
            order[t] = len(order)
            stack.append((t, 0))
    old = sorted(order, key=order.get)
    return np.array([[order[t] for t in rows[q]] for q in old], dtype=np.int64).reshape(len(old), -1)


def random_distribution(m: int, rng: np.random.Generator) -> tuple:
    """Uniform point on the simplex over the terminal plus ``m`` symbols."""
    x = rng.standard_exponential(m + 1)
    return tuple((x / x.sum()).tolist())


@dataclass(frozen=True)
class GenConfig:
    n: int
    m: int
    d: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or (self.d is not None and self.d < 1):
            raise InputError(f"invalid generator configuration {self!r}")


def symbols_for(m: int) -> list[str]:
    """Default alphabet names: ``0..m-1``."""
    return [str(i) for i in range(m)]


def random_pdfa(cfg: GenConfig, rng: np.random.Generator | None = None) -> Pdfa:
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
    trans = accessible_part(random_dfa(sample_size(cfg.n, cfg.m), cfg.m, rng))
    k = len(trans)
    if cfg.d is None:
        dists = [random_distribution(cfg.m, rng) for _ in range(k)]
    else:
        pool = [random_distribution(cfg.m, rng) for _ in range(cfg.d)]
        dists = [pool[i] for i in rng.integers(0, cfg.d, size=k)]
    return Pdfa(symbols_for(cfg.m), dists, trans.tolist(), 0)


def child_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent streams for ``count`` trials derived from one seed."""
    return [np.random.Generator(np.random.PCG64(s))
            for s in np.random.SeedSequence(seed).spawn(count)]
