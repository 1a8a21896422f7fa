"""Probabilistic deterministic finite automata.

A PDFA is a deterministic automaton whose states each carry a next-symbol
distribution over ``{"$"} | symbols``. Distribution vectors use a fixed
layout: index 0 is the terminal ``"$"``, then the symbols in alphabet order.

Internally, strings are tuples of symbol codes (``0..m-1``); the terminal is
encoded as ``-1`` so that the layout index of any code ``c`` is ``c + 1``.
The module-level functions accept user-facing symbol sequences and encode them.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ContractViolation, InputError

TERMINAL = "$"
TERMINAL_CODE = -1
SIMPLEX_TOL = 1e-9
PROB_SLACK = 1e-12

Distribution = tuple  # tuple[float, ...] in alphabet layout


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        syms = tuple(str(s) for s in self.symbols)
        object.__setattr__(self, "symbols", syms)
        if len(set(syms)) != len(syms):
            raise InputError(f"duplicate symbols in alphabet {syms!r}")
        if TERMINAL in syms:
            raise InputError('"$" is reserved for the terminal symbol')
        if any(not s for s in syms):
            raise InputError("symbols must be non-empty")

    def __len__(self):
        return len(self.symbols)

    @cached_property
    def _index(self):
        return {s: i for i, s in enumerate(self.symbols)}

    @property
    def layout(self) -> tuple[str, ...]:
        return (TERMINAL,) + self.symbols

    def code(self, symbol: str, allow_terminal: bool = False) -> int:
        if allow_terminal and symbol == TERMINAL:
            return TERMINAL_CODE
        try:
            return self._index[symbol]
        except KeyError:
            raise InputError(f"unknown symbol {symbol!r}") from None

    def encode(self, s, allow_terminal: bool = False) -> tuple[int, ...]:
        """Encode a symbol sequence.

        A plain ``str`` is split into characters when every symbol is a single
        character, otherwise on whitespace.
        """
        if isinstance(s, str):
            if all(len(x) == 1 for x in self.symbols):
                tokens = list(s)
            else:
                tokens = s.split()
        else:
            tokens = list(s)
        codes = tuple(self.code(t, allow_terminal) for t in tokens)
        if allow_terminal and TERMINAL_CODE in codes[:-1]:
            raise InputError('"$" may only appear as the last symbol')
        return codes

    def decode(self, codes: Iterable[int]) -> tuple[str, ...]:
        return tuple(TERMINAL if c == TERMINAL_CODE else self.symbols[c] for c in codes)

    def show(self, codes: Sequence[int]) -> str:
        """Human-readable form of an encoded string; the empty string is "λ"."""
        if not codes:
            return "λ"
        sep = "" if all(len(x) == 1 for x in self.symbols) else " "
        return sep.join(self.decode(codes))


class Pdfa:
    """Immutable PDFA with dense integer states.

    ``dists[q]`` is the next-symbol distribution of state ``q`` and
    ``trans[q][a]`` the successor of ``q`` on symbol code ``a``. Entries of
    ``trans`` may be ``-1`` for a missing transition; such automata are only
    useful as input to :func:`validate`.
    """

    def __init__(self, alphabet, dists, trans, initial: int = 0):
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(tuple(alphabet))
        self.alphabet = alphabet
        self.dists = tuple(tuple(float(x) for x in d) for d in dists)
        self.trans = tuple(tuple(-1 if t is None else int(t) for t in row) for row in trans)
        self.initial = int(initial)
        if len(self.dists) != len(self.trans):
            raise InputError("dists and trans must have one entry per state")
        if not self.dists:
            raise InputError("a PDFA needs at least one state")
        width = len(alphabet) + 1
        for q, d in enumerate(self.dists):
            if len(d) != width:
                raise InputError(f"state {q}: distribution has {len(d)} entries, expected {width}")
        for q, row in enumerate(self.trans):
            if len(row) != len(alphabet):
                raise InputError(f"state {q}: expected {len(alphabet)} transitions")

    def __len__(self):
        return len(self.dists)

    def __repr__(self):
        return f"Pdfa(states={len(self)}, alphabet={list(self.alphabet.symbols)})"

    def __eq__(self, other):
        if not isinstance(other, Pdfa):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.dists == other.dists
                and self.trans == other.trans and self.initial == other.initial)

    def __hash__(self):
        return hash((self.alphabet, self.dists, self.trans, self.initial))

    @property
    def n_states(self) -> int:
        return len(self.dists)

    @cached_property
    def trans_array(self) -> np.ndarray:
        arr = np.array(self.trans, dtype=np.int64).reshape(len(self), len(self.alphabet))
        arr.setflags(write=False)
        return arr

    @cached_property
    def prob_array(self) -> np.ndarray:
        arr = np.array(self.dists, dtype=np.float64)
        arr.setflags(write=False)
        return arr

    # encoded-string primitives, used by the learners

    def run(self, codes: Sequence[int], q: int | None = None) -> int:
        q = self.initial if q is None else q
        trans = self.trans
        for c in codes:
            q = trans[q][c]
        return q

    def next_dist(self, codes: Sequence[int], q: int | None = None) -> Distribution:
        return self.dists[self.run(codes, q)]

    def last_prob(self, codes: Sequence[int], q: int | None = None) -> float:
        if not codes:
            raise InputError("last-symbol probability needs a non-empty string")
        return self.dists[self.run(codes[:-1], q)][codes[-1] + 1]

    def prob(self, codes: Sequence[int], q: int | None = None) -> float:
        q = self.initial if q is None else q
        p = 1.0
        for c in codes:
            p *= self.dists[q][c + 1]
            q = self.trans[q][c]
        return p * self.dists[q][0]

    def reachable(self) -> list[int]:
        """States reachable from the initial one, in BFS discovery order."""
        order = [self.initial]
        seen = {self.initial}
        queue = deque(order)
        while queue:
            q = queue.popleft()
            for t in self.trans[q]:
                if t >= 0 and t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order


def single_state(alphabet, dist) -> Pdfa:
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(tuple(alphabet))
    return Pdfa(alphabet, [dist], [[0] * len(alphabet)], 0)


def _state(pdfa: Pdfa, q: int | None) -> int:
    if q is None:
        return pdfa.initial
    if not 0 <= q < len(pdfa):
        raise InputError(f"no state {q}")
    return q


def string_prob(pdfa: Pdfa, s) -> float:
    """Probability that the PDFA generates exactly ``s`` (terminated by "$")."""
    return pdfa.prob(pdfa.alphabet.encode(s))


def tau_star(pdfa: Pdfa, q: int | None, s) -> int:
    return pdfa.run(pdfa.alphabet.encode(s), _state(pdfa, q))


def pi_star(pdfa: Pdfa, s, q: int | None = None) -> Distribution:
    return pdfa.next_dist(pdfa.alphabet.encode(s), _state(pdfa, q))


def last_symbol_prob(pdfa: Pdfa, s, q: int | None = None) -> float:
    """Probability of the last symbol of ``s`` given its prefix; "$" allowed last."""
    return pdfa.last_prob(pdfa.alphabet.encode(s, allow_terminal=True), _state(pdfa, q))


# congruences

@dataclass(frozen=True)
class Partition:
    class_of: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        groups: dict[int, list[int]] = {}
        for q, c in enumerate(self.class_of):
            groups.setdefault(c, []).append(q)
        if sorted(groups) != list(range(len(groups))):
            raise InputError("class ids must be dense")
        object.__setattr__(self, "classes", tuple(tuple(groups[c]) for c in range(len(groups))))

    def __len__(self):
        return len(self.classes)

    def same(self, q1: int, q2: int) -> bool:
        return self.class_of[q1] == self.class_of[q2]


def exact_key(dist: Distribution) -> Hashable:
    return dist


def quantized_key(kappa: int) -> Callable[[Distribution], Hashable]:
    from .quantize import quantize_distribution

    return lambda dist: quantize_distribution(dist, kappa)


def compute_partition(pdfa: Pdfa, key: Callable[[Distribution], Hashable] = exact_key) -> Partition:
    """Coarsest congruence whose classes share ``key(pi(q))``.

    With :func:`exact_key` this is state equivalence; with
    :func:`quantized_key` it is the quantized equivalence.
    """
    if any(t < 0 for row in pdfa.trans for t in row):
        raise InputError("transition function is not total")
    return Partition(tuple(kernels.refine(pdfa.trans_array, [key(d) for d in pdfa.dists])))


def quotient(pdfa: Pdfa, partition: Partition) -> Pdfa:
    """Quotient automaton over the reachable classes.

    Classes are numbered in BFS order from the initial class; each class takes
    the distribution of its first-discovered member.
    """
    if len(partition.class_of) != len(pdfa):
        raise ContractViolation("partition does not cover the automaton's states")
    cls = partition.class_of
    for members in partition.classes:
        first = members[0]
        for q in members[1:]:
            for a, t in enumerate(pdfa.trans[q]):
                if cls[t] != cls[pdfa.trans[first][a]]:
                    raise ContractViolation("partition is not closed under transitions")
    rep: dict[int, int] = {}
    for q in pdfa.reachable():
        rep.setdefault(cls[q], q)
    new_id = {c: i for i, c in enumerate(rep)}
    dists = [pdfa.dists[q] for q in rep.values()]
    trans = [[new_id[cls[t]] for t in pdfa.trans[q]] for q in rep.values()]
    return Pdfa(pdfa.alphabet, dists, trans, new_id[cls[pdfa.initial]])


def is_weakly_minimal(pdfa: Pdfa, key: Callable[[Distribution], Hashable] = exact_key) -> bool:
    return len(compute_partition(pdfa, key)) == len(pdfa)


def disjoint_union(a: Pdfa, b: Pdfa) -> tuple[Pdfa, int]:
    """Both automata side by side; returns the union and the offset of ``b``.

    The union's initial state is ``a``'s.
    """
    if a.alphabet != b.alphabet:
        raise InputError("alphabets differ")
    off = len(a)
    trans = list(a.trans) + [[t + off for t in row] for row in b.trans]
    return Pdfa(a.alphabet, a.dists + b.dists, trans, a.initial), off


def accessible(pdfa: Pdfa) -> Pdfa:
    """Restriction to reachable states, renumbered in BFS order."""
    order = pdfa.reachable()
    idx = {q: i for i, q in enumerate(order)}
    return Pdfa(pdfa.alphabet, [pdfa.dists[q] for q in order],
                [[idx[t] for t in pdfa.trans[q]] for q in order], 0)


# diagnostics

@dataclass(frozen=True)
class Violation:
    kind: str  # "simplex", "range", "totality", "initial", "unreachable"
    state: int | None
    message: str
    warning: bool = False


def validate(pdfa: Pdfa) -> list[Violation]:
    """All problems found in ``pdfa``; errors first, unreachable-state warnings last.

    The automaton is usable iff no returned violation has ``warning=False``.
    """
    out = []
    n = len(pdfa)
    if not 0 <= pdfa.initial < n:
        out.append(Violation("initial", None, f"initial state {pdfa.initial} out of range"))
    for q, d in enumerate(pdfa.dists):
        if any(not (-PROB_SLACK <= x <= 1 + PROB_SLACK) or math.isnan(x) for x in d):
            out.append(Violation("range", q, f"state {q}: probability outside [0, 1]"))
        total = math.fsum(d)
        if abs(total - 1.0) > SIMPLEX_TOL:
            out.append(Violation("simplex", q, f"state {q}: probabilities sum to {total!r}"))
    for q, row in enumerate(pdfa.trans):
        for a, t in enumerate(row):
            if not 0 <= t < n:
                sym = pdfa.alphabet.symbols[a]
                out.append(Violation("totality", q, f"state {q}: no valid transition on {sym!r}"))
    if not any(v.kind in ("initial", "totality") for v in out):
        reach = set(pdfa.reachable())
        out.extend(Violation("unreachable", q, f"state {q} is unreachable", warning=True)
                   for q in range(n) if q not in reach)
    return out


def errors_of(violations: Iterable[Violation]) -> list[Violation]:
    return [v for v in violations if not v.warning]


# serialization

def to_dict(pdfa: Pdfa) -> dict:
    layout = pdfa.alphabet.layout
    return {
        "alphabet": list(pdfa.alphabet.symbols),
        "initial": pdfa.initial,
        "states": [
            {
                "id": q,
                "dist": dict(zip(layout, pdfa.dists[q])),
                "trans": dict(zip(pdfa.alphabet.symbols, pdfa.trans[q])),
            }
            for q in range(len(pdfa))
        ],
    }


def from_dict(doc: dict, check: bool = True) -> Pdfa:
    try:
        alphabet = Alphabet(tuple(doc["alphabet"]))
        states = sorted(doc["states"], key=lambda st: int(st["id"]))
        ids = [int(st["id"]) for st in states]
        if ids != list(range(len(ids))):
            raise InputError("state ids must be 0..n-1")
        dists, trans = [], []
        for st in states:
            d = st["dist"]
            unknown = set(d) - set(alphabet.layout)
            if unknown:
                raise InputError(f"state {st['id']}: unknown symbols {sorted(unknown)}")
            dists.append([float(d.get(s, 0.0)) for s in alphabet.layout])
            tr = st.get("trans", {})
            if set(tr) - set(alphabet.symbols):
                raise InputError(f"state {st['id']}: unknown transition symbols")
            trans.append([tr.get(s) for s in alphabet.symbols])
        pdfa = Pdfa(alphabet, dists, trans, int(doc["initial"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed PDFA document: {exc}") from exc
    if check:
        errs = errors_of(validate(pdfa))
        if errs:
            raise InputError("; ".join(v.message for v in errs))
    return pdfa


def dumps(pdfa: Pdfa) -> str:
    return json.dumps(to_dict(pdfa), indent=1) + "\n"


def loads(text: str, check: bool = True) -> Pdfa:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return from_dict(doc, check)


def save(pdfa: Pdfa, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(pdfa))


def load(path, check: bool = True) -> Pdfa:
    with open(path, encoding="utf-8") as f:
        return loads(f.read(), check)


def to_dot(pdfa: Pdfa, name: str = "pdfa") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point];']
    for q, d in enumerate(pdfa.dists):
        lines.append(f'  q{q} [label="q{q}\\n$:{d[0]:g}"];')
    lines.append(f"  __start -> q{pdfa.initial};")
    for q, row in enumerate(pdfa.trans):
        for a, t in enumerate(row):
            sym = pdfa.alphabet.symbols[a]
            lines.append(f'  q{q} -> q{t} [label="{sym}/{pdfa.dists[q][a + 1]:g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
