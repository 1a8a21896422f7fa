"""Observation-table baseline learner with tolerance-based row similarity.

Rows are indexed by prefixes split into RED (state candidates) and BLUE
(their one-symbol continuations); columns are suffixes ending in a symbol or
the terminal. A cell holds the probability of the suffix's last symbol after
reading ``prefix + suffix[:-1]``. Two rows are t-equal when their L-inf
distance is at most ``t``. Since t-equality is not transitive, RED rows are
grouped into states by greedy clustering, then the grouping is refined until
the induced transition relation is deterministic.

``col=True`` selects the column-expansion variant: counterexamples add
suffixes instead of prefixes and the consistency check is skipped.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ContractViolation, InputError, LearningStalled
from .pdfa import TERMINAL_CODE, Pdfa
from .teacher import Teacher

Word = tuple  # tuple[int, ...]


class ObservationTable:
    def __init__(self, teacher: Teacher, t: float):
        if not 0.0 <= t <= 1.0:
            raise InputError(f"tolerance must lie in [0, 1], got {t!r}")
        self.teacher = teacher
        self.t = t
        m = len(teacher.alphabet)
        self.suf: list[Word] = [(TERMINAL_CODE,)] + [(a,) for a in range(m)]
        self._suf_set = set(self.suf)
        self.red: list[Word] = []
        self.blue: list[Word] = []
        self._red_set: set = set()
        self._blue_set: set = set()
        self._rows: dict[Word, list[float]] = {}
        self.add_red(())

    @property
    def m(self) -> int:
        return len(self.teacher.alphabet)

    def _cell(self, p: Word, s: Word) -> float:
        return self.teacher.mq_last_symbol(p + s)

    def row(self, p: Word) -> list[float]:
        r = self._rows.get(p)
        if r is None:
            r = self._rows[p] = [self._cell(p, s) for s in self.suf]
        elif len(r) < len(self.suf):
            r.extend(self._cell(p, s) for s in self.suf[len(r):])
        return r

    def cells(self) -> int:
        return (len(self.red) + len(self.blue)) * len(self.suf)

    def add_suffix(self, s: Word) -> bool:
        if not s or TERMINAL_CODE in s[:-1]:
            raise InputError(f"invalid suffix {s!r}")
        if s in self._suf_set:
            return False
        self.suf.append(s)
        self._suf_set.add(s)
        for p in self.red + self.blue:
            self.row(p)
        return True

    def add_red(self, p: Word) -> bool:
        """Move or add ``p`` to RED and put its continuations in BLUE."""
        if p in self._red_set:
            return False
        if p in self._blue_set:
            self.blue.remove(p)
            self._blue_set.discard(p)
        self.red.append(p)
        self._red_set.add(p)
        self.row(p)
        for a in range(self.m):
            q = p + (a,)
            if q not in self._red_set and q not in self._blue_set:
                self.blue.append(q)
                self._blue_set.add(q)
                self.row(q)
        return True

    def is_red(self, p: Word) -> bool:
        return p in self._red_set

    def matrix(self, prefixes) -> np.ndarray:
        k = len(self.suf)
        return np.array([self.row(p) for p in prefixes], dtype=np.float64).reshape(-1, k)

    def check_closed(self) -> Word | None:
        """First BLUE prefix whose row is t-far from every RED row."""
        i = kernels.first_far_row(self.matrix(self.blue), self.matrix(self.red), self.t)
        return None if i < 0 else self.blue[i]

    def check_consistent(self) -> tuple[Word, Word, int, Word] | None:
        """First (p, p', a, s): p, p' t-equal RED rows whose a-continuations differ on s."""
        succ = np.array([[self.row(p + (a,)) for a in range(self.m)] for p in self.red],
                        dtype=np.float64).reshape(len(self.red), self.m, len(self.suf))
        hit = kernels.first_inconsistency(self.matrix(self.red), succ, self.t)
        if hit is None:
            return None
        i, j, a, col = hit
        return self.red[i], self.red[j], a, self.suf[col]

    def dump(self) -> str:
        """TSV: prefix, RED/BLUE tag, one column per suffix."""
        show = self.teacher.alphabet.show
        lines = ["\t".join(["prefix", "part"] + [show(s) for s in self.suf])]
        for tag, group in (("RED", self.red), ("BLUE", self.blue)):
            for p in group:
                lines.append("\t".join([show(p), tag] + [repr(x) for x in self.row(p)]))
        return "\n".join(lines) + "\n"


def expand(table: ObservationTable, consistency: bool = True) -> int:
    """Make the table closed (and consistent); returns the number of fixes applied."""
    fixes = 0
    while True:
        p = table.check_closed()
        if p is not None:
            table.add_red(p)
            fixes += 1
            continue
        if consistency:
            w = table.check_consistent()
            if w is not None:
                table.add_suffix((w[2],) + w[3])
                fixes += 1
                continue
        return fixes


@dataclass
class RowPartition:
    cluster_of: dict  # red prefix -> cluster id
    members: list  # cluster id -> list of red prefixes
    centroids: list  # cluster id -> np.ndarray over suf

    def __len__(self):
        return len(self.members)


def _close(rows: np.ndarray, ref: np.ndarray, t: float) -> np.ndarray:
    """Boolean matrix: ``rows[i]`` t-equal to ``ref[j]``."""
    if rows.size == 0 or ref.size == 0:
        return np.zeros((len(rows), len(ref)), dtype=bool)
    return np.abs(rows[:, None, :] - ref[None, :, :]).max(axis=2) <= t


def _closest(row: np.ndarray, centroids, candidates) -> int:
    best, best_d = -1, np.inf
    for c in candidates:
        d = float(np.sum((centroids[c] - row) ** 2))
        if d < best_d:
            best, best_d = c, d
    return best


def _partition(table: ObservationTable, groups) -> RowPartition:
    cluster_of = {p: c for c, ps in enumerate(groups) for p in ps}
    centroids = [table.matrix(ps).mean(axis=0) for ps in groups]
    return RowPartition(cluster_of, [list(ps) for ps in groups], centroids)


def greedy_cluster(table: ObservationTable) -> RowPartition:
    """Scan RED rows in order; join the cluster whose members are all t-equal.

    Several qualifying clusters: nearest centroid (Euclidean), lowest id on ties.
    """
    rows = table.matrix(table.red)
    close = _close(rows, rows, table.t)
    groups: list[list[int]] = []
    sums: list[np.ndarray] = []
    for i in range(len(rows)):
        cands = [c for c, idx in enumerate(groups) if close[i, idx].all()]
        if not cands:
            groups.append([i])
            sums.append(rows[i].copy())
            continue
        if len(cands) == 1:
            c = cands[0]
        else:
            c = _closest(rows[i], {c: sums[c] / len(groups[c]) for c in cands}, cands)
        groups[c].append(i)
        sums[c] += rows[i]
    return _partition(table, [[table.red[i] for i in idx] for idx in groups])


def _choices(table: ObservationTable, g: RowPartition) -> dict:
    """Target cluster chosen for every (red prefix, symbol)."""
    red_index = {p: i for i, p in enumerate(table.red)}
    cluster = np.array([g.cluster_of[p] for p in table.red])
    pending = [(p, a) for p in table.red for a in range(table.m) if not table.is_red(p + (a,))]
    rows = table.matrix([p + (a,) for p, a in pending])
    close = _close(rows, table.matrix(table.red), table.t)
    choice = {}
    for p in table.red:
        for a in range(table.m):
            q = p + (a,)
            if q in red_index:
                choice[p, a] = g.cluster_of[q]
    for k, (p, a) in enumerate(pending):
        cands = sorted(set(cluster[close[k]].tolist()))
        if not cands:
            raise ContractViolation(f"table is not closed: no RED row t-equal to {p + (a,)!r}")
        choice[p, a] = cands[0] if len(cands) == 1 else _closest(rows[k], g.centroids, cands)
    return choice


def add_transitions(table: ObservationTable, g: RowPartition) -> dict:
    """Transition relation as ``{(cluster, symbol): set of target clusters}``."""
    rel: dict = {}
    for (p, a), c in _choices(table, g).items():
        rel.setdefault((g.cluster_of[p], a), set()).add(c)
    return rel


def is_deterministic(rel: dict) -> bool:
    return all(len(ts) == 1 for ts in rel.values())


def refine_to_deterministic(table: ObservationTable, g: RowPartition) -> tuple[RowPartition, dict]:
    """Split clusters by per-row transition signature until the relation is a function."""
    while True:
        choice = _choices(table, g)
        rel: dict = {}
        for (p, a), c in choice.items():
            rel.setdefault((g.cluster_of[p], a), set()).add(c)
        if is_deterministic(rel):
            return g, rel
        groups: dict = {}
        for p in table.red:
            sig = (g.cluster_of[p],) + tuple(choice[p, a] for a in range(table.m))
            groups.setdefault(sig, []).append(p)
        if len(groups) == len(g):
            raise ContractViolation("refinement made no progress")
        g = _partition(table, list(groups.values()))


def build_hypothesis_lp(table: ObservationTable, g: RowPartition | None = None) -> Pdfa:
    """Hypothesis whose states are the refined clusters of RED rows.

    A state's distribution is its centroid restricted to the one-symbol and
    terminal columns, renormalized to sum to 1.
    """
    g, rel = refine_to_deterministic(table, greedy_cluster(table) if g is None else g)
    return _assemble(table, g, rel)


def _assemble(table: ObservationTable, g: RowPartition, rel: dict) -> Pdfa:
    m = table.m
    try:
        cols = [table.suf.index((TERMINAL_CODE,))] + [table.suf.index((a,)) for a in range(m)]
    except ValueError:
        raise ContractViolation("suffixes must include the terminal and every symbol") from None
    dists = []
    for cen in g.centroids:
        d = np.clip(cen[cols], 0.0, None)
        dists.append(d / d.sum())
    trans = [[next(iter(rel[c, a])) for a in range(m)] for c in range(len(g))]
    return Pdfa(table.teacher.alphabet, dists, trans, g.cluster_of[()])


def handle_counterexample_lp(table: ObservationTable, gamma: Word) -> bool:
    """Add every prefix of ``gamma`` to RED; True if the table changed."""
    changed = False
    for i in range(len(gamma) + 1):
        changed |= table.add_red(tuple(gamma[:i]))
    return changed


def handle_counterexample_col(table: ObservationTable, gamma: Word) -> bool:
    """Add every suffix of ``gamma``, extended by each symbol and the terminal, as a column."""
    changed = False
    ends = [TERMINAL_CODE] + list(range(table.m))
    for i in range(len(gamma) + 1):
        for a in ends:
            changed |= table.add_suffix(tuple(gamma[i:]) + (a,))
    return changed


class LpStarLearner:
    def __init__(self, teacher: Teacher, t: float, col: bool = False):
        self.teacher = teacher
        self.t = t
        self.col = col
        self.table = ObservationTable(teacher, t)
        self.partition: RowPartition | None = None
        self.hypothesis: Pdfa | None = None
        self.rounds = 0

    def structure_size(self) -> int:
        return self.table.cells()

    def run(self) -> Pdfa:
        table = self.table
        while True:
            self.rounds += 1
            expand(table, consistency=not self.col)
            g, rel = refine_to_deterministic(table, greedy_cluster(table))
            self.partition = g
            hyp = self.hypothesis = _assemble(table, g, rel)
            gamma = self.teacher.eq_tolerance(hyp, self.t)
            if gamma is None:
                return hyp
            if self.col:
                changed = handle_counterexample_col(table, gamma)
            else:
                changed = handle_counterexample_lp(table, gamma)
            if not changed:
                raise LearningStalled(
                    f"counterexample {table.teacher.alphabet.show(gamma)!r} adds nothing to the table")


def learn_lpstar(teacher: Teacher, t: float) -> Pdfa:
    return LpStarLearner(teacher, t).run()


def learn_lpstar_col(teacher: Teacher, t: float) -> Pdfa:
    return LpStarLearner(teacher, t, col=True).run()
