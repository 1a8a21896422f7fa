"""Experiment runner: random targets, timed learner runs, metrics, CSV output.

Every grid point draws ``targets`` random PDFA and runs each learner ``runs``
times on each of them with a fresh teacher. Each target has its own integer
seed derived from the experiment seed; ``gen --seed <that seed>`` with the same
sizes rebuilds the exact target, and the test set is drawn from a second
stream keyed by the same seed.
"""
from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from statistics import median
from typing import Iterable

import numpy as np

from .errors import InputError
from .lpstar import LpStarLearner
from .metrics import logprob_err, ndcg, sample_strings, wer
from .pdfa import Pdfa
from .quant import QuantLearner
from .randgen import GenConfig, random_pdfa
from .teacher import PdfaTeacher

ALGOS = ("quant", "lpstar", "lpstar-col")
CSV_HEADER = ("algo,nominal_n,actual_n,m,kappa,tolerance,d,trial,time_ms,structure_size,"
              "mq_count,eq_count,wer,ndcg,logprob_err,seed").split(",")


@dataclass(frozen=True)
class TrialRecord:
    algo: str
    nominal_n: int
    actual_n: int
    m: int
    kappa: int
    tolerance: float
    d: int | None
    trial: int
    time_ms: float
    structure_size: int
    mq_count: int
    eq_count: int
    wer: float
    ndcg: float
    logprob_err: float
    seed: int


_INT_FIELDS = {"nominal_n", "actual_n", "m", "kappa", "trial", "structure_size",
               "mq_count", "eq_count", "seed"}
_FLOAT_FIELDS = {"tolerance", "time_ms", "wer", "ndcg", "logprob_err"}


@dataclass(frozen=True)
class GridPoint:
    n: int
    m: int
    kappa: int
    d: int | None = None

    @property
    def tolerance(self) -> float:
        return 1.0 / self.kappa


@dataclass(frozen=True)
class Experiment:
    number: int
    points: tuple
    algos: tuple = ("quant", "lpstar")
    targets: int = 5
    runs: int = 3
    test_size: int = 1000
    max_len: int = 50
    seed: int = 0

    def validate(self) -> None:
        if self.number not in EXPERIMENT_NUMBERS:
            raise InputError(f"unknown experiment {self.number!r}")
        bad = [a for a in self.algos if a not in ALGOS]
        if bad or not self.algos:
            raise InputError(f"unknown algorithm(s) {bad!r}")
        if self.targets < 1 or self.runs < 1 or self.test_size < 1 or self.max_len < 0:
            raise InputError("targets, runs and test size must be positive")
        for p in self.points:
            if p.n < 1 or p.m < 1 or p.kappa < 1 or (p.d is not None and p.d < 1):
                raise InputError(f"invalid grid point {p!r}")

    def n_trials(self) -> int:
        return len(self.points) * self.targets * self.runs * len(self.algos)


EXPERIMENT_NUMBERS = (1, 2, 3, 4, 5)


def experiment(number: int, full: bool = False, seed: int = 0, **overrides) -> Experiment:
    """Grid for one experiment; desk-scale by default, larger sweeps with ``full``."""
    if number == 1:
        ns = (100, 200, 300) if full else (25, 50, 100)
        points = tuple(GridPoint(n, 2, 1000) for n in ns)
        algos = ("quant", "lpstar")
    elif number == 2:
        ms = (2, 4, 8, 16, 32) if full else (2, 4, 8)
        n = 100 if full else 50
        points = tuple(GridPoint(n, m, 1000) for m in ms)
        algos = ("quant", "lpstar")
    elif number == 3:
        ks = (10, 100, 500, 1000, 2000, 3000) if full else (10, 100, 1000)
        n = 100 if full else 50
        points = tuple(GridPoint(n, 2, k) for k in ks)
        algos = ("quant", "lpstar")
    elif number == 4:
        ns = (1000, 2000, 5000) if full else (200, 500, 1000)
        points = tuple(GridPoint(n, 2, 1000) for n in ns)
        algos = ("quant",)
    elif number == 5:
        ds = (2, 4, 8, 16)
        n = 300 if full else 50
        points = tuple(GridPoint(n, 2, 1000, d) for d in ds)
        algos = ("quant", "lpstar")
    else:
        raise InputError(f"unknown experiment {number!r}")
    size = dict(targets=10, runs=10) if full else {}
    exp = Experiment(number, points, algos, seed=seed, **size)
    exp = replace(exp, **overrides)
    exp.validate()
    return exp


def target_seeds(seed: int, count: int) -> list[int]:
    return [int(c.generate_state(1)[0]) for c in np.random.SeedSequence(seed).spawn(count)]


def make_learner(algo: str, teacher: PdfaTeacher, point: GridPoint):
    if algo == "quant":
        return QuantLearner(teacher, point.kappa)
    if algo == "lpstar":
        return LpStarLearner(teacher, point.tolerance)
    if algo == "lpstar-col":
        return LpStarLearner(teacher, point.tolerance, col=True)
    raise InputError(f"unknown algorithm {algo!r}")


def run_trial(algo: str, target: Pdfa, point: GridPoint):
    """One timed learner run; returns (hypothesis, time_ms, structure size, teacher)."""
    teacher = PdfaTeacher(target)
    learner = make_learner(algo, teacher, point)
    t0 = time.perf_counter()
    hyp = learner.run()
    elapsed = (time.perf_counter() - t0) * 1000.0
    return hyp, elapsed, learner.structure_size(), teacher


def _target_records(exp: Experiment, point: GridPoint, k: int, tseed: int) -> list[TrialRecord]:
    target = random_pdfa(GenConfig(point.n, point.m, point.d, tseed))
    ts_rng = np.random.Generator(np.random.PCG64([tseed, 1]))
    ts = sample_strings(target, exp.test_size, exp.max_len, ts_rng, seed=tseed)
    out = []
    for algo in exp.algos:
        for r in range(exp.runs):
            hyp, ms, size, teacher = run_trial(algo, target, point)
            out.append(TrialRecord(
                algo=algo, nominal_n=point.n, actual_n=target.n_states, m=point.m,
                kappa=point.kappa, tolerance=point.tolerance, d=point.d,
                trial=k * exp.runs + r, time_ms=ms, structure_size=size,
                mq_count=teacher.mq_count, eq_count=teacher.eq_count,
                wer=wer(target, hyp, ts), ndcg=ndcg(target, hyp, ts),
                logprob_err=logprob_err(target, hyp, ts), seed=tseed))
    return out


def _jobs(exp: Experiment):
    seeds = target_seeds(exp.seed, len(exp.points) * exp.targets)
    for i, point in enumerate(exp.points):
        for k in range(exp.targets):
            yield point, k, seeds[i * exp.targets + k]


def _run_job(args):
    exp, point, k, tseed = args
    return _target_records(exp, point, k, tseed)


def run_experiment(exp: Experiment, jobs: int = 1) -> list[TrialRecord]:
    """All trial records of ``exp`` in grid order.

    With ``jobs > 1`` targets are processed in worker processes; timings then
    compete for CPU, so use ``jobs=1`` for measurements.
    """
    exp.validate()
    work = [(exp, p, k, s) for p, k, s in _jobs(exp)]
    if jobs <= 1:
        chunks = [_run_job(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_job, work))
    return [rec for chunk in chunks for rec in chunk]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(records: Iterable[TrialRecord], path) -> int:
    count = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for rec in records:
            w.writerow([_fmt(getattr(rec, f)) for f in CSV_HEADER])
            count += 1
    return count


def _parse(name: str, text: str):
    if text == "":
        if name == "d":
            return None
        raise InputError(f"empty value for column {name!r}")
    if name in _INT_FIELDS or name == "d":
        return int(text)
    if name in _FLOAT_FIELDS:
        return float(text)
    return text


def read_csv(path) -> list[TrialRecord]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise InputError(f"unexpected CSV header {header!r}")
        return [TrialRecord(**{k: _parse(k, v) for k, v in zip(header, row)}) for row in reader]


def medians(records: Iterable[TrialRecord], value: str, by=("algo", "nominal_n", "m", "kappa", "d")) -> dict:
    """Median of ``value`` grouped by the given record fields."""
    groups: dict = {}
    for rec in records:
        groups.setdefault(tuple(getattr(rec, f) for f in by), []).append(getattr(rec, value))
    return {k: median(v) for k, v in groups.items()}


def summary(records: list[TrialRecord]) -> str:
    """Per-group medians of time and structure size, plus metric extremes."""
    t = medians(records, "time_ms")
    s = medians(records, "structure_size")
    lines = ["algo\tn\tm\tkappa\td\tmedian_ms\tmedian_size"]
    for key in t:
        algo, n, m, kappa, d = key
        lines.append(f"{algo}\t{n}\t{m}\t{kappa}\t{'' if d is None else d}\t{t[key]:.2f}\t{s[key]:g}")
    if records:
        worst_wer = max(r.wer for r in records)
        worst_ndcg = min(r.ndcg for r in records)
        worst_lp = max(r.logprob_err for r in records)
        if not math.isfinite(worst_lp):
            worst_lp = float("inf")
        lines.append(f"max wer {worst_wer:g}, min ndcg {worst_ndcg:g}, max logprob_err {worst_lp:g}")
    return "\n".join(lines) + "\n"


__all__ = ["ALGOS", "CSV_HEADER", "Experiment", "GridPoint", "TrialRecord", "experiment",
           "medians", "read_csv", "run_experiment", "run_trial", "summary", "target_seeds",
           "write_csv"]
