"""Compare the compiled kernels with the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--states 2000] [--repeat 5]

Times each kernel on inputs drawn from random automata, then times whole
learner runs with the kernel module patched to one backend at a time.
"""
import argparse
import statistics
import time
from contextlib import contextmanager

import numpy as np

from quantpdfa import _pykernels, kernels
from quantpdfa.lpstar import LpStarLearner
from quantpdfa.quant import QuantLearner
from quantpdfa.quantize import quantize_distribution
from quantpdfa.randgen import GenConfig, random_pdfa
from quantpdfa.teacher import PdfaTeacher

try:
    from quantpdfa import _ckernels
except ImportError:
    _ckernels = None

NAMES = ("refine", "hk_labels", "hk_tolerance", "first_far_row", "first_inconsistency")


@contextmanager
def use(impl):
    saved = {n: getattr(kernels, n) for n in NAMES}
    for n in NAMES:
        setattr(kernels, n, getattr(impl, n))
    try:
        yield
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)


def best_ms(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append((time.perf_counter() - t0) * 1000)
    return min(times)


def kernel_cases(n, seed):
    a = random_pdfa(GenConfig(n, 2, 4, seed))
    b = random_pdfa(GenConfig(n, 2, 4, seed + 1))
    labels = [quantize_distribution(d, 1000) for d in a.dists]
    ids = {v: i for i, v in enumerate(dict.fromkeys(labels))}
    la = np.array([ids[v] for v in labels], dtype=np.int64)
    ta, tb = a.trans_array, b.trans_array
    pa, pb = a.prob_array, b.prob_array
    rng = np.random.default_rng(seed)
    ref = rng.random((200, 12))
    # every row is close to some reference row, so the scan runs to the end
    rows = ref[rng.integers(0, 200, size=400)] + rng.uniform(-1e-3, 1e-3, (400, 12))
    red = np.repeat(rng.random((1, 12)), 150, axis=0)
    succ = np.repeat(red[:, None, :], 2, axis=1)
    return {
        "refine": lambda k: k.refine(ta, labels),
        # equivalent inputs force a full product traversal
        "hk_labels": lambda k: k.hk_labels(ta, ta, 0, 0, la, la),
        "hk_tolerance": lambda k: k.hk_tolerance(ta, tb, 0, 0, pa, pb, 1.0),
        "first_far_row": lambda k: k.first_far_row(rows, ref, 0.01),
        "first_inconsistency": lambda k: k.first_inconsistency(red, succ, 0.01),
    }


def learner_cases(n, seed):
    target = random_pdfa(GenConfig(n, 2, None, seed))
    return {
        "quant run": lambda: QuantLearner(PdfaTeacher(target), 1000).run(),
        "lpstar run": lambda: LpStarLearner(PdfaTeacher(target), 1e-3).run(),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=2000)
    ap.add_argument("--learner-states", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return 1
    impls = {"python": _pykernels, "cython": _ckernels}
    print(f"{'case':<22}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, call in kernel_cases(args.states, args.seed).items():
        ms = {k: best_ms(lambda: call(impl), args.repeat) for k, impl in impls.items()}
        print(f"{name:<22}{ms['python']:>12.3f}{ms['cython']:>12.3f}{ms['python'] / ms['cython']:>9.1f}x")
    for name, run in learner_cases(args.learner_states, args.seed).items():
        ms = {}
        for k, impl in impls.items():
            with use(impl):
                ms[k] = statistics.median(best_ms(run, 1) for _ in range(args.repeat))
        print(f"{name:<22}{ms['python']:>12.3f}{ms['cython']:>12.3f}{ms['python'] / ms['cython']:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
