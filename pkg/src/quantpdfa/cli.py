"""Command-line interface: ``gen``, ``learn``, ``compare`` and ``bench``.

Exit codes: 0 success, 1 input error, 2 contract violation (including a
learner that stalls).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import pdfa as core
from .bench import ALGOS, experiment, run_experiment, summary, write_csv
from .errors import ContractViolation, InputError, LearningStalled
from .lpstar import LpStarLearner
from .quant import QuantLearner
from .randgen import GenConfig, random_pdfa
from .teacher import PdfaTeacher, eq_quantized, eq_tolerance, oracle_bisim

EXIT_OK, EXIT_INPUT, EXIT_CONTRACT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse would exit with 2, which is reserved for contract violations
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _write_text(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    cfg = GenConfig(args.states, args.alphabet_size, args.dists, args.seed)
    a = random_pdfa(cfg)
    _write_text(core.dumps(a), args.out)
    print(f"generated {a.n_states} states (nominal {cfg.n})", file=sys.stderr)
    return EXIT_OK


def cmd_learn(args) -> int:
    target = core.load(args.target)
    teacher = PdfaTeacher(target)
    if args.algo == "quant":
        if args.kappa is None:
            raise InputError("--kappa is required for quant")
        learner = QuantLearner(teacher, args.kappa)
    else:
        t = args.tolerance
        if t is None:
            if args.kappa is None:
                raise InputError("--tolerance (or --kappa, giving t = 1/kappa) is required")
            t = 1.0 / args.kappa
        learner = LpStarLearner(teacher, t, col=args.algo == "lpstar-col")
    hyp = learner.run()
    _write_text(core.dumps(hyp), args.out)
    if args.dot:
        _write_text(core.to_dot(hyp), args.dot)
    print(f"{args.algo}: {hyp.n_states} states, structure size {learner.structure_size()}, "
          f"{teacher.mq_count} MQ, {teacher.eq_count} EQ", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args) -> int:
    a, b = core.load(args.a), core.load(args.b)
    if args.kappa is not None:
        cex = eq_quantized(a, b, args.kappa)
        bisim = oracle_bisim(a, b, args.kappa)
        mode = f"kappa={args.kappa}"
    else:
        cex = eq_tolerance(a, b, args.tolerance)
        bisim = None
        mode = f"tolerance={args.tolerance}"
    out = {"mode": mode, "equivalent": cex is None,
           "counterexample": None if cex is None else a.alphabet.show(cex)}
    if bisim is not None:
        out["partition_check"] = bisim
    print(json.dumps(out))
    return EXIT_OK


def cmd_bench(args) -> int:
    overrides = {}
    if args.targets is not None:
        overrides["targets"] = args.targets
    if args.runs is not None:
        overrides["runs"] = args.runs
    if args.algos:
        overrides["algos"] = tuple(args.algos.split(","))
    exp = experiment(args.experiment, full=args.full, seed=args.seed, **overrides)
    jobs = 1 if args.serial else args.jobs
    records = run_experiment(exp, jobs=jobs)
    write_csv(records, args.out)
    sys.stderr.write(summary(records))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quantpdfa", description="Learn and compare probabilistic DFA.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a random PDFA as JSON")
    g.add_argument("--states", type=int, required=True, help="nominal reachable size")
    g.add_argument("--alphabet-size", type=int, required=True)
    g.add_argument("--dists", type=int, default=None, help="draw state laws from a pool of this size")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="output path, '-' for stdout")
    g.set_defaults(func=cmd_gen)

    lp = sub.add_parser("learn", help="learn a PDFA from a target file")
    lp.add_argument("--algo", choices=ALGOS, required=True)
    lp.add_argument("--kappa", type=int, default=None)
    lp.add_argument("--tolerance", type=float, default=None)
    lp.add_argument("--target", required=True)
    lp.add_argument("--out", required=True)
    lp.add_argument("--dot", default=None)
    lp.set_defaults(func=cmd_learn)

    c = sub.add_parser("compare", help="equivalence check between two PDFA files")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    mode = c.add_mutually_exclusive_group(required=True)
    mode.add_argument("--kappa", type=int)
    mode.add_argument("--tolerance", type=float)
    c.set_defaults(func=cmd_compare)

    b = sub.add_parser("bench", help="run an experiment and write a CSV")
    b.add_argument("--experiment", type=int, choices=(1, 2, 3, 4, 5), required=True)
    b.add_argument("--full", action="store_true", help="larger grids, 10 targets x 10 runs")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True)
    b.add_argument("--targets", type=int, default=None)
    b.add_argument("--runs", type=int, default=None)
    b.add_argument("--algos", default=None, help="comma-separated subset of " + ",".join(ALGOS))
    b.add_argument("--jobs", type=int, default=1, help="worker processes (timings compete)")
    b.add_argument("--serial", action="store_true", help="force a single process")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ContractViolation, LearningStalled) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
