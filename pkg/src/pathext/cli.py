"""Command line entry point: ``pathext <subcommand> ...``.

Exit status: 0 on success, 1 when a verification fails (a witness is
printed), 2 on usage or capacity errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .construct import (
    T2Spec,
    T3Spec,
    circulant_tournament,
    figure4_tournament,
    paley_tournament,
    random_regular_tournament,
    random_tournament,
    t2_tournament,
    t3_tournament,
    three_cycle,
)
from .core import CapacityError, Tournament, encode_trn, read_tournament, to_json
from .extend import is_path_extendable, nonextendable_paths
from .metrics import irregularity, pi2_with_pair
from .montecarlo import TailExperiment, pi2_tail_experiment
from .verify import (
    ALL_THEOREMS,
    TheoremId,
    check_many,
    enumerate_regular,
    sweep_exhaustive,
    sweep_sampled,
)

log = logging.getLogger("pathext")

# execution-only settings, left out of the echoed config so reports do not depend on them
_NOT_CONFIG = {"func", "jobs", "timing", "log_level"}


def _number(text: str) -> float:
    return float(Fraction(text))


def _report(args: argparse.Namespace, result: dict[str, Any]) -> str:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG}
    payload = {"tool": "pathext", "version": __version__, "config": config, "result": result}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(args: argparse.Namespace, text: str) -> None:
    out = getattr(args, "report", None)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------------------


def _generate(args) -> Tournament | None:
    fam = args.family
    if fam == "paley":
        return paley_tournament(args.q)
    if fam == "t3":
        return t3_tournament(T3Spec(args.t))
    if fam == "t2":
        return t2_tournament(T2Spec(args.p, args.n0, args.n1), seed=args.seed)
    if fam == "figure4":
        return figure4_tournament(args.k, seed=args.seed if args.permute else None)
    if fam == "circulant":
        return circulant_tournament(args.n, [int(x) for x in args.offsets.split(",")])
    if fam == "random":
        return random_tournament(args.n, args.seed)
    if fam == "random-regular":
        return random_regular_tournament(args.n, args.seed)
    if fam == "transitive":
        return Tournament.transitive(args.n)
    if fam == "cycle3":
        return three_cycle()
    raise ValueError(f"unknown family {fam}")


def cmd_gen(args) -> int:
    t = _generate(args)
    if t is None:
        sys.stderr.write("infeasible: no regular completion exists for these sizes\n")
        return 1
    text = encode_trn(t) if args.format == "trn" else to_json(t) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_analyze(args) -> int:
    t = read_tournament(args.input)
    n = t.n
    pi, pair = pi2_with_pair(t)
    i = irregularity(t)
    sup = (n - 3) / 4 if n % 2 else (n - 4) / 4
    result = {
        "n": n,
        "i": i,
        "pi2": pi,
        "pi2_argmin_pair": list(pair),
        "supremum_bound": sup,
        "lemma19_slack": n - 4 * pi - 3 - i,
    }
    _emit(args, _report(args, result))
    return 0


def _theorems(values: Sequence[str]) -> list[str]:
    if not values or "all" in values:
        return [t.value for t in ALL_THEOREMS]
    return [TheoremId(v.upper()).value for v in values]


def cmd_verify(args) -> int:
    ids = _theorems(args.theorem)
    if args.input:
        t = read_tournament(args.input)
        results = [r.to_dict() for r in check_many(t, ids)]
        failed = any(not r["holds"] for r in results)
        result = {"n": t.n, "checks": results}
    elif args.n is None:
        raise ValueError("give --input or --n")
    elif args.exhaustive:
        summary = sweep_exhaustive(args.n, ids, pi2_min=args.pi2_min, jobs=args.jobs)
        failed, result = not summary.ok, summary.to_dict()
    else:
        summary = sweep_sampled(args.n, ids, args.samples, args.seed, pi2_min=args.pi2_min)
        failed, result = not summary.ok, summary.to_dict()
    result["passed"] = not failed
    _emit(args, _report(args, result))
    return 1 if failed else 0


def cmd_verify_extend(args) -> int:
    t = read_tournament(args.input)
    start = time.perf_counter()
    verdict = is_path_extendable(t, args.k)
    result = {
        "extendable": verdict.extendable,
        "k": args.k,
        "certificate": None if verdict.certificate is None else list(verdict.certificate.vertices),
        "subsets_checked": verdict.subsets_checked,
    }
    if args.certificates > 1 and not verdict.extendable:
        paths = nonextendable_paths(t, args.certificates, k_threshold=args.k)
        result["certificates"] = [list(p.vertices) for p in paths]
    if args.timing:
        result["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    _emit(args, _report(args, result))
    return 0


def cmd_mc(args) -> int:
    spec = TailExperiment(args.n, args.p, args.epsilon, args.trials, args.seed)
    done = pi2_tail_experiment(spec, jobs=args.jobs)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["trial", "pi2", "threshold", "below_threshold"])
            for trial, v, thr, below in done.rows():
                w.writerow([trial, v, repr(thr), int(below)])
    result = {
        "observed_failures": done.observed_failures,
        "observed_fraction": done.observed_fraction,
        "bound": done.bound,
        "threshold": done.threshold,
        "bound_informative": done.bound < 1,
    }
    _emit(args, _report(args, result))
    return 0


def _class_summary(t: Tournament) -> dict[str, Any]:
    v2 = is_path_extendable(t, 2)
    return {
        "pairs": t.pairs(),
        "pi2": pi2_with_pair(t)[0],
        "extendable_2plus": v2.extendable,
        "certificate": None if v2.certificate is None else list(v2.certificate.vertices),
    }


def cmd_enumerate_regular(args) -> int:
    classes = enumerate_regular(args.n)
    result = {"n": args.n, "count": len(classes), "classes": [_class_summary(t) for t in classes]}
    _emit(args, _report(args, result))
    return 0


def cmd_rediscover_t0(args) -> int:
    classes = [_class_summary(t) for t in enumerate_regular(7)]
    failing = [c for c in classes if not c["extendable_2plus"]]
    result = {"classes": len(classes), "failing": failing, "unique": len(failing) == 1}
    if len(failing) == 1:
        result["t0"] = failing[0]["pairs"]
    _emit(args, _report(args, result))
    return 0 if len(failing) == 1 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathext", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"pathext {__version__}")
    ap.add_argument("--log-level", default="WARNING")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--jobs", type=int, default=1, help="worker processes (results do not depend on it)")
        p.add_argument("--report", help="write the JSON report here instead of stdout")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("gen", help="generate a tournament")
    g.add_argument(
        "--family",
        required=True,
        choices=["paley", "t3", "t2", "figure4", "circulant", "random", "random-regular", "transitive", "cycle3"],
    )
    g.add_argument("--q", type=int, default=7)
    g.add_argument("--t", type=int, default=1)
    g.add_argument("--p", type=int, default=5)
    g.add_argument("--n0", type=int, default=4)
    g.add_argument("--n1", type=int, default=1)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--n", type=int, default=7)
    g.add_argument("--offsets", default="1,2,4")
    g.add_argument("--permute", action="store_true", help="figure4: relabel the inner tournament by --seed")
    g.add_argument("--format", choices=["trn", "json"], default="trn")
    g.add_argument("--out")
    common(g)
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="invariants of a tournament file")
    a.add_argument("--input", required=True)
    common(a, seed=False)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="check theorem statements")
    v.add_argument("--theorem", action="append", default=[], help="'all' or one of: " + ", ".join(t.value for t in ALL_THEOREMS) + " (repeatable)")
    v.add_argument("--n", type=int)
    v.add_argument("--input")
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int, default=100)
    v.add_argument("--pi2-min", type=int, default=None, help="only tournaments with pi2 at least this")
    common(v)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("verify-extend", help="decide path extendability exactly")
    e.add_argument("--input", required=True)
    e.add_argument("--k", type=int, default=1)
    e.add_argument("--certificates", type=int, default=1)
    e.add_argument("--timing", action=argparse.BooleanOptionalAction, default=True)
    common(e, seed=False)
    e.set_defaults(func=cmd_verify_extend)

    m = sub.add_parser("mc", help="pi2 lower-tail Monte Carlo experiment")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--p", type=_number, default=0.5)
    m.add_argument("--epsilon", type=_number, required=True)
    m.add_argument("--trials", type=int, default=1000)
    m.add_argument("--csv")
    common(m)
    m.set_defaults(func=cmd_mc)

    r = sub.add_parser("enumerate-regular", help="regular tournaments up to isomorphism")
    r.add_argument("--n", type=int, required=True)
    common(r, seed=False)
    r.set_defaults(func=cmd_enumerate_regular)

    t0 = sub.add_parser("rediscover-t0", help="search the 7-vertex regular exception")
    common(t0, seed=False)
    t0.set_defaults(func=cmd_rediscover_t0)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr)
    try:
        return args.func(args)
    except (CapacityError, ValueError, OSError) as exc:
        sys.stderr.write(f"pathext {args.command}: {exc}\n")
        parser.print_usage(sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
