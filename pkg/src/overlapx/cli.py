"""``overlapx`` command line.

Exit codes: 0 success, 1 property violation, 2 usage error, 3 capacity or
node budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .coloring import write_coloring
from .constructions import (
    AllocationVector,
    asymptotic_value,
    octopus_build,
    octopus_family_sizes,
    octopus_size,
    optimize_partition,
)
from .errors import CapacityError, FormatError, GroundSizeMismatch
from .family import read_family, write_family
from .inequalities import SUITES, fuzz
from .overlap import OverlapSpec, maximal_completion, parse_spec, verify_overlap
from .search import (
    DEFAULT_NODE_BUDGET,
    daykin_chain_bound,
    exact_search,
    family_bruteforce,
    local_search,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _num(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def _spec(ell: int, m: str) -> OverlapSpec:
    try:
        vals = [int(v) for v in m.split(",")]
        if len(vals) == 1:
            return OverlapSpec.uniform(ell, vals[0])
        return OverlapSpec(ell, tuple(vals))
    except ValueError as exc:
        raise UsageError(f"bad --m {m!r}: {exc}") from None


def _uniform_m(spec: OverlapSpec) -> int:
    if spec.uniform_value is None:
        raise UsageError("this verb needs a uniform --m")
    return spec.uniform_value


def _config(args) -> dict:
    skip = {"func", "json"}
    return {k: (v if isinstance(v, bool) else _num(v) if v is not None else None)
            for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        out = dict(_config(args))
        out.update(payload)
        print(json.dumps(out, sort_keys=True, default=str))
    else:
        print("\n".join(lines))


def cmd_construct(args) -> int:
    spec = _spec(args.l, args.m)
    opt_alloc, opt_value = optimize_partition(args.n, spec)
    if args.partition:
        try:
            alloc = AllocationVector(spec, tuple(int(v) for v in args.partition.split(",")))
        except ValueError as exc:
            raise UsageError(f"bad --partition: {exc}") from None
        if alloc.n != args.n:
            raise UsageError(f"partition sums to {alloc.n}, not n={args.n}")
    else:
        alloc = opt_alloc
    product = octopus_size(alloc)
    sizes = octopus_family_sizes(alloc)
    if args.out:
        families = octopus_build(alloc)
        if args.complete:
            families = maximal_completion(families, spec)
        sizes = [len(f) for f in families]
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for k, f in enumerate(families, 1):
            write_family(f, out / f"family_{k}.txt")
        product = 1
        for s in sizes:
            product *= s
    asym = asymptotic_value(args.n, spec)
    payload = {
        "partition": ",".join(map(str, alloc.counts)),
        "family_sizes": ",".join(map(str, sizes)),
        "product": str(product),
        "octopus_size": str(octopus_size(alloc)),
        "optimal_partition": ",".join(map(str, opt_alloc.counts)),
        "optimal_value": str(opt_value),
        "asymptotic_value": _num(asym),
    }
    _emit(args, payload, [
        f"spec: {spec}",
        str(alloc),
        f"family sizes: {payload['family_sizes']}",
        f"product: {product}",
        f"optimize_partition: {AllocationVector(spec, opt_alloc.counts)} value {opt_value}",
        f"asymptotic_value: {payload['asymptotic_value']}",
    ])
    return EXIT_OK


def cmd_search(args) -> int:
    spec = _spec(args.l, args.m)
    if args.method == "exact":
        report = exact_search(args.n, args.l, _uniform_m(spec), node_budget=args.node_budget,
                              workers=args.threads)
    elif args.method == "brute":
        report = family_bruteforce(args.n, args.l, spec)
    else:
        report = local_search(args.n, args.l, _uniform_m(spec), seed=args.seed,
                              iterations=args.iterations)
    if args.out:
        path = Path(args.out)
        if args.method == "brute":
            path.mkdir(parents=True, exist_ok=True)
            for k, f in enumerate(report.witness, 1):
                write_family(f, path / f"family_{k}.txt")
        else:
            write_coloring(report.witness, path)
    payload = report.to_dict(timing=not args.no_timing)
    _emit(args, payload, [
        f"{args.method} search n={args.n} {spec}",
        f"optimum: {report.optimum}",
        f"exact: {report.exact}",
        f"nodes_visited: {report.nodes_visited}",
        f"bound_used: {report.bound_used}",
    ])
    if args.method == "exact" and not report.exact:
        return EXIT_CAPACITY
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        families = [read_family(p) for p in args.families]
        spec = parse_spec(args.spec)
    except (OSError, FormatError) as exc:
        raise UsageError(str(exc)) from None
    try:
        result = verify_overlap(families, spec)
    except (ValueError, GroundSizeMismatch) as exc:
        raise UsageError(str(exc)) from None
    if result is True:
        _emit(args, {"holds": True}, ["holds"])
        return EXIT_OK
    payload = {"holds": False, "k": str(result.k), "k2": str(result.k2),
               "first": str(result.first), "second": str(result.second),
               "overlap": str(result.overlap), "bound": str(result.bound)}
    _emit(args, payload, [f"violation: {result}"])
    return EXIT_VIOLATION


def cmd_bounds(args) -> int:
    spec = _spec(args.l, args.m)
    _, value = optimize_partition(args.n, spec)
    octo = value << args.n
    asym = asymptotic_value(args.n, spec)
    chain = daykin_chain_bound(args.n, spec)
    payload = {"octopus": str(octo), "asymptotic_value": _num(asym), "daykin_chain_bound": str(chain)}
    _emit(args, payload, [
        f"{'octopus optimum':<20}{octo}",
        f"{'asymptotic_value':<20}{_num(asym)}",
        f"{'daykin_chain_bound':<20}{chain}",
    ])
    return EXIT_OK


def cmd_ineq(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    results = [fuzz(s, args.trials, args.n, args.l, seed=args.seed, workers=args.threads) for s in suites]
    failures = sum(r["failures"] for r in results)
    payload = {"trials": str(sum(r["trials"] for r in results)), "failures": str(failures)}
    first = next((r for r in results if "first_witness" in r), None)
    if first is not None:
        payload["first_witness"] = json.dumps({"suite": first["suite"], **first["first_witness"]})
    for r in results:
        payload[f"{r['suite']}_failures"] = str(r["failures"])
    # fuzz output is always JSON
    args.json = True
    _emit(args, payload, [])
    return EXIT_VIOLATION if failures else EXIT_OK


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run options")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    g.add_argument("--json", action="store_true", help="print a flat JSON report")
    g.add_argument("--out", help="output file or directory")
    g.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    g.add_argument("--no-timing", action="store_true", help="report wall_time as 0")


def _problem(p: argparse.ArgumentParser, need_l: bool = True) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=need_l, default=3)
    p.add_argument("--m", default="1", help="uniform bound or comma list in pair order")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="overlapx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("construct", help="build the octopus families")
    _problem(p)
    p.add_argument("--partition", help="block sizes n_S in pair order")
    p.add_argument("--complete", action="store_true", help="write maximal completions")
    _common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="compute s*(n, l, m)")
    p.add_argument("method", choices=["exact", "brute", "local"])
    _problem(p)
    p.add_argument("--iterations", type=int, default=2000)
    _common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="check the m-overlapping property of family files")
    p.add_argument("--families", nargs="+", required=True)
    p.add_argument("--spec", required=True, help="e.g. 'l=2; m=1'")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="octopus value, asymptotic value and Daykin chain bound")
    _problem(p)
    _common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("ineq", help="correlation inequality fuzzing")
    p.add_argument("action", choices=["fuzz"])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--n", type=int, default=8, help="largest ground size drawn")
    p.add_argument("--l", type=int, default=3, help="families per Rinott-Saks trial")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    _common(p)
    p.set_defaults(func=cmd_ineq)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"overlapx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"overlapx: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"overlapx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
