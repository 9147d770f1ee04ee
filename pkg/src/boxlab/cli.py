"""``boxlab`` command line: harness experiments and one-shot computations.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or config error.
Results go to ``--out`` when given, otherwise compact JSON on stdout; log
lines go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .errors import BoxlabError
from .euclid import (
    GridSet,
    IntervalUnion,
    box_counting_dimension,
    box_set_approx,
    cantor_ratio,
    cantor_set,
    chain_length_set,
    chain_set,
    contained_interval,
    dyadic_separation,
    lattice_neighborhood,
    perimeter_set,
    project_boxes,
    sum_projection_matrix,
)
from .ff import (
    PointSet,
    box_set,
    distance_set,
    error_term,
    nu_square_inequality,
    orthogonal_group2,
    pinned_box_set,
    pinned_distance_set,
)
from .ff.core import as_prime
from .harness import (
    ExperimentConfig,
    ResultTable,
    _d_bound_asserted,
    _rng,
    audit_violations,
    parse_int_list,
    run_experiment,
    sharpness_resolution,
)
from .ff.spectral import error_terms, weil_salie_bound, weil_salie_scan

log = logging.getLogger("boxlab")

WEIL_SLACK = 1e-12


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parser


def _common(sp: argparse.ArgumentParser, seed: bool = True):
    sp.add_argument("--config", metavar="PATH", help="flat key=value file; flags given on the command line win")
    sp.add_argument("--out", metavar="PATH", help="output file (CSV, or JSON when it ends in .json)")
    sp.add_argument("--threads", type=int, default=None, metavar="N",
                    help="worker cap (accepted for compatibility; computations run sequentially)")
    sp.add_argument("--quiet", action="store_true", help="suppress log lines on stderr")
    if seed:
        sp.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")


def _ff_input(sp: argparse.ArgumentParser):
    sp.add_argument("--in", dest="infile", metavar="PATH", help="PointSet file ('p d card' header, one point per line)")
    sp.add_argument("--p", type=int, help="prime modulus for a random set")
    sp.add_argument("--d", type=int, default=1, help="dimension for a random set (default 1)")
    sp.add_argument("--size", type=int, help="cardinality of a random set")


def _euclid_input(sp: argparse.ArgumentParser, d: int = 1):
    sp.add_argument("--in", dest="infile", metavar="PATH", help="GridSet file ('d n' header, one cell per line)")
    sp.add_argument("--s", type=float, default=0.84, help="Cantor dimension when no --in is given (default 0.84)")
    sp.add_argument("--d", type=int, default=d, help=f"dimension (default {d})")
    sp.add_argument("--n", type=int, default=8, help="resolution exponent, cell side 2^-n (default 8)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boxlab", description="Box-set distance laboratory.")
    parser.add_argument("--version", action="version", version=f"boxlab {__version__}")
    top = parser.add_subparsers(dest="family", metavar="{ff,euclid}")
    top.required = True

    ff = top.add_parser("ff", help="finite-field computations").add_subparsers(dest="command")
    ff.required = True
    euclid = top.add_parser("euclid", help="discretized Euclidean computations").add_subparsers(dest="command")
    euclid.required = True

    sp = ff.add_parser("box-sweep", help="fraction of d=1 sets with full box set, by size")
    sp.add_argument("--p", help="primes, e.g. 331 or 5,7,11")
    sp.add_argument("--sizes", default=None, help="sizes, e.g. 328:332 or 3,5,8 ('all' in exhaustive mode)")
    sp.add_argument("--samples", type=int, default=100, help="random sets per size (default 100)")
    sp.add_argument("--mode", choices=("sample", "exhaustive"), default="sample")
    _common(sp)
    sp.set_defaults(handler=cmd_box_sweep, leaf=sp)

    sp = ff.add_parser("dist", help="distance set, or pinned distance set with --pin")
    _ff_input(sp)
    sp.add_argument("--pin", help="pin coordinates, comma separated")
    _common(sp)
    sp.set_defaults(handler=cmd_dist, leaf=sp)

    sp = ff.add_parser("box", help="box set, or pinned box set with --pin")
    _ff_input(sp)
    sp.add_argument("--pin", help="pin coordinates, comma separated")
    _common(sp)
    sp.set_defaults(handler=cmd_box, leaf=sp)

    sp = ff.add_parser("weil", help="check max |S_t^(m)| <= 2 p^(-3/2) over m != 0 (d=2)")
    sp.add_argument("--p", help="primes, e.g. 31 or 3:31")
    sp.add_argument("--t", help="sphere radii to check (default: every t)")
    _common(sp, seed=False)
    sp.set_defaults(handler=cmd_weil, leaf=sp)

    sp = ff.add_parser("hinge", help="hinge counts and the D(E) error term")
    _ff_input(sp)
    sp.add_argument("--t", help="radii (default: every t)")
    _common(sp)
    sp.set_defaults(handler=cmd_hinge, leaf=sp)

    sp = ff.add_parser("nu2", help="nu^2 inequality on random pairs A, B in F_p^2")
    sp.add_argument("--p", help="primes, e.g. 3,7,11")
    sp.add_argument("--trials", type=int, default=200)
    _common(sp)
    sp.set_defaults(handler=cmd_nu2, leaf=sp)

    sp = ff.add_parser("audit", help="exact inequality audit over random sets")
    sp.add_argument("--p", help="primes, e.g. 7,11,13")
    sp.add_argument("--d", default="1,2,3", help="dimensions (default 1,2,3)")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--nu2-trials", type=int, default=200)
    sp.add_argument("--max-size", type=int, default=200, help="cap on random set sizes (default 200)")
    _common(sp)
    sp.set_defaults(handler=cmd_audit, leaf=sp)

    sp = euclid.add_parser("cantor", help="rasterized two-branch Cantor set")
    sp.add_argument("--s", type=float, help="target dimension in (0, 1]")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--n", type=int, default=12)
    _common(sp, seed=False)
    sp.set_defaults(handler=cmd_cantor, leaf=sp)

    sp = euclid.add_parser("lattice", help="q^(-d/s)-neighbourhood of the scaled lattice")
    sp.add_argument("--q", type=int)
    sp.add_argument("--s", type=float)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--n", type=int, default=None, help="resolution exponent (default: two cells per radius)")
    _common(sp, seed=False)
    sp.set_defaults(handler=cmd_lattice, leaf=sp)

    sp = euclid.add_parser("boxset", help="box set of E over a dyadic split E1, E2")
    _euclid_input(sp)
    sp.add_argument("--norm", type=float, default=2.0, help="l^p exponent, >= 1 (default 2)")
    sp.add_argument("--pin", help="pin point, comma separated")
    _common(sp, seed=False)
    sp.set_defaults(handler=cmd_boxset, leaf=sp)

    sp = euclid.add_parser("chains", help="k-chain length set pinned at a point")
    _euclid_input(sp)
    sp.add_argument("--x", default=None, help="pin point, comma separated (default: origin)")
    sp.add_argument("--k", type=int, default=2)
    _common(sp, seed=False)
    sp.set_defaults(handler=cmd_chains, leaf=sp)

    sp = euclid.add_parser("perimeter", help="perimeter set of triples of cells")
    _euclid_input(sp, d=2)
    _common(sp, seed=False)
    sp.set_defaults(handler=cmd_perimeter, leaf=sp, n=5)

    sp = euclid.add_parser("trilinear", help="trilinear mass of a Cantor set against eps")
    sp.add_argument("--s", type=float)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--n", type=int, default=12)
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--eps", default="2^-4,2^-5,2^-6,2^-7,2^-8,2^-9")
    sp.add_argument("--min-slope", type=float, default=None, help="exit 1 when the fitted slope is below this")
    _common(sp)
    sp.set_defaults(handler=cmd_trilinear, leaf=sp)

    sp = euclid.add_parser("sharpness", help="box-set measure of lattice neighbourhoods as q grows")
    sp.add_argument("--s", type=float)
    sp.add_argument("--q", help="increasing q values, e.g. 2,4,8,16,32")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--resolution-factor", type=float, default=2.0)
    _common(sp)
    sp.set_defaults(handler=cmd_sharpness, leaf=sp)

    return parser


def read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        leaf = args.leaf
        known = {a.dest for a in leaf._actions} - {"help", "config"}  # noqa: SLF001
        cfg = read_config(args.config)
        unknown = sorted(set(cfg) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        leaf.set_defaults(**{k: _coerce(leaf, k, v) for k, v in cfg.items()})
        args = parser.parse_args(argv)
    return args


def _coerce(leaf: argparse.ArgumentParser, dest: str, value: str):
    for action in leaf._actions:  # noqa: SLF001
        if action.dest == dest:
            if isinstance(action, argparse._StoreTrueAction):  # noqa: SLF001
                return value.lower() in ("1", "true", "yes", "on")
            if action.type is not None:
                try:
                    return action.type(value)
                except ValueError:
                    raise UsageError(f"config key {dest}: invalid value {value!r}") from None
            if action.choices and value not in action.choices:
                raise UsageError(f"config key {dest}: {value!r} not in {sorted(action.choices)}")
    return value


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


# ---------------------------------------------------------------- output


def _emit(args, payload: dict, table: ResultTable | None = None, text: str | None = None):
    """Write ``table`` or ``text`` to --out, or print the JSON payload."""
    if args.out:
        if table is not None:
            table.write(args.out)
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text if text is not None and not args.out.endswith(".json") else json.dumps(payload))
        log.info("wrote %s", args.out)
    else:
        if table is not None:
            payload = {**payload, "columns": table.columns, "rows": json.loads(table.to_json())["rows"]}
        print(json.dumps(payload, separators=(",", ":"), default=_json_default))


def _json_default(v):
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(type(v).__name__)


def _intervals(U: IntervalUnion) -> list[list[float]]:
    return [[lo, hi] for lo, hi in U]


def _coords(text: str | None) -> list[float] | None:
    return None if text is None else [float(c) for c in text.split(",")]


def _point_set(args) -> PointSet:
    if args.infile:
        return PointSet.load(args.infile)
    _need(args, "p", "size")
    p = as_prime(args.p)
    if not 0 <= args.size <= p**args.d:
        raise UsageError(f"--size must lie in [0, {p ** args.d}]")
    return PointSet.random(p, args.d, args.size, _rng(args.seed, "cli-set", p, args.d, args.size))


def _grid_set(args) -> GridSet:
    if args.infile:
        return GridSet.load(args.infile)
    return cantor_set(args.s, args.d, args.n)


def _ff_pin(args, E: PointSet):
    if args.pin is None:
        return None
    pin = [int(c) for c in args.pin.split(",")]
    if len(pin) != E.d:
        raise UsageError(f"--pin needs {E.d} coordinates")
    return pin


# ---------------------------------------------------------------- ff commands


def _experiment(args, name: str, params: dict) -> ResultTable:
    cfg = ExperimentConfig(name, params, seed=getattr(args, "seed", 0), out=args.out)
    return run_experiment(cfg)


def cmd_box_sweep(args) -> int:
    _need(args, "p", "sizes")
    table = _experiment(args, "box-sweep", {"p": args.p, "sizes": args.sizes, "samples": args.samples, "mode": args.mode})
    fractions: dict[int, list[float]] = {}
    for p, frac in zip(table.column("p"), table.column("full_fraction")):
        fractions.setdefault(p, []).append(frac)
    monotone = all(all(a <= b for a, b in zip(f, f[1:])) for f in fractions.values())
    violations = sum(table.column("violations"))
    if not monotone:
        log.error("full-box fraction is not monotone in size")
    if violations:
        log.error("%d sampled sets above the threshold have a box set smaller than F_p", violations)
    _emit(args, {"experiment": "box-sweep", "violations": violations, "monotone": monotone}, table)
    return 0 if monotone and not violations else 1


def cmd_dist(args) -> int:
    E = _point_set(args)
    pin = _ff_pin(args, E)
    S = distance_set(E) if pin is None else pinned_distance_set(E, pin)
    _emit(args, {"p": E.p, "d": E.d, "card": E.card, "pin": pin, "values": S.values()},
          text="\n".join(map(str, S.values())) + "\n")
    return 0


def cmd_box(args) -> int:
    E = _point_set(args)
    pin = _ff_pin(args, E)
    S = box_set(E) if pin is None else pinned_box_set(E, pin)
    missing = sorted(set(range(E.p)) - set(S.values()))
    _emit(args, {"p": E.p, "d": E.d, "card": E.card, "pin": pin, "size": len(S), "full": S.is_full(),
                 "missing": missing, "values": S.values()},
          text="\n".join(map(str, S.values())) + "\n")
    return 0


def cmd_weil(args) -> int:
    _need(args, "p")
    table = ResultTable(["p", "t", "max_coefficient", "bound", "ratio", "holds"])
    ok = True
    for p in (as_prime(v) for v in parse_int_list(args.p)):
        ts = None if args.t is None else [t for t in parse_int_list(args.t) if 0 <= t < p]
        bound = weil_salie_bound(p)
        for t, ratio in weil_salie_scan(p, ts):
            holds = ratio * bound <= bound + WEIL_SLACK
            ok &= holds
            table.add(p, t, ratio * bound, bound, ratio, holds)
        log.info("weil p=%d checked", p)
    failed = [(r[0], r[1]) for r in table.rows if not r[-1]]
    if failed:
        log.error("bound exceeded at (p, t) = %s", failed)
    _emit(args, {"holds": ok, "failed": failed}, table)
    return 0 if ok else 1


def cmd_hinge(args) -> int:
    E = _point_set(args)
    if args.t is None:
        reports = error_terms(E)
    else:
        reports = [error_term(E, t) for t in parse_int_list(args.t)]
    table = ResultTable(["t", "hinge", "main_term", "D", "bound", "satisfied", "asserted"])
    bad = 0
    for r in reports:
        asserted = _d_bound_asserted(E.p, E.d, r.t)
        bad += asserted and not r.satisfied
        table.add(r.t, r.hinge, str(r.main_term), r.D, r.bound, r.satisfied, asserted)
    _emit(args, {"p": E.p, "d": E.d, "card": E.card, "violations": bad}, table)
    return 0 if not bad else 1


def cmd_nu2(args) -> int:
    _need(args, "p")
    table = ResultTable(["p", "trials", "violations", "max_ratio", "asserted"])
    bad_asserted = 0
    for p in (as_prime(v) for v in parse_int_list(args.p)):
        group = orthogonal_group2(p)
        bad, worst = 0, 0.0
        for k in range(args.trials):
            rng = _rng(args.seed, "nu2", p, k)
            A = PointSet.random(p, 2, int(rng.integers(1, p * p + 1)), rng)
            B = PointSet.random(p, 2, int(rng.integers(1, p * p + 1)), rng)
            rep = nu_square_inequality(A, B, group)
            bad += not rep.satisfied
            worst = max(worst, rep.lhs / rep.rhs if rep.rhs else 0.0)
        asserted = p % 4 == 3
        bad_asserted += bad if asserted else 0
        table.add(p, args.trials, bad, worst, asserted)
        log.info("nu2 p=%d violations=%d", p, bad)
    _emit(args, {"violations": bad_asserted}, table)
    return 0 if not bad_asserted else 1


def cmd_audit(args) -> int:
    _need(args, "p")
    table = _experiment(args, "audit", {"p": args.p, "d": args.d, "trials": args.trials,
                                        "nu2_trials": args.nu2_trials, "max_size": args.max_size})
    bad = audit_violations(table)
    _emit(args, {"experiment": "audit", "violations": bad}, table)
    return 0 if not bad else 1


# ---------------------------------------------------------------- euclid commands


def cmd_cantor(args) -> int:
    _need(args, "s")
    E = cantor_set(args.s, args.d, args.n)
    levels = range(2, max(3, args.n - 1))
    dim = box_counting_dimension(E, levels)
    _emit(args, {"s": args.s, "ratio": cantor_ratio(args.s), "d": E.d, "n": E.n, "cells": len(E),
                 "box_counting_dimension": dim}, text=E.to_text())
    return 0


def cmd_lattice(args) -> int:
    _need(args, "q", "s")
    n = args.n if args.n is not None else sharpness_resolution(args.q, args.s, args.d)
    E = lattice_neighborhood(args.q, args.s, args.d, n)
    _emit(args, {"q": args.q, "s": args.s, "d": args.d, "n": n, "radius": float(args.q) ** (-args.d / args.s),
                 "cells": len(E)}, text=E.to_text())
    return 0


def cmd_boxset(args) -> int:
    E = _grid_set(args)
    E1, E2, sep = dyadic_separation(E)
    U = box_set_approx(E, E1, E2, p=args.norm, pin=_coords(args.pin))
    longest = contained_interval(U)
    _emit(args, {"cells": len(E), "split": [len(E1), len(E2)], "separation": sep, "measure": U.measure(),
                 "components": len(U), "longest": longest, "intervals": _intervals(U)}, text=U.to_csv())
    return 0


def cmd_chains(args) -> int:
    E = _grid_set(args)
    x = _coords(args.x) or [0.0] * E.d
    L = chain_length_set(E, x, args.k)
    projected = project_boxes(chain_set(E, x, args.k), sum_projection_matrix(args.k))
    exact = L.isclose(projected, atol=1e-12)
    if not exact:
        log.error("chain length set differs from the projected chain set")
    _emit(args, {"cells": len(E), "k": args.k, "measure": L.measure(), "components": len(L),
                 "projection_exact": exact, "intervals": _intervals(L)}, text=L.to_csv())
    return 0 if exact else 1


def cmd_perimeter(args) -> int:
    E = _grid_set(args)
    U = perimeter_set(E)
    _emit(args, {"cells": len(E), "measure": U.measure(), "components": len(U), "intervals": _intervals(U)},
          text=U.to_csv())
    return 0


def cmd_trilinear(args) -> int:
    _need(args, "s")
    table = _experiment(args, "trilinear", {"s": args.s, "n": args.n, "t": args.t, "eps": args.eps, "d": args.d})
    slope = table.rows[0][table.columns.index("slope")] if table.rows else float("nan")
    ok = args.min_slope is None or slope >= args.min_slope
    _emit(args, {"experiment": "trilinear", "slope": slope}, table)
    return 0 if ok else 1


def cmd_sharpness(args) -> int:
    _need(args, "s", "q")
    table = _experiment(args, "sharpness", {"s": args.s, "q": args.q, "d": args.d,
                                            "resolution_factor": args.resolution_factor})
    _emit(args, {"experiment": "sharpness", "slope": table.rows[0][table.columns.index("slope")]}, table)
    return 0


# ---------------------------------------------------------------- entry point


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    except (UsageError, OSError) as exc:
        print(f"boxlab: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, stream=sys.stderr,
                        format="%(name)s: %(message)s", force=True)
    if args.threads is not None and args.threads < 1:
        print("boxlab: error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.handler(args)
    except (UsageError, BoxlabError, ValueError, OSError) as exc:
        print(f"boxlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
