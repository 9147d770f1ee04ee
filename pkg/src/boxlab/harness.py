"""Seeded experiments producing rectangular result tables.

Every random draw comes from a generator seeded by ``(seed, tag, ...)`` for the
trial at hand, so results do not depend on evaluation order.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import logging
import math
import zlib
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from .errors import ConfigError
from .euclid import (
    DiscreteMeasure,
    box_set_approx,
    cantor_set,
    dyadic_separation,
    lattice_neighborhood,
    trilinear_mass,
)
from .euclid.grid import MAX_RESOLUTION
from .ff import PointSet, box_set, orthogonal_group2
from .ff.core import as_prime
from .ff.distance import pinned_norms
from .ff.spectral import error_terms, nu_square_inequality, weil_salie_scan

log = logging.getLogger(__name__)

BOX_THRESHOLD_CONSTANT = math.sqrt(18)

REQUIRED_PARAMS = {
    "box-sweep": ("p", "sizes", "samples"),
    "sharpness": ("s", "q"),
    "trilinear": ("s", "n", "t", "eps"),
    "audit": ("p", "d", "trials"),
}


@dataclass
class ExperimentConfig:
    name: str
    params: dict[str, Any]
    seed: int
    out: str | None = None

    def __post_init__(self):
        if self.seed is None:
            raise ConfigError("a seed is mandatory")
        missing = [k for k in REQUIRED_PARAMS.get(self.name, ()) if self.params.get(k) is None]
        if missing:
            raise ConfigError(f"experiment {self.name!r} is missing parameters: {', '.join(missing)}")

    def hash(self) -> str:
        blob = json.dumps({"experiment": self.name, "params": self.params, "seed": self.seed}, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    footer: dict[str, str] = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, table has {len(self.columns)} columns")
        self.rows.append(list(values))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def body_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()

    def to_csv(self) -> str:
        tail = "".join(f"# {k}: {v}\r\n" for k, v in self.footer.items())
        return self.body_csv() + tail

    def to_json(self) -> str:
        rows = [[_json_cell(v) for v in r] for r in self.rows]
        return json.dumps({"columns": self.columns, "rows": rows, "footer": self.footer}, indent=1)

    def write(self, path: str):
        text = self.to_json() if str(path).endswith(".json") else self.to_csv()
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


def _json_cell(v):
    if isinstance(v, np.generic):
        return v.item()
    return v


def _stamp(table: ResultTable, cfg: ExperimentConfig) -> ResultTable:
    table.footer = {"config_hash": cfg.hash(), "seed": str(cfg.seed), "version": f"boxlab {__version__}"}
    return table


def _rng(seed: int, tag: str, *keys: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(tag.encode()), *(int(k) for k in keys)])


def parse_int_list(value) -> list[int]:
    """``"2,4,8"``, ``"3:7"`` (inclusive) or an iterable of ints."""
    if isinstance(value, str):
        out = []
        for part in value.split(","):
            part = part.strip()
            if not part:
                continue
            if ":" in part:
                a, b = part.split(":")
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
        return out
    if isinstance(value, (int, np.integer)):
        return [int(value)]
    return [int(v) for v in value]


def parse_float_list(value) -> list[float]:
    if isinstance(value, str):
        return [float(eval_power(v)) for v in value.split(",") if v.strip()]
    if isinstance(value, (int, float)):
        return [float(value)]
    return [float(v) for v in value]


def eval_power(token: str) -> float:
    """Parse a float or a power of two written ``2^-k``."""
    token = token.strip()
    if token.startswith("2^"):
        return 2.0 ** float(token[2:])
    return float(token)


def box_threshold(p: int) -> float:
    """``sqrt(18) * p**(3/4)``: above this size the d = 1 box set is all of F_p (p = 3 mod 4)."""
    return BOX_THRESHOLD_CONSTANT * p**0.75


def scaling_fit(pairs: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of ``log(mass)`` against ``log(eps)``."""
    if len(pairs) < 3:
        raise ValueError("need at least three (eps, mass) pairs")
    arr = np.asarray(pairs, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("scaling fit needs strictly positive values")
    slope, _ = np.polyfit(np.log(arr[:, 0]), np.log(arr[:, 1]), 1)
    return float(slope)


def _min_full_size(fractions: dict[int, float]) -> int | None:
    best = None
    for m in sorted(fractions, reverse=True):
        if fractions[m] < 1.0:
            break
        best = m
    return best


def _exhaustive_box_fractions(p: int) -> dict[int, list[int]]:
    """``size -> [subsets, full box sets, box sets covering F_p minus 0]`` over all subsets of F_p."""
    tally = {m: [0, 0, 0] for m in range(p + 1)}
    for mask in range(1 << p):
        members = [i for i in range(p) if mask >> i & 1]
        _tally(tally[len(members)], box_set(PointSet.from_points(p, 1, members)))
    return tally


def _tally(slot: list[int], box) -> None:
    """Count one trial: ``[trials, full box sets, box sets covering every nonzero t]``."""
    vals = box.values()
    slot[0] += 1
    slot[1] += int(box.is_full())
    slot[2] += int(len(vals) - int(0 in vals) == box.p - 1)


def ff_box_threshold_sweep(cfg: ExperimentConfig) -> ResultTable:
    """Fraction of d = 1 sets of each size whose box set is all of F_p.

    ``mode="sample"`` draws, per sample index, one random ordering of F_p and
    uses its first m elements for every size m, so the sets are nested across
    sizes and the full-box fraction is non-decreasing in m by construction.
    ``mode="exhaustive"`` enumerates all subsets.

    ``nonzero_fraction`` counts box sets containing every nonzero residue. For
    p = 3 mod 4 the value 0 is never a box value (a^2 + b^2 = 0 forces
    a = b = 0, i.e. y = z), so there the full fraction is identically 0 and
    this column carries the information.
    """
    prm = cfg.params
    primes = [as_prime(p) for p in parse_int_list(prm["p"])]
    mode = prm.get("mode", "sample")
    samples = int(prm["samples"])
    if mode not in ("sample", "exhaustive"):
        raise ConfigError(f"unknown mode {mode!r}")
    if samples < 1 and mode == "sample":
        raise ConfigError("samples must be >= 1")
    table = ResultTable(
        ["p", "p_mod4", "size", "trials", "full_count", "full_fraction", "nonzero_fraction", "threshold",
         "nonvacuous", "asserted", "violations", "min_full_size"]
    )
    for p in primes:
        thr = box_threshold(p)
        nonvacuous = thr <= p
        if mode == "exhaustive":
            if p > 13:
                raise ConfigError(f"exhaustive enumeration is capped at p <= 13, got {p}")
            tally = _exhaustive_box_fractions(p)
            sizes = list(range(p + 1)) if prm["sizes"] == "all" else sorted(m for m in parse_int_list(prm["sizes"]) if 0 <= m <= p)
            stats = {m: tally[m] for m in sizes}
        else:
            sizes = sorted(m for m in parse_int_list(prm["sizes"]) if 0 <= m <= p)
            stats = {m: [0, 0, 0] for m in sizes}
            for k in range(samples):
                order = _rng(cfg.seed, "box-sweep", p, k).permutation(p)
                for m in sizes:
                    _tally(stats[m], box_set(PointSet.from_points(p, 1, order[:m])))
        fractions = {m: (st[1] / st[0] if st[0] else 0.0) for m, st in stats.items()}
        m_star = _min_full_size(fractions)
        for m in sizes:
            trials, full, nonzero = stats[m]
            asserted = nonvacuous and p % 4 == 3 and m > thr
            violations = trials - full if asserted else 0
            table.add(p, p % 4, m, trials, full, fractions[m], nonzero / trials if trials else 0.0,
                      thr, nonvacuous, asserted, violations, m_star)
        log.info("box-sweep p=%d: min full size %s (threshold %.2f, %s)", p, m_star, thr,
                 "non-vacuous" if nonvacuous else "vacuous")
    return _stamp(table, cfg)


def sharpness_resolution(q: int, s: float, d: int, factor: float = 2.0) -> int:
    """Smallest n with ``2**-n <= radius / factor``, capped by the grid limits."""
    radius = float(q) ** (-d / s)
    n = max(1, math.ceil(math.log2(factor / radius)))
    return min(n, MAX_RESOLUTION.get(d, 8))


def sharpness_sweep(cfg: ExperimentConfig) -> ResultTable:
    """Measure of the box set of the lattice neighbourhoods E_q as q grows."""
    prm = cfg.params
    s = float(prm["s"])
    d = int(prm.get("d", 1))
    qs = parse_int_list(prm["q"])
    factor = float(prm.get("resolution_factor", 2.0))
    if len(qs) < 2:
        raise ConfigError("a slope needs at least two values of q")
    if sorted(set(qs)) != qs:
        raise ConfigError("q list must be strictly increasing")
    rows = []
    for q in qs:
        n = sharpness_resolution(q, s, d, factor)
        E = lattice_neighborhood(q, s, d, n)
        E1, E2, sep = dyadic_separation(E)
        measure = box_set_approx(E, E1, E2).measure()
        rows.append((q, n, float(q) ** (-d / s), len(E), sep, measure))
        log.info("sharpness q=%d n=%d cells=%d measure=%.6g", q, n, len(E), measure)
    slope, _ = np.polyfit(np.log([r[0] for r in rows]), np.log([r[-1] for r in rows]), 1)
    table = ResultTable(["q", "n", "radius", "cells", "separation", "measure", "slope", "predicted_slope"])
    for r in rows:
        table.add(*r, float(slope), 2.0 - d / s)
    return _stamp(table, cfg)


def trilinear_scaling(cfg: ExperimentConfig) -> ResultTable:
    """Trilinear mass of a Cantor set against window width, with its log-log slope."""
    prm = cfg.params
    s, n, t = float(prm["s"]), int(prm["n"]), float(prm["t"])
    d = int(prm.get("d", 1))
    eps = parse_float_list(prm["eps"])
    E = cantor_set(s, d, n)
    E1, E2, _ = dyadic_separation(E)
    masses = trilinear_mass(DiscreteMeasure(E), DiscreteMeasure(E1), DiscreteMeasure(E2), t, eps)
    slope = scaling_fit(list(zip(eps, masses))) if np.all(masses > 0) and len(eps) >= 3 else float("nan")
    table = ResultTable(["eps", "mass", "slope", "cells", "s", "t"])
    for e, m in zip(eps, masses):
        table.add(e, float(m), slope, len(E), s, t)
    log.info("trilinear s=%g n=%d t=%g slope=%.4f", s, n, t, slope)
    return _stamp(table, cfg)


def cauchy_schwarz_ratio(E: PointSet) -> float:
    """``max_x |E|^2 / (|Delta_x(E)| sum_t nu_x(t)^2)`` over pins x in E (<= 1 when the chain holds)."""
    worst = 0.0
    n = E.card
    for x in E.points():
        nu = np.bincount(pinned_norms(E, x), minlength=E.p)
        pinned = int(np.count_nonzero(nu))
        ssq = sum(int(c) * int(c) for c in nu)
        worst = max(worst, n * n / (pinned * ssq))
    return worst


def _random_size(rng: np.random.Generator, total: int, cap: int) -> int:
    return int(rng.integers(1, min(total, cap) + 1))


def inequality_audit(cfg: ExperimentConfig) -> ResultTable:
    """Exact inequality checks over random sets; one row per (inequality, p, d).

    ``asserted`` marks rows whose inequality is a theorem in that regime; other
    rows are recorded for reference and their violations are informational.
    """
    prm = cfg.params
    primes = [as_prime(p) for p in parse_int_list(prm["p"])]
    dims = parse_int_list(prm["d"])
    trials = int(prm["trials"])
    nu2_trials = min(trials, int(prm.get("nu2_trials", 200)))
    max_size = int(prm.get("max_size", 200))
    table = ResultTable(["inequality", "p", "d", "trials", "violations", "max_ratio", "asserted"])
    if trials <= 0:
        return _stamp(table, cfg)
    for p, d in itertools.product(primes, dims):
        total = p**d
        cs_bad, cs_worst = 0, 0.0
        db = {"in": [0, 0.0], "out": [0, 0.0]}
        for k in range(trials):
            rng = _rng(cfg.seed, "audit", p, d, k)
            E = PointSet.random(p, d, _random_size(rng, total, max_size), rng)
            r = cauchy_schwarz_ratio(E)
            cs_worst = max(cs_worst, r)
            cs_bad += r > 1.0
            for rep in error_terms(E):
                scope = "in" if _d_bound_asserted(p, d, rep.t) else "out"
                db[scope][0] += not rep.satisfied
                db[scope][1] = max(db[scope][1], rep.ratio)
        table.add("cauchy_schwarz", p, d, trials, cs_bad, cs_worst, True)
        if d >= 2:
            table.add("d_bound", p, d, trials, db["in"][0], db["in"][1], True)
        if d == 1 or p % 4 == 1 and d == 2:
            label = "d_bound" if d == 1 else "d_bound_t0"
            table.add(label, p, d, trials, db["out"][0], db["out"][1], False)
    for p in primes:
        scan = weil_salie_scan(p)
        nonzero = [r for t, r in scan if t != 0]
        table.add("weil_salie", p, 2, 1, sum(r > 1.0 for r in nonzero), max(nonzero), True)
        table.add("weil_salie_t0", p, 2, 1, int(scan[0][1] > 1.0), scan[0][1], p % 4 == 3)
        group = orthogonal_group2(p)
        bad, worst = 0, 0.0
        for k in range(nu2_trials):
            rng = _rng(cfg.seed, "nu2", p, k)
            A = PointSet.random(p, 2, _random_size(rng, p * p, p * p), rng)
            B = PointSet.random(p, 2, _random_size(rng, p * p, p * p), rng)
            rep = nu_square_inequality(A, B, group)
            bad += not rep.satisfied
            worst = max(worst, rep.lhs / rep.rhs if rep.rhs else 0.0)
        table.add("nu_square", p, 2, nu2_trials, bad, worst, p % 4 == 3)
        log.info("audit p=%d done", p)
    return _stamp(table, cfg)


def _d_bound_asserted(p: int, d: int, t: int) -> bool:
    """Regime where the D(E) bound is asserted: d >= 3, or d = 2 away from isotropic t = 0."""
    if d >= 3:
        return True
    if d == 2:
        return t != 0 or p % 4 == 3
    return False


def audit_violations(table: ResultTable) -> int:
    """Violations in asserted rows."""
    v, a = table.columns.index("violations"), table.columns.index("asserted")
    return sum(int(r[v]) for r in table.rows if r[a])


EXPERIMENTS = {
    "box-sweep": ff_box_threshold_sweep,
    "sharpness": sharpness_sweep,
    "trilinear": trilinear_scaling,
    "audit": inequality_audit,
}


def run_experiment(cfg: ExperimentConfig) -> ResultTable:
    try:
        fn = EXPERIMENTS[cfg.name]
    except KeyError:
        raise ConfigError(f"unknown experiment {cfg.name!r}") from None
    table = fn(cfg)
    if cfg.out:
        table.write(cfg.out)
    return table


__all__ = [
    "ExperimentConfig",
    "ResultTable",
    "audit_violations",
    "box_threshold",
    "ff_box_threshold_sweep",
    "inequality_audit",
    "run_experiment",
    "scaling_fit",
    "sharpness_sweep",
    "trilinear_scaling",
]
