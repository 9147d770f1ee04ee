"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (see conftest) before asserting, so the
summary at the end of the run lists every criterion even when some fail.
"""

import math
import time
from fractions import Fraction

import numpy as np

from boxlab.euclid import (
    GridSet,
    box_set_approx,
    chain_length_set,
    chain_set,
    dyadic_separation,
    minkowski_sum,
    pinned_dist_squared_set,
    project_boxes,
    sum_projection_matrix,
)
from boxlab.ff import PointSet, box_set, counting_function, hinge_count, orthogonal_group2, pinned_distance_set
from boxlab.ff.core import is_prime
from boxlab.ff.spectral import error_terms, nu_square_inequality, sphere_fourier
from boxlab.harness import ExperimentConfig, run_experiment
from boxlab.errors import DegenerateInputError, SeparationError

from oracles import brute_hinge_counts


def rng_for(*keys):
    return np.random.default_rng(list(keys))


def test_weil_salie_every_radius(criterion):
    start = time.perf_counter()
    failures, worst = [], 0.0
    for p in [q for q in range(3, 32) if is_prime(q)]:
        bound = 2 * p**-1.5
        for t in range(p):
            mags = np.abs(sphere_fourier(p, 2, t).values).ravel()[1:]
            worst = max(worst, mags.max() / bound)
            if mags.max() > bound + 1e-12:
                failures.append((p, t, round(float(mags.max() / bound), 3)))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    criterion(1, ok, f"max ratio {worst:.3f}, {len(failures)} (p, t) over bound {failures}, {elapsed:.1f}s")
    assert ok


def test_error_term_bound_in_three_dimensions(criterion):
    start = time.perf_counter()
    bad = checked = 0
    worst = 0.0
    for p in (3, 5, 7):
        for size in (math.ceil(p**1.5), p * p):
            for k in range(100):
                E = PointSet.random(p, 3, size, rng_for(2, p, size, k))
                for rep in error_terms(E):
                    checked += 1
                    bound = 4 / math.log(2) * p**2 * size**2 / p**2
                    assert abs(rep.bound - bound) <= 1e-9 * bound
                    assert rep.main_term == Fraction(size**3, p**2)
                    worst = max(worst, abs(rep.D) / bound)
                    bad += abs(rep.D) > bound
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 120
    criterion(2, ok, f"{checked} (E, t) reports, {bad} violations, max |D|/bound {worst:.3f}, {elapsed:.1f}s")
    assert ok


def test_hinge_self_oracle(criterion):
    rng = rng_for(3)
    primes = [3, 5, 7, 11, 13]
    mismatches = 0
    for k in range(500):
        p = int(rng.choice(primes))
        d = int(rng.integers(1, 4))
        size = int(rng.integers(0, min(64, p**d) + 1))
        E = PointSet.random(p, d, size, rng)
        t = int(rng.integers(0, p))
        h = hinge_count(E, t)
        via_nu = sum(counting_function(E, x)[t] ** 2 for x in E)
        brute = int(brute_hinge_counts(E.points(), p)[t]) if size else 0
        mismatches += not (h == via_nu == brute)
    ok = mismatches == 0
    criterion(3, ok, f"500 random (E, t), {mismatches} mismatches between the three counts")
    assert ok


def test_cauchy_schwarz_chain(criterion):
    bad = sets = 0
    for p in (7, 11, 13):
        for d in (1, 2, 3):
            for k in range(1000):
                rng = rng_for(4, p, d, k)
                E = PointSet.random(p, d, int(rng.integers(1, min(p**d, 120) + 1)), rng)
                n = E.card
                for x in E.points():
                    pinned = len(pinned_distance_set(E, x))
                    bad += n * n > pinned * counting_function(E, x).sum_of_squares()
                sets += 1
    ok = bad == 0
    criterion(4, ok, f"{sets} sets (1000 per (p, d)), {bad} violating pins")
    assert ok


def test_nu_square_inequality(criterion):
    start = time.perf_counter()
    bad = 0
    for p in (3, 7, 11):
        group = orthogonal_group2(p)
        for k in range(200):
            rng = rng_for(5, p, k)
            A = PointSet.random(p, 2, int(rng.integers(0, p * p + 1)), rng)
            B = PointSet.random(p, 2, int(rng.integers(0, p * p + 1)), rng)
            bad += not nu_square_inequality(A, B, group).satisfied
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 180
    criterion(5, ok, f"600 pairs, {bad} violations, {elapsed:.1f}s")
    assert ok


def test_box_theorem_at_first_nonvacuous_prime(criterion):
    start = time.perf_counter()
    p, size = 331, 330
    full = 0
    missing = set()
    for k in range(100):
        E = PointSet.random(p, 1, size, rng_for(6, k))
        B = box_set(E)
        full += B.is_full()
        missing |= set(range(p)) - set(B.values())
    elapsed = time.perf_counter() - start
    ok = full == 100 and elapsed < 120
    criterion(6, ok, f"{full}/100 samples with Box(E) = F_331; values never hit: {sorted(missing)}; {elapsed:.1f}s")
    assert ok


def test_exhaustive_small_fields(criterion):
    cfg = ExperimentConfig("box-sweep", {"p": "5,7,11", "sizes": "all", "samples": 1, "mode": "exhaustive"}, seed=0)
    table = run_experiment(cfg)
    col = table.columns.index
    monotone = True
    m_star = {}
    for p in (5, 7, 11):
        rows = [r for r in table.rows if r[0] == p]
        assert [r[col("trials")] for r in rows] == [math.comb(p, m) for m in range(p + 1)]
        fr = [r[col("full_fraction")] for r in rows]
        monotone &= all(a <= b for a, b in zip(fr, fr[1:]))
        m_star[p] = rows[0][col("min_full_size")]
        # cross-check m* directly: every set of size >= m* is full, some set of size m* - 1 is not
        if m_star[p] is not None:
            assert all(r[col("full_fraction")] == 1.0 for r in rows[m_star[p]:])
            assert rows[m_star[p] - 1][col("full_fraction")] < 1.0
    ok = monotone
    criterion(7, ok, f"m* = {m_star} (None: no size gives the whole field), fraction monotone: {monotone}")
    assert ok


def test_sharpness_decay(criterion):
    table = run_experiment(ExperimentConfig("sharpness", {"s": 0.4, "q": "2,4,8,16,32", "d": 1}, seed=0))
    slope = table.rows[0][table.columns.index("slope")]
    q = table.column("q")
    meas = table.column("measure")
    tail = [m for qq, m in zip(q, meas) if qq >= 4]
    nonincreasing = all(a >= b for a, b in zip(tail, tail[1:]))
    ok = abs(slope - (-0.5)) <= 0.3 and nonincreasing
    criterion(8, ok, f"slope {slope:.3f} (target -0.5 +- 0.3), measures {[round(m, 4) for m in meas]}")
    assert ok


def test_trilinear_scaling(criterion):
    start = time.perf_counter()
    eps = ",".join(f"2^-{k}" for k in range(4, 10))
    table = run_experiment(ExperimentConfig("trilinear", {"s": 0.84, "n": 12, "t": 1.0, "eps": eps, "d": 1}, seed=0))
    slope = table.rows[0][table.columns.index("slope")]
    elapsed = time.perf_counter() - start
    ok = slope >= 0.8 and elapsed < 300
    criterion(9, ok, f"slope {slope:.3f} (need >= 0.8), {elapsed:.1f}s")
    assert ok


def _random_grid(rng, d, max_cells):
    n = int(rng.integers(3, 9))
    side = 2**n
    count = int(rng.integers(2, min(max_cells, side**d) + 1))
    idx = rng.choice(side**d, size=count, replace=False)
    return GridSet(d, n, np.stack(np.unravel_index(idx, (side,) * d), axis=1))


def test_sum_set_and_projection_invariants(criterion):
    inclusion_bad = inclusion_checked = 0
    projection_bad = projection_checked = 0
    for d in (1, 2):
        k = checked_here = 0
        while checked_here < 100:
            rng = rng_for(10, d, k)
            k += 1
            E = _random_grid(rng, d, 60)
            try:
                E1, E2, _ = dyadic_separation(E)
            except SeparationError:
                continue
            x = rng.random(d)
            lhs = minkowski_sum(pinned_dist_squared_set(E1, x), pinned_dist_squared_set(E2, x))
            rhs = box_set_approx(E, E1, E2, pin=x, root=False)
            inclusion_bad += not lhs.issubset(rhs, slack=2 * E.delta)
            inclusion_checked += 1
            checked_here += 1
        for j in range(100):
            rng = rng_for(11, d, j)
            E = _random_grid(rng, d, 10)
            x = rng.random(d)
            kk = int(rng.integers(1, 4))
            try:
                L = chain_length_set(E, x, kk)
            except DegenerateInputError:
                kk = 1
                L = chain_length_set(E, x, kk)
            projected = project_boxes(chain_set(E, x, kk), sum_projection_matrix(kk))
            projection_bad += not L.isclose(projected, atol=1e-12)
            projection_checked += 1
    ok = inclusion_bad == 0 and projection_bad == 0
    criterion(10, ok, f"sum-set inclusion {inclusion_checked} sets / {inclusion_bad} failures; "
                      f"projection {projection_checked} sets / {projection_bad} failures")
    assert ok


def test_determinism(criterion):
    configs = [
        ("box-sweep", {"p": "7,11,331", "sizes": "5,6,329:331", "samples": 5}),
        ("box-sweep", {"p": "5,7", "sizes": "all", "samples": 1, "mode": "exhaustive"}),
        ("sharpness", {"s": 0.4, "q": "2,4,8,16"}),
        ("trilinear", {"s": 0.84, "n": 10, "t": 1.0, "eps": "2^-4,2^-5,2^-6"}),
        ("audit", {"p": "7,11", "d": "1,2,3", "trials": 10, "nu2_trials": 10}),
    ]
    differing = []
    for name, params in configs:
        a = run_experiment(ExperimentConfig(name, dict(params), seed=2024)).to_csv()
        b = run_experiment(ExperimentConfig(name, dict(params), seed=2024)).to_csv()
        if a.encode() != b.encode():
            differing.append(name)
    ok = not differing
    criterion(11, ok, f"{len(configs)} experiments rerun, byte-identical CSV: {not differing} {differing}")
    assert ok
