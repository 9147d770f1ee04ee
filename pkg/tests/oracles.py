"""Slow, obviously-correct reference implementations used only by the tests."""

from __future__ import annotations

import cmath
import itertools
import math

import numpy as np


def naive_norm(v, p):
    total = 0
    for c in v:
        total += int(c) * int(c)
    return total % p


def naive_distance(x, y, p):
    return naive_norm([a - b for a, b in zip(x, y)], p)


def naive_hinge(points, p, t):
    """Triple loop over E^3."""
    count = 0
    for x in points:
        for y in points:
            if naive_distance(x, y, p) != t:
                continue
            for z in points:
                if naive_distance(x, z, p) == t:
                    count += 1
    return count


def naive_box_set(points, p):
    out = set()
    for x in points:
        for i, y in enumerate(points):
            for j, z in enumerate(points):
                if i != j:
                    out.add((naive_distance(x, y, p) + naive_distance(x, z, p)) % p)
    return out


def naive_pinned_box_set(points, p, x, distinct=True):
    out = set()
    for i, y in enumerate(points):
        for j, z in enumerate(points):
            if distinct and i == j:
                continue
            out.add((naive_distance(x, y, p) + naive_distance(x, z, p)) % p)
    return out


def naive_orthogonal_group(p):
    """All 2x2 matrices over F_p with M^T M = I, by brute force over p^4 candidates."""
    found = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * a + c * c) % p == 1 and (b * b + d * d) % p == 1 and (a * b + c * d) % p == 0:
            found.append((a, b, c, d))
    return found


def naive_fourier(points, p, d):
    """``f_hat(m) = p^-d sum_{x in E} exp(-2 pi i x.m / p)`` for every m, as a dict."""
    out = {}
    for m in itertools.product(range(p), repeat=d):
        acc = 0j
        for x in points:
            acc += cmath.exp(-2j * math.pi * (sum(a * b for a, b in zip(x, m)) % p) / p)
        out[m] = acc / p**d
    return out


def naive_lambda(A, theta, p):
    a, b, c, d = theta
    out = {}
    for u in A:
        for v in A:
            tv = ((a * v[0] + b * v[1]) % p, (c * v[0] + d * v[1]) % p)
            z = ((u[0] - tv[0]) % p, (u[1] - tv[1]) % p)
            out[z] = out.get(z, 0) + 1
    return out


def sampled_box_values(E, E1, E2, rng, samples=4000):
    """Euclidean box values at random points of random cells; all must lie in the interval approximation."""
    delta = E.delta
    xi = rng.integers(0, len(E), samples)
    yi = rng.integers(0, len(E1), samples)
    zi = rng.integers(0, len(E2), samples)
    x = (E.cells[xi] + rng.random((samples, E.d))) * delta
    y = (E1.cells[yi] + rng.random((samples, E.d))) * delta
    z = (E2.cells[zi] + rng.random((samples, E.d))) * delta
    return np.sqrt(((y - x) ** 2).sum(axis=1) + ((z - x) ** 2).sum(axis=1))


def brute_hinge_counts(points, p):
    """Hinge count for every t by materializing all |E|^3 triples (independent of the library)."""
    P = np.asarray(points, dtype=np.int64)
    diff = P[:, None, :] - P[None, :, :]
    D = (diff * diff).sum(axis=-1) % p
    out = np.zeros(p, dtype=np.int64)
    for t in range(p):
        hit = D == t
        out[t] = int((hit[:, :, None] & hit[:, None, :]).sum())
    return out
