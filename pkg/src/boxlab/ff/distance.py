"""Exact distance sets, box sets and counting functions over F_p^d.

Everything here is integer arithmetic. Pairwise kernels are blocked so that
the temporary ``(rows, cols)`` norm matrices stay a few MiB.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from ..errors import DegenerateInputError
from .core import as_vec, check_capacity
from .pointset import Histogram, PointSet, ScalarSet

_BLOCK = 1 << 21


def _pair_norm_blocks(P: np.ndarray, Q: np.ndarray, p: int) -> Iterator[np.ndarray]:
    """Yield blocks of ``||P_i - Q_j||`` covering all of ``P x Q``."""
    if len(P) == 0 or len(Q) == 0:
        return
    rows = max(1, _BLOCK // max(1, len(Q)))
    for start in range(0, len(P), rows):
        chunk = P[start:start + rows]
        diff = chunk[:, None, :] - Q[None, :, :]
        yield (diff * diff).sum(axis=-1) % p


def pinned_norms(E: PointSet, x) -> np.ndarray:
    """``||x - y||`` for every ``y`` in E, in index order."""
    xv = as_vec(x, E.p, E.d)
    diff = E.points() - xv[None, :]
    return (diff * diff).sum(axis=-1) % E.p


def distance_set(E: PointSet) -> ScalarSet:
    """``{||x - y|| : x, y in E}``."""
    bits = np.zeros(E.p, dtype=bool)
    P = E.points()
    for block in _pair_norm_blocks(P, P, E.p):
        bits[block.ravel()] = True
    return ScalarSet(E.p, bits)


def pinned_distance_set(E: PointSet, x) -> ScalarSet:
    """``{||x - y|| : y in E}``; ``x`` need not belong to E."""
    bits = np.zeros(E.p, dtype=bool)
    bits[pinned_norms(E, x)] = True
    return ScalarSet(E.p, bits)


def counting_function(E: PointSet, x) -> Histogram:
    """``nu_x(t) = #{y in E : ||x - y|| = t}``."""
    return Histogram(E.p, np.bincount(pinned_norms(E, x), minlength=E.p))


def joint_distance_set(A: PointSet, B: PointSet) -> ScalarSet:
    """``{||a - b|| : a in A, b in B}``."""
    A.check_compatible(B)
    bits = np.zeros(A.p, dtype=bool)
    for block in _pair_norm_blocks(A.points(), B.points(), A.p):
        bits[block.ravel()] = True
    return ScalarSet(A.p, bits)


def joint_counting_function(A: PointSet, B: PointSet) -> Histogram:
    """``nu(t) = #{(a, b) in A x B : ||a - b|| = t}``."""
    A.check_compatible(B)
    counts = np.zeros(A.p, dtype=np.int64)
    for block in _pair_norm_blocks(A.points(), B.points(), A.p):
        counts += np.bincount(block.ravel(), minlength=A.p)
    return Histogram(A.p, counts)


def _distinct_pair_sums(nu: np.ndarray, p: int) -> np.ndarray:
    """Number of ordered pairs ``y != z`` with ``nu``-distances summing to each ``s``.

    With ``nu[t]`` points at distance ``t`` from a pin, the pairs landing on
    ``s`` number ``sum_{t1 + t2 = s} nu[t1] nu[t2]`` minus the ``y = z``
    terms, which sit at ``s = 2t`` with multiplicity ``nu[t]``.
    """
    full = np.convolve(nu, nu)
    sums = full[:p].copy()
    sums[: len(full) - p] += full[p:]
    sums[(2 * np.arange(p)) % p] -= nu
    return sums


def pinned_box_set(E: PointSet, x) -> ScalarSet:
    """``{||x - y|| + ||x - z|| : y, z in E, y != z}``."""
    nu = np.bincount(pinned_norms(E, x), minlength=E.p)
    return ScalarSet(E.p, _distinct_pair_sums(nu, E.p) > 0)


def box_set(E: PointSet, stop_when_full: bool = True) -> ScalarSet:
    """``{||x - y|| + ||x - z|| : x, y, z in E, y != z}``.

    The pin ``x`` may coincide with ``y`` or ``z``. Per pin the cost is one
    length-p convolution of the counting function, so the whole set costs
    ``O(|E|^2 d + |E| p^2)`` rather than ``O(|E|^3)``.
    """
    p = E.p
    bits = np.zeros(p, dtype=bool)
    if E.card < 2:
        return ScalarSet(p, bits)
    P = E.points()
    for block_start in range(0, len(P), 256):
        pins = P[block_start:block_start + 256]
        diff = pins[:, None, :] - P[None, :, :]
        dist = (diff * diff).sum(axis=-1) % p
        for row in dist:
            nu = np.bincount(row, minlength=p)
            bits |= _distinct_pair_sums(nu, p) > 0
            if stop_when_full and bits.all():
                return ScalarSet(p, bits)
    return ScalarSet(p, bits)


def split_halves(E: PointSet, seed) -> tuple[PointSet, PointSet]:
    """Seeded arbitrary split of E into disjoint halves whose sizes differ by at most one."""
    if E.card < 2:
        raise DegenerateInputError(f"cannot split a set of size {E.card}")
    rng = np.random.default_rng(seed)
    idx = rng.permutation(E.indices())
    half = (E.card + 1) // 2
    return (
        PointSet.from_indices(E.p, E.d, idx[:half]),
        PointSet.from_indices(E.p, E.d, idx[half:]),
    )


def product_with_diagonal(E1: PointSet, E2: PointSet, E: PointSet) -> tuple[PointSet, PointSet]:
    """``A = E1 x E2`` and ``B = {(x, x) : x in E}`` as subsets of F_p^(2d)."""
    E1.check_compatible(E2)
    E1.check_compatible(E)
    p, d = E.p, E.d
    stride = check_capacity(p, 2 * d) // p**d
    a_idx = (E1.indices()[:, None] * stride + E2.indices()[None, :]).ravel()
    e_idx = E.indices()
    return (
        PointSet.from_indices(p, 2 * d, a_idx),
        PointSet.from_indices(p, 2 * d, e_idx * stride + e_idx),
    )
