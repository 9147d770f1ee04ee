"""Fourier analysis on F_p^d and the hinge / orthogonal-group counts.

Normalization: ``f_hat(m) = p^(-d) * sum_x chi(-x . m) f(x)`` with inverse
``f(x) = sum_m chi(x . m) f_hat(m)``. Under this convention Parseval reads
``sum_m |f_hat(m)|^2 = p^(-d) sum_x |f(x)|^2`` and the sphere coefficients
satisfy ``|S_t_hat(m)| <= 2 p^(-3/2)`` for ``d = 2``, ``t != 0``, ``m != 0``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import OrthMatrix2, as_prime, check_capacity, norm_table, orthogonal_group2, roots_of_unity
from .distance import joint_counting_function
from .pointset import PointSet, decode

D_BOUND_CONSTANT = 4 / math.log(2)


@dataclass(frozen=True)
class SpectrumTable:
    """Complex values indexed by frequency ``m in F_p^d``, stored as a ``(p,)*d`` array."""

    p: int
    d: int
    values: np.ndarray

    def __getitem__(self, m) -> complex:
        return complex(self.values[tuple(np.atleast_1d(m))])

    def energy(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def max_nonzero_frequency(self) -> float:
        mags = np.abs(self.values).ravel()
        return float(mags[1:].max()) if mags.size > 1 else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow([f"m_{j + 1}" for j in range(self.d)] + ["re", "im"])
        flat = self.values.ravel()
        coords = decode(np.arange(flat.size), self.p, self.d)
        for m, v in zip(coords, flat):
            writer.writerow([int(c) for c in m] + [repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()


def _dft_axiswise(grid: np.ndarray, p: int, sign: int) -> np.ndarray:
    """Apply ``sum_x chi(sign * x m) g(..x..)`` along every axis in turn."""
    w = roots_of_unity(p)
    k = np.arange(p)
    mat = w[(sign * np.outer(k, k)) % p]
    out = grid.astype(complex)
    for axis in range(grid.ndim):
        out = np.moveaxis(np.tensordot(mat, out, axes=([1], [axis])), 0, axis)
    return out


def _as_grid(f, p: int | None = None, d: int | None = None) -> tuple[np.ndarray, int, int]:
    if isinstance(f, PointSet):
        return f.grid().astype(float), f.p, f.d
    arr = np.asarray(f)
    p = as_prime(p if p is not None else arr.shape[0])
    d = arr.ndim if d is None else d
    check_capacity(p, d)
    if arr.shape != (p,) * d:
        raise ValueError(f"function array must have shape {(p,) * d}, got {arr.shape}")
    return arr, p, d


def fourier_transform(f, p: int | None = None) -> SpectrumTable:
    """Transform a PointSet indicator (or a ``(p,)*d`` array) with ``d`` length-p DFTs."""
    grid, p, d = _as_grid(f, p)
    values = _dft_axiswise(grid, p, -1) / p**d
    values.setflags(write=False)
    return SpectrumTable(p, d, values)


def inverse_transform(spec: SpectrumTable) -> np.ndarray:
    """``f(x) = sum_m chi(x . m) f_hat(m)``."""
    return _dft_axiswise(spec.values, spec.p, +1)


def sphere_fourier(p, d: int, t: int) -> SpectrumTable:
    """Transform of the sphere indicator ``S_t``."""
    p = as_prime(p)
    if not 0 <= t < p:
        raise ValueError(f"t={t} not in [0, {p})")
    grid = (norm_table(p, d) == t).reshape((p,) * d).astype(float)
    return fourier_transform(grid, p)


def sphere_fourier_max(p, d: int, t: int) -> float:
    """``max_{m != 0} |S_t_hat(m)|``."""
    return sphere_fourier(p, d, t).max_nonzero_frequency()


def weil_salie_bound(p) -> float:
    return 2.0 * float(p) ** -1.5


def sphere_counts(E: PointSet, t: int) -> np.ndarray:
    """``nu_x(t)`` for every ``x in F_p^d`` at once, as a ``(p,)*d`` integer array.

    Computed as the sum of ``E`` translated by every sphere point, i.e. the
    convolution ``E * S_t`` evaluated exactly in integers.
    """
    p, d = E.p, E.d
    grid = E.grid().astype(np.int64)
    out = np.zeros_like(grid)
    if E.card == 0:
        return out
    for s in decode(np.flatnonzero(norm_table(p, d) == t), p, d):
        out += np.roll(grid, shift=tuple(int(c) for c in s), axis=tuple(range(d)))
    return out


def hinge_count(E: PointSet, t: int) -> int:
    """``#{(x, y, z) in E^3 : ||x - y|| = ||x - z|| = t}`` (exact)."""
    if not 0 <= t < E.p:
        raise ValueError(f"t={t} not in [0, {E.p})")
    counts = sphere_counts(E, t)[E.grid()]
    return sum(int(c) * int(c) for c in counts)


@dataclass(frozen=True)
class ErrorTermReport:
    t: int
    hinge: int
    main_term: Fraction
    D: float
    bound: float
    satisfied: bool

    @property
    def ratio(self) -> float:
        return abs(self.D) / self.bound if self.bound > 0 else 0.0


def error_term(E: PointSet, t: int) -> ErrorTermReport:
    """Split the hinge count as ``|E|^3 / p^2 + D(E)`` and compare ``|D|`` with its bound.

    The bound is ``(4 / ln 2) * p^((d+1)/2) * |E|^2 / p^2``.
    """
    p, d, n = E.p, E.d, E.card
    h = hinge_count(E, t)
    main = Fraction(n**3, p**2)
    D = float(h - main)
    bound = D_BOUND_CONSTANT * p ** ((d + 1) / 2) * n * n / p**2
    return ErrorTermReport(t, h, main, D, bound, abs(D) <= bound)


def lambda_table(A: PointSet, theta: OrthMatrix2) -> np.ndarray:
    """``lambda(z) = #{(u, v) in A x A : u - theta v = z}`` as a ``(p, p)`` array."""
    if A.d != 2:
        raise ValueError("lambda tables are defined for subsets of F_p^2")
    p = A.p
    if theta.p != p:
        raise ValueError("matrix and point set use different moduli")
    U = A.points()
    V = theta.apply(U)
    table = np.zeros(p * p, dtype=np.int64)
    if len(U):
        z = (U[:, None, :] - V[None, :, :]) % p
        idx = (z[..., 0] * p + z[..., 1]).ravel()
        table += np.bincount(idx, minlength=p * p)
    return table.reshape(p, p)


@dataclass(frozen=True)
class NuSquareReport:
    lhs: int
    rhs: int
    satisfied: bool


def nu_square_inequality(A: PointSet, B: PointSet, group: list[OrthMatrix2] | None = None) -> NuSquareReport:
    """Compare ``sum_t nu(t)^2`` with ``|A||B| + sum_theta sum_z lambda^A(z) lambda^B(z)``.

    Only proved for ``p = 3 mod 4``: when ``-1`` is a square, pairs whose
    differences are zero and isotropic are not covered by the right side.
    """
    A.check_compatible(B)
    if A.d != 2:
        raise ValueError("the nu^2 inequality is stated for subsets of F_p^2")
    lhs = joint_counting_function(A, B).sum_of_squares()
    rhs = A.card * B.card
    for theta in group if group is not None else orthogonal_group2(A.p):
        la = lambda_table(A, theta).ravel()
        lb = lambda_table(B, theta).ravel()
        rhs += int(np.dot(la.astype(object), lb.astype(object)))
    return NuSquareReport(lhs, rhs, lhs <= rhs)


def weil_salie_scan(p, ts=None) -> list[tuple[int, float]]:
    """``(t, max_{m != 0} |S_t_hat(m)| / (2 p^(-3/2)))`` for each ``t`` in ``ts`` (default all)."""
    p = as_prime(p)
    bound = weil_salie_bound(p)
    ts = range(p) if ts is None else ts
    return [(t, sphere_fourier_max(p, 2, t) / bound) for t in ts]



def hinge_counts_all(E: PointSet) -> np.ndarray:
    """Hinge count for every ``t`` at once, as ``sum_x nu_x(t)^2`` from pairwise norms.

    Costs ``O(|E|^2 d)``; cheaper than :func:`hinge_count` per ``t`` when E is sparse.
    """
    p = E.p
    out = np.zeros(p, dtype=object)
    P = E.points()
    for start in range(0, len(P), 256):
        diff = P[start:start + 256, None, :] - P[None, :, :]
        dist = (diff * diff).sum(axis=-1) % p
        rows = dist.shape[0]
        nu = np.bincount((np.arange(rows)[:, None] * p + dist).ravel(), minlength=rows * p).reshape(rows, p)
        out += (nu * nu).sum(axis=0).astype(object)
    return out


def error_terms(E: PointSet) -> list[ErrorTermReport]:
    """:func:`error_term` for every ``t in F_p``."""
    p, d, n = E.p, E.d, E.card
    main = Fraction(n**3, p**2)
    bound = D_BOUND_CONSTANT * p ** ((d + 1) / 2) * n * n / p**2
    reports = []
    for t, h in enumerate(hinge_counts_all(E)):
        D = float(int(h) - main)
        reports.append(ErrorTermReport(t, int(h), main, D, bound, abs(D) <= bound))
    return reports
