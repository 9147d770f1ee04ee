"""Prime-field arithmetic: moduli, quadratic-form norms, spheres, characters, O2(F_p).

The additive character is fixed as ``chi(a) = exp(2*pi*i*a/p)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ..errors import CapacityError, StructuralError

MAX_PRIME = 2**13
MAX_POINTS = 2**26


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (inputs here are tiny)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """An odd prime ``3 <= p <= 2**13``."""

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
            raise TypeError(f"modulus must be an integer, got {p!r}")
        if not 3 <= p <= MAX_PRIME:
            raise CapacityError(f"modulus {p} outside [3, {MAX_PRIME}]")
        if not is_prime(int(p)):
            raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "p", int(p))

    @property
    def residue_mod4(self) -> int:
        return self.p % 4

    def __int__(self):
        return self.p


def as_prime(p) -> int:
    """Validate ``p`` (int or PrimeModulus) and return it as a plain int."""
    if isinstance(p, PrimeModulus):
        return p.p
    return _checked_prime(int(p))


@functools.lru_cache(maxsize=None)
def _checked_prime(p: int) -> int:
    return PrimeModulus(p).p


def check_capacity(p: int, d: int) -> int:
    """Return ``p**d``, raising CapacityError when it exceeds ``MAX_POINTS``."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    size = p**d
    if size > MAX_POINTS:
        raise CapacityError(f"p^d = {p}^{d} = {size} exceeds cap {MAX_POINTS}")
    return size


def as_vec(v: Iterable[int], p: int, d: int | None = None) -> np.ndarray:
    """Coerce ``v`` into a validated coordinate vector over F_p."""
    arr = np.atleast_1d(np.asarray(v, dtype=np.int64))
    if arr.ndim != 1:
        raise ValueError("a field vector must be one-dimensional")
    if d is not None and arr.shape[0] != d:
        raise StructuralError(f"vector has dimension {arr.shape[0]}, expected {d}")
    if arr.size == 0:
        raise ValueError("a field vector needs d >= 1 coordinates")
    if arr.min() < 0 or arr.max() >= p:
        raise ValueError(f"coordinates of {arr.tolist()} not in [0, {p})")
    return arr


def norm(v: Sequence[int], p) -> int:
    """Quadratic-form norm ``v_1^2 + ... + v_d^2 mod p``."""
    p = as_prime(p)
    arr = as_vec(v, p)
    return int((arr * arr).sum() % p)


def norms(points: np.ndarray, p: int) -> np.ndarray:
    """Row-wise norms of an ``(n, d)`` integer array (entries may be any integers)."""
    pts = np.asarray(points, dtype=np.int64) % p
    return (pts * pts).sum(axis=-1) % p


def sphere(p, d: int, t: int):
    """The sphere ``{x in F_p^d : ||x|| = t}`` as a PointSet."""
    from .pointset import PointSet

    p = as_prime(p)
    check_capacity(p, d)
    if not 0 <= t < p:
        raise ValueError(f"t={t} not in [0, {p})")
    return PointSet(p, d, norm_table(p, d) == t)


@functools.lru_cache(maxsize=32)
def _norm_table_cached(p: int, d: int) -> np.ndarray:
    sq = (np.arange(p, dtype=np.int64) ** 2) % p
    table = np.zeros((1,), dtype=np.int64)
    for _ in range(d):
        table = (table[:, None] + sq[None, :]).reshape(-1) % p
    table.setflags(write=False)
    return table


def norm_table(p: int, d: int) -> np.ndarray:
    """Norm of every point of F_p^d, flat in PointSet index order."""
    check_capacity(p, d)
    return _norm_table_cached(p, d)


@functools.lru_cache(maxsize=64)
def roots_of_unity(p: int) -> np.ndarray:
    """``exp(2*pi*i*a/p)`` for ``a = 0..p-1``."""
    a = np.arange(p)
    w = np.exp(2j * np.pi * a / p)
    w.setflags(write=False)
    return w


def character(p, a: int) -> complex:
    """Additive character ``chi(a) = exp(2*pi*i*a/p)``."""
    p = as_prime(p)
    if not 0 <= a < p:
        raise ValueError(f"a={a} not in [0, {p})")
    return complex(roots_of_unity(p)[a])


class OrthMatrix2(NamedTuple):
    """2x2 matrix ``[[a, b], [c, d]]`` over F_p."""

    a: int
    b: int
    c: int
    d: int
    p: int

    def apply(self, v) -> np.ndarray:
        """Apply to a vector or to the rows of an ``(n, 2)`` array."""
        v = np.asarray(v, dtype=np.int64)
        x, y = v[..., 0], v[..., 1]
        return np.stack([(self.a * x + self.b * y) % self.p, (self.c * x + self.d * y) % self.p], axis=-1)

    def __matmul__(self, other: "OrthMatrix2") -> "OrthMatrix2":
        p = self.p
        return OrthMatrix2(
            (self.a * other.a + self.b * other.c) % p,
            (self.a * other.b + self.b * other.d) % p,
            (self.c * other.a + self.d * other.c) % p,
            (self.c * other.b + self.d * other.d) % p,
            p,
        )

    def transpose(self) -> "OrthMatrix2":
        return OrthMatrix2(self.a, self.c, self.b, self.d, self.p)

    def is_orthogonal(self) -> bool:
        a, b, c, d, p = self
        return (a * a + c * c) % p == 1 and (b * b + d * d) % p == 1 and (a * b + c * d) % p == 0

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.p


def orthogonal_group2(p) -> list[OrthMatrix2]:
    """All ``M`` over F_p with ``M^T M = I``.

    The first column runs over the unit circle ``a^2 + c^2 = 1``; the second
    column is then forced to be ``+-(-c, a)``. The group has ``2(p+1)``
    elements when ``p = 3 mod 4`` and ``2(p-1)`` when ``p = 1 mod 4``.
    """
    p = as_prime(p)
    sq = [(x * x) % p for x in range(p)]
    group = []
    for a in range(p):
        for c in range(p):
            if (sq[a] + sq[c]) % p != 1:
                continue
            group.append(OrthMatrix2(a, (-c) % p, c, a, p))
            group.append(OrthMatrix2(a, c, c, (-a) % p, p))
    return group
