"""Dense containers for subsets of F_p^d and F_p.

Points are encoded mixed-radix with the first coordinate most significant,
so ``bits.reshape((p,) * d)[x_1, ..., x_d]`` is the membership of ``x``.
"""

from __future__ import annotations

import io
from typing import Iterable

import numpy as np

from ..errors import StructuralError
from .core import as_prime, as_vec, check_capacity


def encode(points: np.ndarray, p: int) -> np.ndarray:
    """Mixed-radix index of each row of an ``(n, d)`` coordinate array."""
    points = np.asarray(points, dtype=np.int64)
    idx = np.zeros(points.shape[0], dtype=np.int64)
    for j in range(points.shape[1]):
        idx = idx * p + points[:, j]
    return idx


def decode(indices: np.ndarray, p: int, d: int) -> np.ndarray:
    """Inverse of :func:`encode`."""
    idx = np.asarray(indices, dtype=np.int64).copy()
    out = np.empty((idx.shape[0], d), dtype=np.int64)
    for j in range(d - 1, -1, -1):
        out[:, j] = idx % p
        idx //= p
    return out


class PointSet:
    """A subset of F_p^d stored as a dense boolean array of length ``p**d``."""

    __slots__ = ("p", "d", "bits", "card")

    def __init__(self, p, d: int, bits: np.ndarray):
        p = as_prime(p)
        size = check_capacity(p, d)
        bits = np.ascontiguousarray(bits, dtype=bool).reshape(-1)
        if bits.shape[0] != size:
            raise StructuralError(f"bit array has length {bits.shape[0]}, expected {size}")
        bits = bits.copy()
        bits.setflags(write=False)
        self.p = p
        self.d = d
        self.bits = bits
        self.card = int(np.count_nonzero(bits))

    # construction

    @classmethod
    def empty(cls, p, d: int) -> "PointSet":
        return cls(p, d, np.zeros(check_capacity(as_prime(p), d), dtype=bool))

    @classmethod
    def full(cls, p, d: int) -> "PointSet":
        return cls(p, d, np.ones(check_capacity(as_prime(p), d), dtype=bool))

    @classmethod
    def from_indices(cls, p, d: int, indices: Iterable[int]) -> "PointSet":
        p = as_prime(p)
        bits = np.zeros(check_capacity(p, d), dtype=bool)
        idx = np.fromiter(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= bits.size):
            raise ValueError("index out of range")
        bits[idx] = True
        return cls(p, d, bits)

    @classmethod
    def from_points(cls, p, d: int, points) -> "PointSet":
        """Build from an iterable of coordinate tuples (scalars allowed when ``d == 1``)."""
        p = as_prime(p)
        check_capacity(p, d)
        pts = np.asarray(list(points), dtype=np.int64)
        if pts.size == 0:
            return cls.empty(p, d)
        pts = pts.reshape(-1, d)
        if pts.min() < 0 or pts.max() >= p:
            raise ValueError(f"coordinates must lie in [0, {p})")
        return cls.from_indices(p, d, encode(pts, p))

    @classmethod
    def random(cls, p, d: int, size: int, rng: np.random.Generator) -> "PointSet":
        """Uniformly random subset of the given size (sampling without replacement)."""
        p = as_prime(p)
        total = check_capacity(p, d)
        if not 0 <= size <= total:
            raise ValueError(f"size {size} not in [0, {total}]")
        return cls.from_indices(p, d, rng.choice(total, size=size, replace=False))

    # views

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def points(self) -> np.ndarray:
        """``(card, d)`` array of member coordinates in index order."""
        return decode(self.indices(), self.p, self.d)

    def grid(self) -> np.ndarray:
        return self.bits.reshape((self.p,) * self.d)

    def index_of(self, x) -> int:
        return int(encode(as_vec(x, self.p, self.d)[None, :], self.p)[0])

    def __len__(self):
        return self.card

    def __contains__(self, x):
        return bool(self.bits[self.index_of(x)])

    def __iter__(self):
        for row in self.points():
            yield tuple(int(c) for c in row)

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.p == other.p and self.d == other.d and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.p, self.d, self.bits.tobytes()))

    def __repr__(self):
        return f"PointSet(p={self.p}, d={self.d}, card={self.card})"

    # set algebra

    def check_compatible(self, other: "PointSet"):
        if self.p != other.p or self.d != other.d:
            raise StructuralError(
                f"incompatible point sets: (p={self.p}, d={self.d}) vs (p={other.p}, d={other.d})"
            )

    def issubset(self, other: "PointSet") -> bool:
        self.check_compatible(other)
        return not np.any(self.bits & ~other.bits)

    def isdisjoint(self, other: "PointSet") -> bool:
        self.check_compatible(other)
        return not np.any(self.bits & other.bits)

    def __or__(self, other: "PointSet") -> "PointSet":
        self.check_compatible(other)
        return PointSet(self.p, self.d, self.bits | other.bits)

    def __and__(self, other: "PointSet") -> "PointSet":
        self.check_compatible(other)
        return PointSet(self.p, self.d, self.bits & other.bits)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self.check_compatible(other)
        return PointSet(self.p, self.d, self.bits & ~other.bits)

    # text format: header "p d card", then one point per line

    def to_text(self) -> str:
        buf = io.StringIO()
        buf.write(f"{self.p} {self.d} {self.card}\n")
        for row in self.points():
            buf.write(" ".join(str(int(c)) for c in row))
            buf.write("\n")
        return buf.getvalue()

    @classmethod
    def from_text(cls, text: str) -> "PointSet":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty point-set file")
        try:
            p, d, card = (int(tok) for tok in lines[0].split())
        except ValueError as exc:
            raise ValueError(f"bad header {lines[0]!r}; expected 'p d card'") from exc
        rows = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
        if any(len(r) != d for r in rows):
            raise ValueError(f"every point line must have {d} coordinates")
        out = cls.from_points(p, d, rows)
        if out.card != card or len(rows) != card:
            raise ValueError(f"header declares {card} points, file lists {len(rows)} ({out.card} distinct)")
        return out

    def save(self, path):
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "PointSet":
        with open(path, encoding="ascii") as fh:
            return cls.from_text(fh.read())


class ScalarSet:
    """A subset of F_p as a boolean array of length p."""

    __slots__ = ("p", "bits", "card")

    def __init__(self, p, bits: np.ndarray):
        p = as_prime(p)
        bits = np.asarray(bits, dtype=bool).reshape(-1).copy()
        if bits.shape[0] != p:
            raise StructuralError(f"scalar set needs {p} bits, got {bits.shape[0]}")
        bits.setflags(write=False)
        self.p = p
        self.bits = bits
        self.card = int(np.count_nonzero(bits))

    @classmethod
    def from_values(cls, p, values) -> "ScalarSet":
        p = as_prime(p)
        bits = np.zeros(p, dtype=bool)
        vals = np.asarray(list(values), dtype=np.int64)
        if vals.size:
            bits[vals % p] = True
        return cls(p, bits)

    def values(self) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.bits)]

    def is_full(self) -> bool:
        return self.card == self.p

    def issubset(self, other: "ScalarSet") -> bool:
        return self.p == other.p and not np.any(self.bits & ~other.bits)

    def __len__(self):
        return self.card

    def __contains__(self, t):
        return 0 <= t < self.p and bool(self.bits[t])

    def __iter__(self):
        return iter(self.values())

    def __eq__(self, other):
        if isinstance(other, ScalarSet):
            return self.p == other.p and np.array_equal(self.bits, other.bits)
        if isinstance(other, (set, frozenset)):
            return set(self.values()) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.bits.tobytes()))

    def __repr__(self):
        return f"ScalarSet(p={self.p}, {self.values()})"


class Histogram:
    """Non-negative integer counts indexed by ``t in F_p``."""

    __slots__ = ("p", "counts")

    def __init__(self, p, counts: np.ndarray):
        p = as_prime(p)
        counts = np.asarray(counts, dtype=np.int64).reshape(-1).copy()
        if counts.shape[0] != p:
            raise StructuralError(f"histogram needs {p} bins, got {counts.shape[0]}")
        if counts.size and counts.min() < 0:
            raise ValueError("histogram counts must be non-negative")
        counts.setflags(write=False)
        self.p = p
        self.counts = counts

    def __getitem__(self, t: int) -> int:
        return int(self.counts[t])

    def total(self) -> int:
        return int(self.counts.sum())

    def sum_of_squares(self) -> int:
        return sum(int(c) * int(c) for c in self.counts)

    def support(self) -> ScalarSet:
        return ScalarSet(self.p, self.counts > 0)

    def as_dict(self) -> dict[int, int]:
        return {int(t): int(c) for t, c in enumerate(self.counts) if c}

    def __eq__(self, other):
        if not isinstance(other, Histogram):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.counts, other.counts)

    def __repr__(self):
        return f"Histogram(p={self.p}, {self.as_dict()})"
