"""Dyadic-grid subsets of [0, 1]^d and the fractal constructions built on them."""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateInputError, ResolutionError, SeparationError

MAX_RESOLUTION = {1: 14, 2: 8}


class GridSet:
    """Cells of side ``2**-n`` in ``[0, 1]^d``, stored as unique sorted integer rows.

    Cell ``c`` covers the closed box ``prod_j [c_j, c_j + 1] * delta``.
    """

    __slots__ = ("d", "n", "cells")

    def __init__(self, d: int, n: int, cells):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        if n < 0:
            raise ValueError("resolution exponent must be >= 0")
        arr = np.asarray(cells, dtype=np.int64).reshape(-1, d)
        if arr.size and (arr.min() < 0 or arr.max() >= 2**n):
            raise ValueError(f"cell coordinates must lie in [0, {2**n})")
        arr = np.unique(arr, axis=0) if arr.shape[0] else arr
        arr.setflags(write=False)
        self.d = d
        self.n = n
        self.cells = arr

    @property
    def delta(self) -> float:
        return 2.0**-self.n

    @property
    def side(self) -> int:
        return 2**self.n

    def __len__(self):
        return self.cells.shape[0]

    def __repr__(self):
        return f"GridSet(d={self.d}, n={self.n}, cells={len(self)})"

    def __eq__(self, other):
        if not isinstance(other, GridSet):
            return NotImplemented
        return self.d == other.d and self.n == other.n and np.array_equal(self.cells, other.cells)

    def lower(self) -> np.ndarray:
        return self.cells * self.delta

    def centers(self) -> np.ndarray:
        return (self.cells + 0.5) * self.delta

    def cell_of(self, x) -> np.ndarray:
        """Cell containing the point ``x`` (points on the far boundary belong to the last cell)."""
        x = np.asarray(x, dtype=float).reshape(self.d)
        return np.clip(np.floor(x / self.delta).astype(np.int64), 0, self.side - 1)

    def _keys(self) -> np.ndarray:
        key = np.zeros(len(self), dtype=np.int64)
        for j in range(self.d):
            key = key * self.side + self.cells[:, j]
        return key

    def isdisjoint(self, other: "GridSet") -> bool:
        self._check(other)
        return not np.intersect1d(self._keys(), other._keys()).size

    def issubset(self, other: "GridSet") -> bool:
        self._check(other)
        return bool(np.isin(self._keys(), other._keys()).all())

    def union(self, other: "GridSet") -> "GridSet":
        self._check(other)
        return GridSet(self.d, self.n, np.vstack([self.cells, other.cells]))

    def without(self, other: "GridSet") -> "GridSet":
        self._check(other)
        return GridSet(self.d, self.n, self.cells[~np.isin(self._keys(), other._keys())])

    def subset(self, mask) -> "GridSet":
        return GridSet(self.d, self.n, self.cells[np.asarray(mask)])

    def _check(self, other: "GridSet"):
        if self.d != other.d or self.n != other.n:
            raise ValueError("grid sets differ in dimension or resolution")

    @classmethod
    def from_points(cls, points, n: int, d: int | None = None) -> "GridSet":
        pts = np.asarray(points, dtype=float)
        d = d if d is not None else (pts.shape[-1] if pts.ndim > 1 else 1)
        pts = pts.reshape(-1, d)
        if pts.size and (pts.min() < 0 or pts.max() > 1):
            raise ValueError("points must lie in [0, 1]^d")
        side = 2**n
        cells = np.clip(np.floor(pts * side).astype(np.int64), 0, side - 1)
        return cls(d, n, cells)

    @classmethod
    def from_intervals(cls, intervals, n: int) -> "GridSet":
        """1-d cells overlapping the given closed intervals in positive length (or containing a point)."""
        side = 2**n
        idx = [_interval_cells(lo, hi, side) for lo, hi in np.asarray(intervals, dtype=float).reshape(-1, 2)]
        cells = np.concatenate(idx) if idx else np.empty(0, dtype=np.int64)
        return cls(1, n, cells[:, None])

    @classmethod
    def product(cls, factors: list["GridSet"]) -> "GridSet":
        """Cartesian product of 1-d grid sets at a common resolution."""
        n = factors[0].n
        cols = [f.cells[:, 0] for f in factors]
        mesh = np.stack(np.meshgrid(*cols, indexing="ij"), axis=-1).reshape(-1, len(factors))
        return cls(len(factors), n, mesh)

    # text format: header "d n", then one cell per line

    def to_text(self) -> str:
        buf = io.StringIO()
        buf.write(f"{self.d} {self.n}\n")
        for row in self.cells:
            buf.write(" ".join(str(int(c)) for c in row) + "\n")
        return buf.getvalue()

    @classmethod
    def from_text(cls, text: str) -> "GridSet":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty grid-set file")
        d, n = (int(tok) for tok in lines[0].split())
        rows = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
        if any(len(r) != d for r in rows):
            raise ValueError(f"every cell line must have {d} coordinates")
        return cls(d, n, np.asarray(rows, dtype=np.int64).reshape(-1, d))

    def save(self, path):
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "GridSet":
        with open(path, encoding="ascii") as fh:
            return cls.from_text(fh.read())


@dataclass(frozen=True)
class DiscreteMeasure:
    """Uniform probability measure on the cells of a GridSet."""

    support: GridSet

    def __post_init__(self):
        if len(self.support) == 0:
            raise DegenerateInputError("a probability measure needs a nonempty support")

    @property
    def weights(self) -> np.ndarray:
        return np.full(len(self.support), 1.0 / len(self.support))

    def total_mass(self) -> float:
        return float(self.weights.sum())


def _interval_cells(lo: float, hi: float, side: int) -> np.ndarray:
    first = min(int(math.floor(lo * side)), side - 1)
    last = min(int(math.ceil(hi * side)) - 1, side - 1)
    return np.arange(first, max(first, last) + 1, dtype=np.int64)


def cantor_ratio(s: float) -> float:
    """Contraction ratio ``2**(-1/s)`` of the two-branch set of similarity dimension ``s``."""
    if not 0 < s <= 1:
        raise ValueError(f"target dimension s={s} must lie in (0, 1]")
    return 2.0 ** (-1.0 / s)


def cantor_intervals(s: float, depth: int) -> np.ndarray:
    """The ``2**depth`` level-``depth`` intervals of the two-branch construction.

    Branch maps are ``x -> r x`` and ``x -> r x + 1 - r`` with ``r = 2**(-1/s)``.
    """
    r = cantor_ratio(s)
    left = np.zeros(1)
    length = 1.0
    for _ in range(depth):
        length *= r
        left = np.concatenate([left * r, left * r + (1.0 - r)])
    left.sort()
    return np.column_stack([left, left + length])


def cantor_set(s: float, d: int, n: int) -> GridSet:
    """d-fold product of the two-branch self-similar set, rasterized at ``delta = 2**-n``.

    The construction is iterated until the interval length drops below delta.
    """
    if n < 1:
        raise ValueError("resolution exponent must be >= 1")
    r = cantor_ratio(s)
    depth = 0
    while r**depth >= 2.0**-n:
        depth += 1
    line = GridSet.from_intervals(cantor_intervals(s, depth), n)
    return line if d == 1 else GridSet.product([line] * d)


def lattice_neighborhood(q: int, s: float, d: int, n: int) -> GridSet:
    """Cells meeting the closed ``q**(-d/s)``-neighbourhood of ``{k/q : k in Z^d, 0 <= k <= q}``."""
    if q < 2:
        raise ValueError("q must be >= 2")
    if not 0 < s <= d:
        raise ValueError(f"s={s} must lie in (0, {d}]")
    radius = float(q) ** (-d / s)
    delta = 2.0**-n
    if delta > radius:
        raise ResolutionError(f"grid step 2^-{n} does not resolve radius {radius:.3g}")
    side = 2**n
    reach = int(math.ceil(radius / delta)) + 1
    offsets = np.array(list(itertools.product(range(-reach, reach + 1), repeat=d)), dtype=np.int64)
    found = []
    for k in itertools.product(range(q + 1), repeat=d):
        center = np.asarray(k, dtype=float) / q
        base = np.floor(center / delta).astype(np.int64)
        cand = base + offsets
        cand = cand[np.all((cand >= 0) & (cand < side), axis=1)]
        lo = cand * delta
        gap = np.maximum(0.0, np.maximum(lo - center, center - (lo + delta)))
        found.append(cand[np.sqrt((gap**2).sum(axis=1)) <= radius])
    return GridSet(d, n, np.vstack(found))


def _box_gap(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Euclidean gap, in cell units, between integer boxes of equal side (broadcasts)."""
    g = np.maximum(0, np.abs(a - b) - 1)
    return np.sqrt((g * g).sum(axis=-1))


def _min_cell_gap(A: np.ndarray, B: np.ndarray) -> float:
    best = math.inf
    for start in range(0, len(A), 512):
        best = min(best, float(_box_gap(A[start:start + 512, None, :], B[None, :, :]).min()))
    return best


def dyadic_separation(E: GridSet) -> tuple[GridSet, GridSet, float]:
    """Split off two subsets of E lying in non-adjacent dyadic cubes.

    Scans levels ``k = 1..n`` and stops at the first level with two occupied
    cubes that do not touch. Among such pairs the one maximizing the smaller
    cell count is used (ties: first in lexicographic order). The returned
    separation is the Euclidean gap between the two cell sets, which is at
    least the gap between their cubes.
    """
    if len(E) < 2:
        raise SeparationError("need at least two cells")
    for k in range(1, E.n + 1):
        cubes = E.cells >> (E.n - k)
        ids, inverse, counts = np.unique(cubes, axis=0, return_inverse=True, return_counts=True)
        inverse = inverse.reshape(-1)
        if len(ids) < 2:
            continue
        cheb = np.abs(ids[:, None, :] - ids[None, :, :]).max(axis=-1)
        far = cheb > 1
        if not far.any():
            continue
        score = np.where(far, np.minimum(counts[:, None], counts[None, :]), -1)
        i, j = np.unravel_index(int(np.argmax(score)), score.shape)
        i, j = min(i, j), max(i, j)
        E1, E2 = E.subset(inverse == i), E.subset(inverse == j)
        return E1, E2, _min_cell_gap(E1.cells, E2.cells) * E.delta
    raise SeparationError(f"all cells sit in one cube and its neighbours at every level up to {E.n}")


def box_counting_dimension(E: GridSet, levels=None) -> float:
    """Least-squares slope of ``log2 N_k`` against ``k``, with ``N_k`` the occupied level-k dyadic cubes."""
    levels = list(range(1, E.n + 1)) if levels is None else list(levels)
    if len(levels) < 2:
        raise ValueError("need at least two levels")
    counts = [len(np.unique(E.cells >> (E.n - k), axis=0)) for k in levels]
    slope, _ = np.polyfit(np.asarray(levels, dtype=float), np.log2(counts), 1)
    return float(slope)
