"""Finite unions of closed real intervals."""

from __future__ import annotations

import csv
import io
from typing import Callable, Iterable, Optional

import numpy as np

_PAIR_CHUNK = 1 << 22


def _merge(arr: np.ndarray) -> np.ndarray:
    """Sort and merge closed intervals; touching intervals (gap <= 0) are fused."""
    if arr.shape[0] == 0:
        return arr.reshape(0, 2)
    arr = arr[np.argsort(arr[:, 0], kind="stable")]
    lo, hi = arr[:, 0], np.maximum.accumulate(arr[:, 1])
    # a new component starts wherever the running maximum falls short of the next lo
    starts = np.concatenate([[True], lo[1:] > hi[:-1]])
    first = np.flatnonzero(starts)
    last = np.concatenate([first[1:] - 1, [len(lo) - 1]])
    return np.column_stack([lo[first], hi[last]])


class IntervalUnion:
    """Sorted, pairwise-disjoint closed intervals ``[lo, hi]`` with strictly positive gaps."""

    __slots__ = ("_iv",)

    def __init__(self, intervals: Iterable = ()):
        arr = np.asarray(list(intervals) if not isinstance(intervals, np.ndarray) else intervals, dtype=float)
        arr = arr.reshape(-1, 2)
        if np.any(~np.isfinite(arr)):
            raise ValueError("interval endpoints must be finite")
        if np.any(arr[:, 0] > arr[:, 1]):
            raise ValueError("interval with lo > hi")
        merged = _merge(arr)
        merged.setflags(write=False)
        self._iv = merged

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls(np.empty((0, 2)))

    @property
    def intervals(self) -> np.ndarray:
        return self._iv

    def __len__(self):
        return self._iv.shape[0]

    def __iter__(self):
        for lo, hi in self._iv:
            yield float(lo), float(hi)

    def __bool__(self):
        return len(self) > 0

    def __repr__(self):
        body = " U ".join(f"[{lo:.6g}, {hi:.6g}]" for lo, hi in self)
        return f"IntervalUnion({body or 'empty'})"

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return np.array_equal(self._iv, other._iv)

    def measure(self) -> float:
        return float(np.sum(self._iv[:, 1] - self._iv[:, 0]))

    def lengths(self) -> np.ndarray:
        return self._iv[:, 1] - self._iv[:, 0]

    def contains(self, t: float, slack: float = 0.0) -> bool:
        i = np.searchsorted(self._iv[:, 0], t + slack, side="right") - 1
        return bool(i >= 0 and t <= self._iv[i, 1] + slack)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(np.vstack([self._iv, other._iv]))

    __or__ = union

    def widen(self, slack: float) -> "IntervalUnion":
        return IntervalUnion(self._iv + np.array([-slack, slack]))

    def issubset(self, other: "IntervalUnion", slack: float = 0.0) -> bool:
        """True when every component lies inside one component of ``other`` widened by ``slack``."""
        if len(self) == 0:
            return True
        if len(other) == 0:
            return False
        big = other.widen(slack).intervals
        i = np.searchsorted(big[:, 0], self._iv[:, 0], side="right") - 1
        ok = (i >= 0) & (self._iv[:, 1] <= big[np.clip(i, 0, None), 1])
        return bool(np.all(ok))

    def isclose(self, other: "IntervalUnion", atol: float) -> bool:
        return len(self) == len(other) and bool(np.allclose(self._iv, other._iv, rtol=0.0, atol=atol))

    def map_monotone(self, fn: Callable[[np.ndarray], np.ndarray]) -> "IntervalUnion":
        """Image under a continuous non-decreasing function."""
        return IntervalUnion(fn(self._iv))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["lo", "hi"])
        for lo, hi in self:
            writer.writerow([repr(lo), repr(hi)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "IntervalUnion":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["lo", "hi"]:
            raise ValueError("expected a 'lo,hi' header")
        return cls([(float(a), float(b)) for a, b in rows[1:] if a or b])


def union_all(parts: Iterable) -> IntervalUnion:
    """Merge many interval arrays or unions in one pass."""
    arrays = [p.intervals if isinstance(p, IntervalUnion) else np.asarray(p, dtype=float).reshape(-1, 2) for p in parts]
    if not arrays:
        return IntervalUnion.empty()
    return IntervalUnion(np.vstack(arrays))


def minkowski_sum(U: IntervalUnion, V: IntervalUnion) -> IntervalUnion:
    """``{u + v : u in U, v in V}``: pairwise component sums, merged."""
    if not U or not V:
        return IntervalUnion.empty()
    a, b = U.intervals, V.intervals
    rows = max(1, _PAIR_CHUNK // len(b))
    pieces = []
    for start in range(0, len(a), rows):
        block = (a[start:start + rows, None, :] + b[None, :, :]).reshape(-1, 2)
        pieces.append(_merge(block))
    return IntervalUnion(np.vstack(pieces))


def contained_interval(U: IntervalUnion) -> Optional[tuple[float, float]]:
    """Longest component of U (leftmost on ties), or None when U is empty."""
    if not U:
        return None
    i = int(np.argmax(U.lengths()))
    lo, hi = U.intervals[i]
    return float(lo), float(hi)
