"""Distance-type sets of grid sets, by per-cell interval arithmetic.

For each configuration of cells the exact range of the relevant distance
function over the product of the (closed) cells is bounded by the nearest
and farthest separations between the cells. The resulting unions contain the
value of every configuration of points in those cells and lie inside the
``O(delta)``-neighbourhood of the continuum set.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..errors import DegenerateInputError, PreconditionError
from .grid import DiscreteMeasure, GridSet
from .intervals import IntervalUnion, minkowski_sum, union_all

MAX_CHAIN_TUPLES = 5_000_000


def point_cell_range(x: np.ndarray, cells: np.ndarray, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nearest and farthest distance from point ``x`` to each cell."""
    lo = cells * delta
    hi = lo + delta
    near = np.maximum(0.0, np.maximum(lo - x, x - hi))
    far = np.maximum(np.abs(x - lo), np.abs(x - hi))
    return np.sqrt((near**2).sum(axis=-1)), np.sqrt((far**2).sum(axis=-1))


def cell_cell_range(a: np.ndarray, b: np.ndarray, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nearest and farthest distance between points of cells ``a`` and ``b`` (broadcasts)."""
    diff = np.abs(a - b)
    near = np.maximum(0, diff - 1)
    far = diff + 1
    return np.sqrt((near * near).sum(axis=-1)) * delta, np.sqrt((far * far).sum(axis=-1)) * delta


def _runs_1d(cells: np.ndarray) -> np.ndarray:
    """Maximal runs of consecutive 1-d cells as ``(first, last)`` rows."""
    c = cells[:, 0]
    breaks = np.flatnonzero(np.diff(c) != 1)
    first = np.concatenate([[0], breaks + 1])
    last = np.concatenate([breaks, [len(c) - 1]])
    return np.column_stack([c[first], c[last]])


def _powered_ranges_from_cell(X: np.ndarray, F: GridSet, power: float) -> np.ndarray:
    """Intervals of ``|y - x|**power`` for x in cell X and y in each cell of F."""
    if F.d == 1:
        # consecutive cells give overlapping ranges, so a run behaves like one long box
        runs = _runs_1d(F.cells)
        x0 = X[0]
        near = np.maximum(0, np.maximum(runs[:, 0] - x0 - 1, x0 - runs[:, 1] - 1))
        far = np.maximum(runs[:, 1] + 1 - x0, x0 + 1 - runs[:, 0])
        lo, hi = near * F.delta, far * F.delta
    else:
        lo, hi = cell_cell_range(X[None, :], F.cells, F.delta)
    return np.column_stack([lo**power, hi**power])


def _powered_ranges_from_point(x: np.ndarray, F: GridSet, power: float) -> np.ndarray:
    lo, hi = point_cell_range(x, F.cells, F.delta)
    return np.column_stack([lo**power, hi**power])


def _check_point(x, d: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(d)
    if np.any(x < 0) or np.any(x > 1):
        raise PreconditionError("pin must lie in [0, 1]^d")
    return x


def pinned_dist_squared_set(E: GridSet, x, power: float = 2.0) -> IntervalUnion:
    """``{|x - y|**power : y in E}`` as a union of per-cell ranges (power 2 by default)."""
    if power <= 0:
        raise ValueError("power must be positive")
    if len(E) == 0:
        return IntervalUnion.empty()
    x = _check_point(x, E.d)
    return IntervalUnion(_powered_ranges_from_point(x, E, power))


def box_set_approx(
    E: GridSet,
    E1: GridSet,
    E2: GridSet,
    p: float = 2.0,
    pin=None,
    root: bool = True,
) -> IntervalUnion:
    """Values ``(|y - x|**p + |z - x|**p)**(1/p)`` for x in E, y in E1, z in E2.

    ``p = 2`` is the Euclidean distance from ``(x, x)`` to ``(y, z)``;
    ``p = 1`` gives lengths of two-link chains. With ``pin`` given, x is that
    single point instead of ranging over the cells of E. ``root=False``
    returns the sums of p-th powers (the squared-distance set when p = 2).

    For a fixed x-cell the union over (y, z) is the Minkowski sum of the
    y-ranges and the z-ranges, which is how it is computed.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    for F in (E1, E2):
        if F.d != E.d or F.n != E.n:
            raise ValueError("grid sets differ in dimension or resolution")
    if len(E1) and len(E2) and not E1.isdisjoint(E2):
        raise PreconditionError("E1 and E2 must be disjoint")
    if len(E1) == 0 or len(E2) == 0 or (pin is None and len(E) == 0):
        return IntervalUnion.empty()

    if pin is not None:
        x = _check_point(pin, E.d)
        total = minkowski_sum(
            IntervalUnion(_powered_ranges_from_point(x, E1, p)),
            IntervalUnion(_powered_ranges_from_point(x, E2, p)),
        )
    else:
        parts = []
        for X in E.cells:
            parts.append(
                minkowski_sum(
                    IntervalUnion(_powered_ranges_from_cell(X, E1, p)),
                    IntervalUnion(_powered_ranges_from_cell(X, E2, p)),
                )
            )
        total = union_all(parts)
    if not root:
        return total
    return total.map_monotone(lambda a: a ** (1.0 / p))


def _chain_vertices(E: GridSet, x, k: int) -> tuple[np.ndarray, np.ndarray]:
    if not 1 <= k <= 4:
        raise PreconditionError("chain length k must be in 1..4")
    x = _check_point(x, E.d)
    keep = np.any(E.cells != E.cell_of(x), axis=1)
    cells = E.cells[keep]
    if len(cells) < k:
        raise DegenerateInputError(f"need {k} cells besides the pin's cell, have {len(cells)}")
    count = math.perm(len(cells), k)
    if count > MAX_CHAIN_TUPLES:
        raise PreconditionError(f"{count} ordered {k}-tuples exceed the cap {MAX_CHAIN_TUPLES}")
    tuples = np.fromiter(
        itertools.chain.from_iterable(itertools.permutations(range(len(cells)), k)),
        dtype=np.int64,
        count=count * k,
    ).reshape(count, k)
    return x, cells[tuples]


def chain_set(E: GridSet, x, k: int) -> np.ndarray:
    """Link-length boxes of all non-degenerate k-chains pinned at x.

    Returns an array of shape ``(chains, k, 2)``: for chain ``(x, x_1, ..., x_k)``
    over distinct cells other than x's own cell, entry ``[:, i]`` bounds
    ``|x_{i} - x_{i+1}|`` (with ``x_0 = x``).
    """
    x, verts = _chain_vertices(E, x, k)
    lo = np.empty(verts.shape[:2])
    hi = np.empty(verts.shape[:2])
    lo[:, 0], hi[:, 0] = point_cell_range(x, verts[:, 0, :], E.delta)
    for i in range(1, k):
        lo[:, i], hi[:, i] = cell_cell_range(verts[:, i - 1, :], verts[:, i, :], E.delta)
    return np.stack([lo, hi], axis=-1)


def chain_length_set(E: GridSet, x, k: int) -> IntervalUnion:
    """``{t_1 + ... + t_k}`` over non-degenerate k-chains pinned at x."""
    boxes = chain_set(E, x, k)
    return IntervalUnion(boxes.sum(axis=1))


def sum_projection_matrix(k: int) -> np.ndarray:
    """Unit-Jacobian map ``(t_1, ..., t_k) -> (t_1 + ... + t_k, t_2, ..., t_k)``."""
    T = np.eye(k)
    T[0, :] = 1.0
    return T


def project_boxes(boxes: np.ndarray, T: np.ndarray) -> IntervalUnion:
    """First coordinate of the image of axis-aligned boxes under the linear map T."""
    k = boxes.shape[1]
    corners = np.array(list(itertools.product((0, 1), repeat=k)))
    # vertex v of box b has coordinates boxes[b, i, corners[v, i]]
    verts = np.take_along_axis(boxes[:, None, :, :], corners[None, :, :, None], axis=3)[..., 0]
    first = verts @ T[0]
    return IntervalUnion(np.column_stack([first.min(axis=1), first.max(axis=1)]))


def perimeter_set(E: GridSet) -> IntervalUnion:
    """Perimeters ``|ab| + |bc| + |ca|`` over unordered triples of distinct cells (collinear included)."""
    if len(E) < 3:
        raise DegenerateInputError("need at least three cells")
    idx = np.array(list(itertools.combinations(range(len(E)), 3)), dtype=np.int64)
    a, b, c = (E.cells[idx[:, j]] for j in range(3))
    lo = np.zeros(len(idx))
    hi = np.zeros(len(idx))
    for u, v in ((a, b), (b, c), (c, a)):
        l, h = cell_cell_range(u, v, E.delta)
        lo += l
        hi += h
    return IntervalUnion(np.column_stack([lo, hi]))


def triangle_side_boxes(E: GridSet) -> np.ndarray:
    """Side-length boxes ``(|ab|, |bc|, |ca|)`` for unordered triples of distinct cells."""
    if len(E) < 3:
        raise DegenerateInputError("need at least three cells")
    idx = np.array(list(itertools.combinations(range(len(E)), 3)), dtype=np.int64)
    a, b, c = (E.cells[idx[:, j]] for j in range(3))
    sides = [cell_cell_range(u, v, E.delta) for u, v in ((a, b), (b, c), (c, a))]
    return np.stack([np.stack(s, axis=-1) for s in sides], axis=1)


def joint_distance_histogram(A: GridSet, B: GridSet, bins: int) -> tuple[np.ndarray, np.ndarray]:
    """Mass of cell-centre pair distances per bin on ``[0, sqrt(2d)]``.

    Returns ``(mass, edges)``; the mass sums to 1 when A and B are nonempty.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if A.d != B.d:
        raise ValueError("grid sets differ in dimension")
    edges = np.linspace(0.0, math.sqrt(2 * A.d), bins + 1)
    mass = np.zeros(bins)
    if len(A) == 0 or len(B) == 0:
        return mass, edges
    ca, cb = A.centers(), B.centers()
    for start in range(0, len(ca), 1024):
        dist = np.sqrt(((ca[start:start + 1024, None, :] - cb[None, :, :]) ** 2).sum(axis=-1))
        mass += np.histogram(dist.ravel(), bins=edges)[0]
    return mass / (len(A) * len(B)), edges


def trilinear_mass(
    mu: DiscreteMeasure,
    mu1: DiscreteMeasure,
    mu2: DiscreteMeasure,
    t: float,
    eps,
) -> float | np.ndarray:
    """Product-measure mass of ``{(x, y, z) : |(y, z) - (x, x)| in [t - eps, t + eps]}``.

    Evaluated on cell-centre triples with uniform weights. ``eps`` may be a
    sequence, in which case an array of masses is returned.
    """
    eps_arr = np.atleast_1d(np.asarray(eps, dtype=float))
    if np.any(eps_arr <= 0):
        raise ValueError("eps must be positive")
    supports = (mu.support, mu1.support, mu2.support)
    if len({s.d for s in supports}) != 1:
        raise ValueError("supports must share the dimension")
    X, Y, Z = (s.centers() for s in supports)
    lo2 = np.maximum(t - eps_arr, 0.0) ** 2
    hi2 = (t + eps_arr) ** 2
    hits = np.zeros(len(eps_arr), dtype=np.int64)
    for x in X:
        a = ((Y - x) ** 2).sum(axis=1)
        b = np.sort(((Z - x) ** 2).sum(axis=1))
        for i, (l2, h2) in enumerate(zip(lo2, hi2)):
            # pairs with l2 <= a + b <= h2
            hits[i] += int(
                np.searchsorted(b, h2 - a, side="right").sum() - np.searchsorted(b, l2 - a, side="left").sum()
            )
    mass = hits / (len(X) * len(Y) * len(Z))
    return float(mass[0]) if np.ndim(eps) == 0 else mass
