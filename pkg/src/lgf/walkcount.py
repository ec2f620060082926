"""Exact excursion counting by dynamic programming over the symmetry wedge.

The number of n-step walks from the origin to x satisfies

    a_{n+1}(x) = sum over steps s of a_n(x - s),

with a_0 = indicator of the origin. Both the step set and the start point are
invariant under permuting coordinates and flipping their signs, so a_n is as
well, and it suffices to store one value per canonical point: coordinates
sorted in non-increasing order of absolute value. Points with odd coordinate
sum are never reachable (every step changes the sum by -2, 0 or +2) and are
excluded from the state space altogether.

Counts are arbitrary-precision Python integers. The propagation keeps two
alternating buffers (numpy object arrays) and a precomputed neighbour table,
so the inner gather loop runs in C while the arithmetic stays exact.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterator, Sequence

import numpy as np

from .errors import ResourceError, ValidationError
from .lattice import Lattice

MEM_BUDGET_ENV = "LGF_MEM_BUDGET"


def canonical_point(x: Sequence[int]) -> tuple[int, ...]:
    """Wedge representative of x: absolute values, sorted non-increasing."""
    return tuple(sorted((abs(v) for v in x), reverse=True))


def orbit_size(x: Sequence[int]) -> int:
    """Number of lattice points equivalent to x under coordinate
    permutations and sign flips."""
    c = canonical_point(x)
    perms = math.factorial(len(c))
    for v in set(c):
        perms //= math.factorial(c.count(v))
    nonzero = sum(1 for v in c if v != 0)
    return perms * 2**nonzero


def _wedge_points(dimension: int, radius: int) -> list[tuple[int, ...]]:
    """Canonical points with max coordinate <= radius and even sum,
    in lexicographic order of the non-increasing representation."""
    pts = []
    for comb in combinations_with_replacement(range(radius + 1), dimension):
        if sum(comb) % 2 == 0:
            pts.append(comb[::-1])
    pts.sort()
    return pts


class _WedgeIndex:
    """Enumerated wedge with a vectorised canonicalise-and-rank operation."""

    def __init__(self, dimension: int, radius: int):
        self.dimension = dimension
        self.radius = radius
        self.points = _wedge_points(dimension, radius)
        self.count = len(self.points)
        self.coords = np.array(self.points, dtype=np.int64)
        base = radius + 2
        self._radix = base ** np.arange(dimension - 1, -1, -1, dtype=np.int64)
        self._keys = self.coords @ self._radix
        # lexicographic enumeration makes the radix keys strictly increasing
        self.norm_inf = self.coords[:, 0] if self.count else np.zeros(0, np.int64)
        self.norm_l1 = self.coords.sum(axis=1)
        self.rank_of = {p: i for i, p in enumerate(self.points)}

    def ranks(self, pts: np.ndarray) -> np.ndarray:
        """Ranks of canonicalised rows of pts; out-of-radius rows get the
        sentinel rank == count (a permanently zero cell)."""
        canon = np.sort(np.abs(pts), axis=1)[:, ::-1]
        out = np.full(len(canon), self.count, dtype=np.int64)
        inside = canon[:, 0] <= self.radius
        keys = canon[inside] @ self._radix
        pos = np.searchsorted(self._keys, keys)
        hit = self._keys[pos.clip(0, self.count - 1)] == keys
        idx = np.where(inside)[0]
        out[idx[hit]] = pos[hit]
        return out

    def neighbour_table(self, steps: Sequence[tuple[int, ...]]) -> np.ndarray:
        nbr = np.empty((self.count, len(steps)), dtype=np.int64)
        for j, s in enumerate(steps):
            nbr[:, j] = self.ranks(self.coords + np.array(s, dtype=np.int64))
        return nbr


def _check_budget(n: int, points: int, coordination: int, extra_bytes: int) -> None:
    budget = os.environ.get(MEM_BUDGET_ENV)
    if not budget:
        return
    try:
        limit = int(budget)
    except ValueError as exc:
        raise ValidationError(f"{MEM_BUDGET_ENV} must be an integer") from exc
    # two value buffers of Python ints (28 bytes header + limbs) plus pointers
    int_bytes = 28 + 8 * (1 + n * math.log2(max(coordination, 2)) / 64)
    needed = int(2 * points * (8 + int_bytes)) + extra_bytes
    if needed > limit:
        raise ResourceError(
            f"layer n={n} needs about {needed} bytes, budget is {limit}"
        )


@dataclass
class WalkTable:
    """Excursion counts a_n(x) over the wedge, for n <= max_steps.

    Values with max|x_i| beyond radius_cut are truncated to zero during
    propagation. With the default cut, ceil(N/2)+1, every a_n(0) is exact;
    values of layer n further out than 2*radius_cut - n may be undercounts.
    """

    lattice: Lattice
    max_steps: int
    radius_cut: int
    _index: _WedgeIndex
    _layers: list[np.ndarray]

    def get(self, n: int, x: Sequence[int]) -> int:
        if not 0 <= n <= self.max_steps:
            raise ValidationError(f"layer {n} not in table (0..{self.max_steps})")
        if len(x) != self.lattice.dimension:
            raise ValidationError(
                f"point has {len(x)} coordinates, lattice has {self.lattice.dimension}"
            )
        c = canonical_point(x)
        rank = self._index.rank_of.get(c)
        if rank is None:
            return 0
        return int(self._layers[n][rank])

    def layer_items(self, n: int) -> Iterator[tuple[tuple[int, ...], int]]:
        """Canonical points of layer n with nonzero count."""
        vals = self._layers[n]
        for rank in np.nonzero(vals)[0]:
            yield self._index.points[rank], int(vals[rank])

    def origin_series(self) -> list[int]:
        origin = self._index.rank_of[(0,) * self.lattice.dimension]
        return [int(layer[origin]) for layer in self._layers]


def count_walk_table(
    lattice: Lattice,
    max_steps: int,
    radius_cut: int | None = None,
    threads: int = 1,
) -> WalkTable:
    """Fill the wedge table of excursion counts up to max_steps.

    radius_cut defaults to ceil(max_steps/2)+1, which keeps the full origin
    series exact while bounding the state space. threads is accepted as a
    hint; the current engine is sequential, which is trivially bit-identical
    to any partitioned schedule.
    """
    if max_steps < 0:
        raise ValidationError(f"max_steps must be nonnegative, got {max_steps}")
    if threads < 1:
        raise ValidationError(f"threads must be positive, got {threads}")
    if radius_cut is None:
        radius_cut = -(-max_steps // 2) + 1
    if radius_cut < 0:
        raise ValidationError(f"radius_cut must be nonnegative, got {radius_cut}")

    index = _WedgeIndex(lattice.dimension, radius_cut)
    nbr = index.neighbour_table(lattice.steps)
    layers = _propagate(
        lattice, index, nbr, max_steps, radius_fn=lambda n: radius_cut, keep=True
    )
    return WalkTable(lattice, max_steps, radius_cut, index, layers)


def count_excursions(lattice: Lattice, max_steps: int) -> list[int]:
    """a_n(0) for n <= max_steps.

    Uses a per-layer cone cut min(n, max_steps - n): everything the origin
    series can depend on, nothing more. Layers are not retained.
    """
    if max_steps < 0:
        raise ValidationError(f"max_steps must be nonnegative, got {max_steps}")
    radius = max(max_steps // 2, 0)
    index = _WedgeIndex(lattice.dimension, radius)
    nbr = index.neighbour_table(lattice.steps)
    radius_fn = lambda n: min(n, max_steps - n)
    layers = _propagate(lattice, index, nbr, max_steps, radius_fn, keep=False)
    return [int(v) for v in layers]


def _propagate(lattice, index, nbr, max_steps, radius_fn, keep):
    """Run the stencil. Returns all layers (keep=True) or the origin column."""
    zero = 0
    vals = np.zeros(index.count + 1, dtype=object)  # last cell: sentinel zero
    vals[:] = zero
    origin_rank = index.rank_of[(0,) * lattice.dimension]
    vals[origin_rank] = 1

    nbr_bytes = nbr.nbytes
    kept: list = []
    if keep:
        kept.append(vals[: index.count].copy())
    else:
        kept.append(vals[origin_rank])

    for n in range(1, max_steps + 1):
        _check_budget(n, index.count, lattice.coordination_number, nbr_bytes)
        r = radius_fn(n)
        alive = np.nonzero((index.norm_inf <= r) & (index.norm_l1 <= 2 * n))[0]
        nxt = np.zeros(index.count + 1, dtype=object)
        nxt[:] = zero
        if len(alive):
            nxt[alive] = np.add.reduce(vals[nbr[alive]], axis=1)
        vals = nxt
        if keep:
            kept.append(vals[: index.count].copy())
        else:
            kept.append(vals[origin_rank])
    return kept


def mass_check(table: WalkTable, n: int) -> bool:
    """Total walk count over the full lattice at layer n equals c^n.
    Only meaningful when the table was built without truncation
    (radius_cut >= n)."""
    total = sum(orbit_size(x) * v for x, v in table.layer_items(n))
    return total == table.lattice.coordination_number**n
