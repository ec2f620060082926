"""Step sets and structure functions of face-centered cubic lattices.

The d-dimensional fcc lattice has one step for every vector with exactly two
nonzero entries, each entry being +1 or -1. There are 4*C(d,2) of them, so
the coordination number is 12 in three dimensions and 2*d*(d-1) in general.
The structure function is the Fourier transform of the uniform step
distribution,

    lambda(k) = C(d,2)^(-1) * sum_{m<n} cos(k_m) * cos(k_n),

normalised so that lambda(0) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import ValidationError

Step = tuple[int, ...]


def fcc_step_set(dimension: int) -> list[Step]:
    """All vectors in {-1,0,1}^d with exactly two nonzero entries.

    Steps are returned in lexicographic order, which fixes the layout of
    every neighbour table built from them.
    """
    if dimension < 2:
        raise ValidationError(f"dimension must be at least 2, got {dimension}")
    steps = []
    for i, j in combinations(range(dimension), 2):
        for si in (-1, 1):
            for sj in (-1, 1):
                v = [0] * dimension
                v[i] = si
                v[j] = sj
                steps.append(tuple(v))
    steps.sort()
    return steps


@dataclass(frozen=True)
class StructureFunction:
    """Symbolic form of the step-set Fourier transform: the list of
    coordinate pairs {m,n} averaged over, all with weight 1/C(d,2)."""

    dimension: int
    pairs: tuple[tuple[int, int], ...]

    def __call__(self, k: Sequence[float]) -> float:
        return structure_function_eval(self, k)


def structure_function_eval(sf: StructureFunction, k: Sequence[float]) -> float:
    if len(k) != sf.dimension:
        raise ValidationError(
            f"point has {len(k)} coordinates, lattice has {sf.dimension}"
        )
    c = [math.cos(v) for v in k]
    return sum(c[m] * c[n] for m, n in sf.pairs) / len(sf.pairs)


@dataclass(frozen=True)
class Lattice:
    """A face-centered cubic lattice of the given dimension."""

    dimension: int
    steps: tuple[Step, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(fcc_step_set(self.dimension)))

    @property
    def coordination_number(self) -> int:
        return len(self.steps)

    @property
    def pair_count(self) -> int:
        """Number of coordinate pairs, C(d,2)."""
        return self.dimension * (self.dimension - 1) // 2

    def structure_function(self) -> StructureFunction:
        pairs = tuple(combinations(range(self.dimension), 2))
        return StructureFunction(self.dimension, pairs)

    def __repr__(self):
        return f"Lattice(dimension={self.dimension})"
