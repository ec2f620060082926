"""Series coefficients of the lattice Green's function by term integration.

The return probability generating function is an average of powers of the
structure function over the torus. Expanding

    lambda(k)^n = C(d,2)^(-n) * (sum_{m<n} cos k_m cos k_n)^n

by the multinomial theorem and integrating each monomial coordinate by
coordinate reduces everything to Wallis integrals

    (1/pi) * Integral_0^pi cos(t)^(2j) dt = C(2j, j) / 4^j.

Only exponent assignments whose per-coordinate totals are all even survive,
which is the same parity constraint the walk counts obey. The enumeration is
a recursive odometer over the C(d,2) pair exponents with parity pruning, so
this module provides an oracle for walkcount that shares no code with it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from .errors import ResourceError, ValidationError
from .lattice import Lattice
from .series import ExactSeries

# the odometer visits C(n + m - 1, m - 1) exponent vectors per coefficient;
# beyond this many the caller should be counting walks instead
DEFAULT_TERM_LIMIT = 5_000_000


def wallis_moment(j: int) -> Fraction:
    """(1/pi) * Integral_0^pi cos(t)^(2j) dt."""
    if j < 0:
        raise ValidationError(f"moment index must be nonnegative, got {j}")
    return Fraction(math.comb(2 * j, j), 4**j)


def _even_moment_numerator(e: int) -> int:
    """C(e, e/2), the numerator of the Wallis moment with 2^e cleared."""
    return math.comb(e, e // 2)


def count_excursions_analytic(dimension: int, n: int) -> int:
    """a_n(0) as a sum of multinomial coefficients times cosine moments.

    Works with the integer counts directly: the 4^-j and C(d,2)^-n
    normalisations cancel against the coordination number c = 4*C(d,2).
    """
    pairs = list(combinations(range(dimension), 2))
    m = len(pairs)
    total = 0
    exponents = [0] * dimension

    # odometer over (n_1, ..., n_m) with sum n; prunes when the odd
    # per-coordinate exponents can no longer be fixed by the remaining budget
    def descend(t: int, remaining: int, prefix_multinomial: int):
        nonlocal total
        i, j = pairs[t]
        if t == m - 1:
            exponents[i] += remaining
            exponents[j] += remaining
            if all(e % 2 == 0 for e in exponents):
                term = prefix_multinomial
                for e in exponents:
                    term *= _even_moment_numerator(e)
                total += term
            exponents[i] -= remaining
            exponents[j] -= remaining
            return
        for k in range(remaining + 1):
            exponents[i] += k
            exponents[j] += k
            # each remaining unit toggles exactly two coordinate parities
            odd = sum(e % 2 for e in exponents)
            if odd <= 2 * (remaining - k):
                descend(t + 1, remaining - k, prefix_multinomial * math.comb(remaining, k))
            exponents[i] -= k
            exponents[j] -= k

    descend(0, n, 1)
    return total


def lgf_series_wallis(
    lattice: Lattice, max_order: int, term_limit: int = DEFAULT_TERM_LIMIT
) -> ExactSeries:
    """Probability series p_n(0) for n <= max_order via term integration.

    Cost grows like n^(C(d,2)-1) per coefficient, so this is for low
    dimension and moderate order; term_limit guards against runaway calls.
    """
    if max_order < 0:
        raise ValidationError(f"max_order must be nonnegative, got {max_order}")
    m = lattice.pair_count
    visits = math.comb(max_order + m - 1, m - 1)
    if visits > term_limit:
        raise ResourceError(
            f"coefficient {max_order} needs {visits} exponent vectors, "
            f"limit is {term_limit}"
        )
    c = lattice.coordination_number
    coeffs = []
    scale = 1
    for n in range(max_order + 1):
        coeffs.append(Fraction(count_excursions_analytic(lattice.dimension, n), scale))
        scale *= c
    return ExactSeries(coeffs)
