"""Undetermined-coefficient guessing of recurrences and differential equations.

Given data (a sequence, a power series, or a multidimensional count table),
an ansatz with polynomial coefficients is posed, the resulting homogeneous
linear system is solved modulo word-sized primes, the nullspace is lifted to
the rationals by CRT plus rational reconstruction, and every candidate is
certified by exact back-substitution before being returned. Nothing reaches
a caller on the strength of floating point or a single prime.

Univariate searches sweep (order, degree) pairs by increasing order+degree,
preferring smaller order on ties, so the first certified hit has minimal
combined size. Multivariate searches take an explicit shift support and a
degree bound and return a whole basis of certified recurrences.

A failed search returns None (univariate) or an empty list (multivariate);
InsufficientDataError means the data could not even overdetermine the ansatz.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterator, Sequence

import numpy as np

from . import polyops as P
from .errors import InsufficientDataError, ValidationError
from .modular import fraction_mod, nullspace_mod, reconstruct_vector, word_primes
from .operators import LinearODE, LinearRecurrence, MultivariateRecurrence
from .series import ExactSeries

HOLDOUT = 10          # equations reserved for certification only
DEFAULT_MARGIN = 10   # required overdetermination of the solve itself
PRIME_CAP = 25


def _staircase(max_order: int, max_degree: int):
    for total in range(max_order + max_degree + 1):
        for r in range(min(total, max_order) + 1):
            d = total - r
            if d <= max_degree:
                yield r, d


def _lift_nullspace(
    build_mod_matrix: Callable[[int], np.ndarray],
    max_basis: int,
    prime_cap: int = PRIME_CAP,
) -> Iterator[list[list[Fraction]]]:
    """Yield successively refined rational nullspace bases of the implicit
    system, one per prime added. Yields nothing if the nullspace is trivial.

    Primes where the matrix loses rank (or divides a data denominator) are
    discarded; the accumulator restarts whenever a prime reveals a larger
    rank than everything seen before. The caller certifies each yielded
    basis exactly and stops consuming on success.
    """
    best_nullity: int | None = None
    best_pivots: list[int] | None = None
    residues: list[list[int]] | None = None
    modulus = 1
    for p in word_primes(prime_cap):
        try:
            matrix = build_mod_matrix(p)
        except ZeroDivisionError:
            continue
        basis, pivots = nullspace_mod(matrix, p)
        nullity = basis.shape[0]
        if nullity == 0:
            return
        if best_nullity is None or nullity < best_nullity:
            best_nullity, best_pivots = nullity, pivots
            residues, modulus = None, 1
        elif nullity > best_nullity or pivots != best_pivots:
            continue
        rows = basis[:max_basis].tolist()
        if residues is None:
            residues = [[int(v) for v in row] for row in rows]
            modulus = p
        else:
            inv = pow(modulus % p, -1, p)
            residues = [
                [a + modulus * ((b - a) % p * inv % p) for a, b in zip(acc, row)]
                for acc, row in zip(residues, rows)
            ]
            modulus *= p
        lifted = []
        for row in residues:
            vec = reconstruct_vector(row, modulus)
            if vec is None:
                lifted = None
                break
            lifted.append(vec)
        if lifted is not None:
            yield lifted


def _primitive_int_vector(vec: Sequence[Fraction]) -> list[int]:
    den = 1
    for v in vec:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g else ints


def _vector_to_polys(ints: Sequence[int], blocks: int, width: int):
    return [tuple(ints[j * width : (j + 1) * width]) for j in range(blocks)]


def guess_recurrence(
    values: Sequence,
    max_order: int,
    max_degree: int,
    *,
    margin: int = DEFAULT_MARGIN,
) -> LinearRecurrence | None:
    """Minimal certified recurrence sum_j q_j(n) f(n+j) = 0 for the data,
    or None if no ansatz within the bounds fits."""
    values = [Fraction(v) for v in values]
    length = len(values)
    tried_any = False
    for r, d in _staircase(max_order, max_degree):
        unknowns = (r + 1) * (d + 1)
        solve_eqs = length - r - HOLDOUT  # instantiation points 0..solve_eqs-1
        if solve_eqs < unknowns + margin:
            continue
        tried_any = True

        def build(p, r=r, d=d, solve_eqs=solve_eqs, unknowns=unknowns):
            vmod = [fraction_mod(v, p) for v in values]
            rows = np.empty((solve_eqs, unknowns), dtype=np.int64)
            for n in range(solve_eqs):
                npow = [pow(n, i, p) for i in range(d + 1)]
                for j in range(r + 1):
                    base = vmod[n + j]
                    for i in range(d + 1):
                        rows[n, j * (d + 1) + i] = base * npow[i] % p
            return rows

        found = _search_basis(
            build,
            lambda ints: _certify_recurrence(ints, r, d, values),
        )
        if found is not None:
            return found
    if not tried_any:
        raise InsufficientDataError(
            f"{length} terms cannot overdetermine any ansatz within "
            f"order {max_order}, degree {max_degree} (margin {margin})"
        )
    return None


def _search_basis(build, certify):
    """Run the lift generator, certifying every candidate vector of every
    yielded basis; among the certified survivors of the first successful
    basis, the lexicographically smallest coefficient vector wins."""
    for basis in _lift_nullspace(build, max_basis=4):
        hits = []
        for vec in basis:
            ints = _primitive_int_vector(vec)
            obj = certify(ints)
            if obj is not None:
                hits.append((tuple(ints), obj))
        if hits:
            return min(hits, key=lambda h: h[0])[1]
    return None


def _certify_recurrence(ints, r, d, values):
    polys = _vector_to_polys(ints, r + 1, d + 1)
    if all(P.is_zero(P.trim(list(q))) for q in polys):
        return None
    rec = LinearRecurrence(tuple(polys))
    if all(v == 0 for v in rec.residuals(values)):
        return rec
    return None


def guess_ode(
    series: ExactSeries,
    max_order: int,
    max_degree: int,
    *,
    margin: int = DEFAULT_MARGIN,
) -> LinearODE | None:
    """Minimal certified differential operator annihilating the series, or
    None if no ansatz within the bounds fits."""
    coeffs = series.coefficients
    top = series.order
    tried_any = False
    for r, d in _staircase(max_order, max_degree):
        unknowns = (r + 1) * (d + 1)
        solve_eqs = top + 1 - r - HOLDOUT  # residual coefficients 0..solve_eqs-1
        if solve_eqs < unknowns + margin:
            continue
        tried_any = True

        def build(p, r=r, d=d, solve_eqs=solve_eqs, unknowns=unknowns):
            cmod = [fraction_mod(v, p) for v in coeffs]
            rows = np.zeros((solve_eqs, unknowns), dtype=np.int64)
            for k in range(solve_eqs):
                for j in range(r + 1):
                    for i in range(d + 1):
                        idx = k + j - i
                        if idx < 0 or idx > top:
                            continue
                        ff = 1
                        for t in range(j):
                            ff = ff * ((idx - t) % p) % p
                        rows[k, j * (d + 1) + i] = cmod[idx] * ff % p
            return rows

        def certify(ints, r=r, d=d):
            polys = _vector_to_polys(ints, r + 1, d + 1)
            if all(P.is_zero(P.trim(list(q))) for q in polys):
                return None
            ode = LinearODE(tuple(polys))
            if ode.annihilates(series):
                return ode
            return None

        found = _search_basis(build, certify)
        if found is not None:
            return found
    if not tried_any:
        raise InsufficientDataError(
            f"{top + 1} terms cannot overdetermine any ansatz within "
            f"order {max_order}, degree {max_degree} (margin {margin})"
        )
    return None


def box_support(n_shifts: Sequence[int], width: int, arity: int):
    """Shift vectors {n_shifts} x {0..width}^arity, sorted."""
    return tuple(
        sorted(
            (s0,) + xs
            for s0 in n_shifts
            for xs in iproduct(range(width + 1), repeat=arity)
        )
    )


def _monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = [e for e in iproduct(range(degree + 1), repeat=nvars) if sum(e) <= degree]
    out.sort()
    return out


def guess_multivariate_recurrence(
    value: Callable[[int, tuple[int, ...]], int],
    arity: int,
    n_top: int,
    support: Sequence[tuple[int, ...]],
    degree: int,
    *,
    margin: int = DEFAULT_MARGIN,
    max_basis: int = 8,
    seed: int = 20240901,
    sample_extra: int = 40,
    sample_points: Sequence[tuple[int, ...]] | None = None,
) -> list[MultivariateRecurrence]:
    """Certified basis of recurrences with the given shift support and
    coefficient degree for the table value(n, x), sampled for n <= n_top.

    value must return exact integers for every n <= n_top and arbitrary
    integer coordinates (symmetry folding and out-of-cone zeros are the
    caller's business). sample_points overrides the seeded random sample
    when the caller knows which instantiation points carry information.
    The returned list may be empty; a table that is identically zero on
    the sampled region raises InsufficientDataError.
    """
    support = tuple(sorted(tuple(s) for s in support))
    if any(len(s) != arity + 1 for s in support):
        raise ValidationError("shift vectors must have arity+1 entries")
    max_s0 = max(s[0] for s in support)
    if max_s0 < 0 or min(s[0] for s in support) < 0:
        raise ValidationError("shifts in n must be nonnegative")
    if n_top < max_s0:
        raise ValidationError("table too shallow for the support's n shifts")
    monos = _monomials(arity + 1, degree)
    unknowns = len(support) * len(monos)
    need = unknowns + margin + HOLDOUT + sample_extra

    n_hi = n_top - max_s0

    def access_row(pt):
        return [
            value(pt[0] + s[0], tuple(a + b for a, b in zip(pt[1:], s[1:])))
            for s in support
        ]

    # rows that touch no nonzero table value constrain nothing; only
    # informative points count toward the quota
    points: list[tuple[int, ...]] = []
    access: list[list[int]] = []
    seen = set()
    if sample_points is not None:
        for pt in sample_points:
            pt = tuple(pt)
            if len(pt) != arity + 1 or not 0 <= pt[0] <= n_hi:
                raise ValidationError(f"sample point {pt} out of range")
            if pt in seen:
                continue
            seen.add(pt)
            row = access_row(pt)
            if any(row):
                points.append(pt)
                access.append(row)
        if len(points) < need:
            raise InsufficientDataError(
                f"only {len(points)} informative sample points available, "
                f"need {need}"
            )
    rng = random.Random(seed)

    def top_up(quota):
        attempts = 0
        while len(points) < quota and attempts < 200 * quota:
            attempts += 1
            n = rng.randint(0, n_hi)
            x = tuple(rng.randint(-n, n) for _ in range(arity))
            pt = (n,) + x
            if pt in seen:
                continue
            seen.add(pt)
            row = access_row(pt)
            if any(row):
                points.append(pt)
                access.append(row)
        if len(points) < quota:
            raise InsufficientDataError(
                f"only {len(points)} informative sample points available, "
                f"need {quota}"
            )

    def build(p):
        solve_rows = len(points) - HOLDOUT
        rows = np.empty((solve_rows, unknowns), dtype=np.int64)
        for i in range(solve_rows):
            pt = points[i]
            mono_vals = []
            for exps in monos:
                mv = 1
                for v, e in zip(pt, exps):
                    if e:
                        mv = mv * pow(v % p, e, p) % p
                mono_vals.append(mv)
            col = 0
            for s_idx in range(len(support)):
                a = access[i][s_idx] % p
                for mv in mono_vals:
                    rows[i, col] = a * mv % p
                    col += 1
        return rows

    def certify(basis):
        kept: list[MultivariateRecurrence] = []
        clean = True
        # held-out instantiations go first: a spurious vector annihilates
        # the solve rows by construction, so these kill it cheapest
        check_order = (
            points[len(points) - HOLDOUT:] + points[: len(points) - HOLDOUT]
        )
        for vec in basis:
            ints = _primitive_int_vector(vec)
            used_support = []
            used_polys = []
            col = 0
            for s in support:
                poly = {}
                for exps in monos:
                    if ints[col]:
                        poly[exps] = ints[col]
                    col += 1
                if poly:
                    used_support.append(s)
                    used_polys.append(poly)
            rec = (
                MultivariateRecurrence(tuple(used_support), tuple(used_polys))
                if used_polys
                else None
            )
            if rec is not None and all(
                rec.apply_at(value, pt) == 0 for pt in check_order
            ):
                kept.append(rec)
            else:
                clean = False
        return kept, clean

    # an unlucky sample can be rank-deficient, polluting the nullspace
    # with vectors that die on the held-out rows; enlarging the sample
    # restores the rank, so retry before settling for the survivors
    survivors: list[MultivariateRecurrence] = []
    retries = 3 if sample_points is None else 1
    for attempt in range(retries):
        if sample_points is None:
            top_up(need + attempt * (unknowns // 2 + 20))
        for basis in _lift_nullspace(build, max_basis=max_basis):
            kept, clean = certify(basis)
            if clean and kept:
                return kept
            survivors = kept or survivors
        if survivors and sample_points is None:
            # genuine relations exist; one more enlargement often
            # separates them from the junk, after that take what holds
            continue
    return survivors


def __getattr__(name):
    # multi-step guessing lives in its own module but belongs to this API
    if name in ("multi_step_pipeline", "SectionTable"):
        from . import multistep

        return getattr(multistep, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
