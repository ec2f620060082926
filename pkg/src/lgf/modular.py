"""Exact linear algebra via word-sized primes, CRT and rational reconstruction.

The solver works on one prime at a time so that everything fits in int64
numpy arrays: with primes below 3*10^9 every intermediate of the row
reduction stays under 2^63 in magnitude. Results from several primes are
combined by the Chinese remainder theorem and lifted to rationals with the
half-extended Euclidean algorithm; callers must certify the lift exactly,
which also makes accidental bad primes (where the matrix loses rank) harmless
rather than fatal.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import prevprime

_PRIME_CEILING = 3_000_000_000
_prime_cache: list[int] = []


def word_primes(count: int) -> list[int]:
    """The `count` largest primes below 3*10^9, in decreasing order."""
    while len(_prime_cache) < count:
        p = _prime_cache[-1] if _prime_cache else _PRIME_CEILING
        _prime_cache.append(int(prevprime(p)))
    return _prime_cache[:count]


def fraction_mod(value: Fraction, p: int) -> int:
    """Image of a rational in Z/p. Raises ZeroDivisionError on a bad prime
    (denominator divisible by p)."""
    value = Fraction(value)
    return value.numerator * pow(value.denominator, -1, p) % p


def rref_mod(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Z/p. Returns (R, pivot columns)."""
    a = np.array(matrix, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        lead = r + int(nz[0])
        if lead != r:
            a[[r, lead]] = a[[lead, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        touched = np.nonzero(col)[0]
        if len(touched):
            a[touched] = (a[touched] - np.outer(col[touched], a[r])) % p
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def nullspace_mod(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Canonical nullspace basis mod p: one vector per free column, with a 1
    in that column and the solved pivot entries elsewhere. Returns
    (basis as rows, pivot columns)."""
    rref, pivots = rref_mod(matrix, p)
    cols = matrix.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, piv in enumerate(pivots):
            v = int(rref[row, f])
            if v:
                basis[i, piv] = (-v) % p
    return basis, pivots


def crt_combine(res_a: np.ndarray, mod_a: int, res_b: np.ndarray, mod_b: int):
    """Componentwise CRT of two residue arrays (held as Python ints)."""
    inv = pow(mod_a % mod_b, -1, mod_b)
    out = []
    for a, b in zip(res_a.tolist() if hasattr(res_a, "tolist") else res_a,
                    res_b.tolist() if hasattr(res_b, "tolist") else res_b):
        t = (b - a) % mod_b * inv % mod_b
        out.append(a + mod_a * t)
    return out, mod_a * mod_b


def rational_reconstruct(residue: int, modulus: int) -> Fraction | None:
    """Unique fraction num/den with |num|, den <= sqrt(modulus/2) congruent
    to residue, or None if there is none."""
    bound = math.isqrt(modulus // 2)
    r0, r1 = modulus, residue % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1 * (1 if s1 > 0 else -1), abs(s1))


def reconstruct_vector(residues: Sequence[int], modulus: int) -> list[Fraction] | None:
    out = []
    for r in residues:
        f = rational_reconstruct(r, modulus)
        if f is None:
            return None
        out.append(f)
    return out


def rref_exact(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals, for small systems and
    for cross-checking the modular path."""
    a = [[Fraction(v) for v in row] for row in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        lead = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if lead is None:
            continue
        a[r], a[lead] = a[lead], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def nullspace_exact(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    rref, pivots = rref_exact(rows)
    ncols = len(rows[0]) if rows else 0
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, piv in enumerate(pivots):
            v[piv] = -rref[row][f]
        basis.append(v)
    return basis
