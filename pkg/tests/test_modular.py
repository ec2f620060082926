import random
from fractions import Fraction

import numpy as np
import pytest

from lgf.modular import (
    crt_combine,
    fraction_mod,
    nullspace_exact,
    nullspace_mod,
    rational_reconstruct,
    reconstruct_vector,
    rref_exact,
    rref_mod,
    word_primes,
)


def test_word_primes_are_prime_and_descending():
    from sympy import isprime

    ps = word_primes(5)
    assert len(ps) == 5
    assert all(isprime(p) for p in ps)
    assert all(a > b for a, b in zip(ps, ps[1:]))
    assert all(p < 3_000_000_000 for p in ps)
    # cache returns a stable prefix
    assert word_primes(3) == ps[:3]


def test_fraction_mod_inverts():
    p = word_primes(1)[0]
    f = Fraction(-22, 7)
    r = fraction_mod(f, p)
    assert r * 7 % p == (-22) % p
    with pytest.raises(ZeroDivisionError):
        fraction_mod(Fraction(1, p), p)


def test_rref_mod_identity_and_rank():
    p = 1009
    a = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    rref, pivots = rref_mod(a, p)
    assert pivots == [0, 1]
    # pivot columns carry the identity
    assert rref[0, 0] == 1 and rref[1, 1] == 1 and rref[0, 1] == 0


def test_nullspace_mod_annihilates():
    p = word_primes(1)[0]
    rng = random.Random(7)
    a = np.array([[rng.randrange(-9, 10) for _ in range(6)] for _ in range(4)])
    basis, _ = nullspace_mod(a, p)
    for v in basis:
        assert all(int(x) % p == 0 for x in (a @ v.astype(object)))


def test_nullspace_matches_exact():
    rows = [
        [Fraction(1), Fraction(2), Fraction(1), Fraction(0)],
        [Fraction(0), Fraction(1), Fraction(1), Fraction(1)],
    ]
    exact = nullspace_exact(rows)
    p = 10007
    modular, _ = nullspace_mod(
        np.array([[int(v) for v in row] for row in rows]), p
    )
    assert len(exact) == len(modular) == 2
    for ev, mv in zip(exact, modular):
        for e, m in zip(ev, mv):
            assert fraction_mod(e, p) == int(m) % p


def test_crt_and_reconstruction_round_trip():
    p1, p2, p3 = word_primes(3)
    target = [Fraction(-355, 113), Fraction(22, 7), Fraction(0), Fraction(41)]
    res, mod = [fraction_mod(t, p1) for t in target], p1
    for p in (p2, p3):
        res, mod = crt_combine(res, mod, [fraction_mod(t, p) for t in target], p)
    assert reconstruct_vector(res, mod) == target


def test_reconstruction_fails_cleanly_when_modulus_too_small():
    # numerator far beyond sqrt(p/2) for a single small prime
    p = 101
    assert rational_reconstruct(fraction_mod(Fraction(12345, 67), p), p) != Fraction(12345, 67)


def test_rref_exact_solves():
    rows = [
        [Fraction(2), Fraction(1), Fraction(5)],
        [Fraction(1), Fraction(-1), Fraction(1)],
    ]
    rref, pivots = rref_exact(rows)
    assert pivots == [0, 1]
    # x = 2, y = 1
    assert rref[0][2] == 2 and rref[1][2] == 1
