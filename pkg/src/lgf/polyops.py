"""Dense univariate polynomials as coefficient lists, ascending power.

The zero polynomial is the empty list; no trailing zeros are stored.
Coefficients are Python ints or Fractions; operations never convert between
the two behind the caller's back.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Poly = list


def trim(p: Sequence) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    """Degree, with the zero polynomial at -1."""
    return len(p) - 1


def is_zero(p: Sequence) -> bool:
    return not p


def padd(a: Sequence, b: Sequence) -> Poly:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def pneg(a: Sequence) -> Poly:
    return [-c for c in a]


def psub(a: Sequence, b: Sequence) -> Poly:
    return padd(a, pneg(b))


def pscale(a: Sequence, k) -> Poly:
    if k == 0:
        return []
    return trim([c * k for c in a])


def pmul(a: Sequence, b: Sequence) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return trim(out)


def peval(p: Sequence, x):
    """Horner evaluation; result type follows coefficient and point types."""
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pshift(p: Sequence, k: int) -> Poly:
    """Compose with a translated argument: returns q with q(n) = p(n + k)."""
    out: Poly = []
    for c in reversed(p):
        out = padd(pmul(out, [k, 1]), [c])
    return out


def pderiv(p: Sequence) -> Poly:
    return trim([i * c for i, c in enumerate(p)][1:])


def content(p: Sequence) -> int:
    """Positive gcd of integer coefficients; 0 for the zero polynomial."""
    g = 0
    for c in p:
        g = math.gcd(g, int(c))
    return g


def falling_factorial_poly(shift: int, length: int) -> Poly:
    """Polynomial in n equal to (n+shift)*(n+shift-1)*...*(n+shift-length+1).

    length = 0 gives the constant 1.
    """
    out: Poly = [1]
    for t in range(length):
        out = pmul(out, [shift - t, 1])
    return out


def clear_denominators(polys: Sequence[Sequence[Fraction]]) -> list[Poly]:
    """Scale a list of rational polynomials by the common denominator,
    returning integer polynomials."""
    lcm = 1
    for p in polys:
        for c in p:
            c = Fraction(c)
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return [trim([int(Fraction(c) * lcm) for c in p]) for p in polys]


def primitive_normal(polys: Sequence[Sequence[int]]) -> list[Poly]:
    """Divide a polynomial vector by its overall content and fix the sign so
    that the last nonzero polynomial has a positive leading coefficient."""
    g = 0
    for p in polys:
        g = math.gcd(g, content(p))
    if g == 0:
        return [list(p) for p in polys]
    out = [[c // g for c in trim(p)] for p in polys]
    for p in reversed(out):
        if p:
            if p[-1] < 0:
                out = [pneg(q) for q in out]
            break
    return out


def poly_str(p: Sequence, var: str = "n") -> str:
    if not p:
        return "0"
    parts = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mon = var if i == 1 else f"{var}^{i}"
            if c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append(f"-{mon}")
            else:
                parts.append(f"{c}*{mon}")
    return " + ".join(parts).replace("+ -", "- ")
