from fractions import Fraction

import lgf.polyops as P


def test_trim_and_zero():
    assert P.trim([1, 2, 0, 0]) == [1, 2]
    assert P.trim([0, 0]) == []
    assert P.is_zero([])
    assert P.degree([]) == -1
    assert P.degree([5]) == 0


def test_arithmetic_identities():
    a = [1, -3, 2]
    b = [0, 4]
    assert P.padd(a, P.pneg(a)) == []
    assert P.psub(P.padd(a, b), b) == a
    assert P.pmul(a, b) == P.pmul(b, a)
    # (1 - 3n + 2n^2) * 4n = 4n - 12n^2 + 8n^3
    assert P.pmul(a, b) == [0, 4, -12, 8]
    assert P.pscale(a, 0) == []


def test_eval_and_shift():
    p = [2, 0, 1]  # n^2 + 2
    assert P.peval(p, 5) == 27
    q = P.pshift(p, 3)  # (n+3)^2 + 2
    for n in range(-4, 5):
        assert P.peval(q, n) == P.peval(p, n + 3)


def test_deriv():
    assert P.pderiv([7, 3, 0, 5]) == [3, 0, 15]
    assert P.pderiv([4]) == []


def test_falling_factorial_poly():
    # (n)(n-1)(n-2) at shift 0, length 3
    p = P.falling_factorial_poly(0, 3)
    for n in range(6):
        assert P.peval(p, n) == n * (n - 1) * (n - 2)
    assert P.falling_factorial_poly(2, 0) == [1]
    # (n+2)(n+1) at shift 2, length 2
    q = P.falling_factorial_poly(2, 2)
    for n in range(6):
        assert P.peval(q, n) == (n + 2) * (n + 1)


def test_content_and_primitive_normal():
    assert P.content([6, -9, 12]) == 3
    assert P.content([]) == 0
    polys = P.primitive_normal([[2, 4], [0, -6]])
    assert polys == [[-1, -2], [0, 3]]  # sign fixed by last nonzero leading


def test_clear_denominators():
    out = P.clear_denominators([[Fraction(1, 2), Fraction(1, 3)], [Fraction(5, 6)]])
    assert out == [[3, 2], [5]]


def test_poly_str():
    assert P.poly_str([1, -1, 2]) == "1 - n + 2*n^2"
    assert P.poly_str([]) == "0"
    assert P.poly_str([0, 0, 1], "z") == "z^2"
