from fractions import Fraction

import pytest

from lgf import (
    ExactSeries,
    LinearODE,
    LinearRecurrence,
    MultivariateRecurrence,
    ValidationError,
)


def test_recurrence_normalisation():
    # content is divided out, leading sign fixed positive
    rec = LinearRecurrence(((-2, -2), (0,), (4, 2)))
    assert rec.coefficients == ((-1, -1), (), (2, 1))
    assert rec.order == 2
    assert rec.degree == 1


def test_recurrence_drops_zero_leading_blocks():
    rec = LinearRecurrence(((1,), (1,), (0,)))
    assert rec.order == 1


def test_recurrence_requires_something():
    with pytest.raises(ValidationError):
        LinearRecurrence(((0,), (0, 0)))


def test_recurrence_residuals():
    # f(n+1) = (n+1) f(n) annihilates factorials
    rec = LinearRecurrence(((1, 1), (-1,)))
    facts = [1, 1, 2, 6, 24, 120, 720]
    assert all(v == 0 for v in rec.residuals(facts))
    assert any(v != 0 for v in rec.residuals([1, 1, 2, 6, 25, 120, 720]))


def test_recurrence_apply_at_respects_start():
    rec = LinearRecurrence(((1,), (-1,)), start=2)
    values = [5, 7, 3, 3, 3]
    assert rec.residuals(values) == [0, 0]  # only n=2,3 instantiated


def test_ode_residuals_on_geometric_series():
    # (1-z) P' - P = 0 for P = 1/(1-z)
    ode = LinearODE(((-1,), (1, -1)))
    geo = ExactSeries([1] * 12)
    assert ode.annihilates(geo)
    assert not ode.annihilates(ExactSeries([1, 1, 2, 1, 1]))


def test_ode_residual_values():
    # d/dz on exp: P' - P = 0
    ode = LinearODE(((-1,), (1,)))
    exp = ExactSeries([Fraction(1, 1)] + [Fraction(0)] * 9)
    coeffs = [Fraction(1)]
    for n in range(1, 10):
        coeffs.append(coeffs[-1] / n)
    assert ode.annihilates(ExactSeries(coeffs))


def test_dump_parse_round_trip():
    rec = LinearRecurrence(((1, 2), (0, 0, 3), (5,)), start=1)
    assert LinearRecurrence.parse(rec.dump()) == rec
    ode = LinearODE(((0, 1), (-1, 0, 3), (0, -1, 0, 1)))
    assert LinearODE.parse(ode.dump()) == ode
    assert ode.dump() == LinearODE.parse(ode.dump()).dump()


def test_parse_rejects_bad_header():
    with pytest.raises(ValidationError):
        LinearODE.parse("")
    with pytest.raises(ValidationError):
        LinearODE.parse("# lgf-op kind=rec order=1 degree=0\n1\n1\n")
    with pytest.raises(ValidationError):
        LinearODE.parse("# lgf-op kind=ode order=3 degree=0\n1\n1\n")


def test_multivariate_apply_at():
    # f(n+1, x) - f(n, x-1) - f(n, x+1) = 0: Pascal on a line
    rec = MultivariateRecurrence(
        ((0, 0), (0, 2), (1, 1)),
        ({(0, 0): 1}, {(0, 0): 1}, {(0, 0): -1}),
    )
    import math

    def value(n, x):
        k = (n + x[0]) // 2
        if abs(x[0]) > n or (n + x[0]) % 2:
            return 0
        return math.comb(n, k)

    for n in range(1, 8):
        for x in range(-n - 1, n + 1):
            assert rec.apply_at(value, (n, x - 1)) == 0


def test_multivariate_normalisation_and_round_trip():
    rec = MultivariateRecurrence(
        ((1, 0), (0, 1)),
        ({(0, 0): -2, (1, 0): -4}, {(0, 1): 2}),
    )
    # content 2 removed, first coefficient made positive
    assert rec.coefficients[0] == {(0, 0): 1, (1, 0): 2}
    assert MultivariateRecurrence.parse(rec.dump()).dump() == rec.dump()


def test_multivariate_validation():
    with pytest.raises(ValidationError):
        MultivariateRecurrence(((0, 0), (0, 0)), ({(0, 0): 1}, {(0, 0): 1}))
    with pytest.raises(ValidationError):
        MultivariateRecurrence(((0, 0),), ({(0, 0): 0},))
