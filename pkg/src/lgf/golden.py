"""Embedded reference objects for the fcc lattice family.

Everything here is data: verified annihilating operators for the 2D, 4D,
and 5D lattice Green's functions, the order-6 partial-sum recurrence and
its initial values for 4D, the 2D creative-telescoping certificates with
their cofactor decomposition, one of the multivariate recurrences for the
5D slice sequence, indicial targets, and high-precision digit strings for
P(1) and the return probability R per dimension.

Constructors return fresh objects so callers may normalize or mutate
without affecting the module. All operators pass their own type's
validation; the test suite re-derives each one's defining property
(annihilation, residual zero, certificate identity) from scratch.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce

from . import polyops as P
from .operators import LinearODE, LinearRecurrence, MultivariateRecurrence
from .ore import IntegrandSpec, OreContext, OrePolynomial


def _prod(*polys):
    return reduce(P.pmul, [list(p) for p in polys])


def _zpow(k):
    return [0] * k + [1]


def ode_2d() -> LinearODE:
    """z(z^2-1) P'' + (3z^2-1) P' + z P."""
    return LinearODE(((0, 1), (-1, 0, 3), (0, -1, 0, 1)))


def fcc4_ode() -> LinearODE:
    """Order-4 annihilator of the 4D fcc lattice Green's function."""
    a4 = _prod([-1, 1], [2, 1], [3, 1], [6, 1], [8, 1], [4, 3], [4, 3], _zpow(3))
    a3 = P.pscale(
        _prod([4, 3], [-3456, -2304, 3676, 4920, 2079, 356, 21], _zpow(2)), 2
    )
    a2 = P.pscale(
        _prod([-5376, -5248, 11080, 25286, 19898, 7432, 1286, 81], _zpow(1)), 6
    )
    a1 = P.pscale([-384, 224, 3716, 7633, 6734, 2939, 604, 45], 12)
    a0 = P.pscale(_prod([256, 632, 702, 382, 98, 9], _zpow(1)), 12)
    return LinearODE(tuple(tuple(a) for a in (a0, a1, a2, a3, a4)))


def fcc4_partial_sum_recurrence() -> LinearRecurrence:
    """Order-6 recurrence for the partial sums f(n) of the 4D return
    probabilities p_n(0)."""
    q0 = _prod([2, 1], [3, 1], [3, 1], [4, 1], [1252, 420, 35])
    q1 = _prod([3, 1], [4, 1], [276024, 244384, 79874, 11375, 595])
    q2 = P.pscale(
        _prod([4, 1], [2638272, 2769392, 1156976, 240253, 24780, 1015]), 3
    )
    q3 = [71984160, 83134488, 39767416, 10080600, 1427695, 107100, 3325]
    q4 = P.pscale(
        [33590844, 40139838, 19973086, 5295615, 788848, 62580, 2065], -4
    )
    q5 = P.pscale(
        [24690708, 26259960, 11601091, 2725632, 359282, 25200, 735], -12
    )
    q6 = P.pscale(_prod([867, 350, 35], [6, 1], [6, 1], [6, 1], [6, 1]), 288)
    return LinearRecurrence(
        tuple(tuple(q) for q in (q0, q1, q2, q3, q4, q5, q6))
    )


def fcc4_partial_sum_initials() -> list[Fraction]:
    return [
        Fraction(1),
        Fraction(1),
        Fraction(25, 24),
        Fraction(19, 18),
        Fraction(1637, 1536),
        Fraction(549, 512),
    ]


def fcc5_ode() -> LinearODE:
    """Order-6 annihilator of the 5D fcc lattice Green's function."""
    a6 = P.pscale(
        _prod(
            [-5, 1], [-1, 1], [5, 1], [5, 1], [10, 1], [15, 1], [5, 3],
            [-675000, 3465000, -1053375, 933650, 449735, 144776, 15678],
            _zpow(4),
        ),
        16,
    )
    a5 = P.pscale(
        _prod(
            [5, 1],
            [
                -354375000000, 1774828125000, -503550000000, -1289447109375,
                254876515625, -266627903125, -304623830625, -87265479875,
                -4878146975, 3939663705, 1048560285, 97471734, 3057210,
            ],
            _zpow(3),
        ),
        8,
    )
    a4 = P.pscale(
        _prod(
            [
                -5568750000000, 23905125000000, 3393646875000, -39702348750000,
                -7716298734375, -3779011321875, -7801785421250, -3351125770500,
                -382134335775, 148313757125, 68439921540, 11725276842,
                923795772, 27279720,
            ],
            _zpow(2),
        ),
        10,
    )
    a3 = P.pscale(
        _prod(
            [
                -13162500000000, 45343125000000, 40530375000000,
                -190176960000000, -77498059625000, -3649915059375,
                -26918293320000, -13545524756500, -465440555100,
                1350059072325, 524857986060, 92744995638, 7892060544,
                255864960,
            ],
            _zpow(1),
        ),
        5,
    )
    a2 = P.pscale(
        [
            -3240000000000, 5055750000000, 44457862500000, -133825053750000,
            -110925736437500, 13367806743750, -6199228765625, -8282515456375,
            1646226060075, 2287368823475, 810956145330, 149186684934,
            13819981248, 496679040,
        ],
        5,
    )
    a1 = P.pscale(
        [
            -189000000000, 4816462500000, -7268326875000, -21210430812500,
            2664478321875, 3711617481250, -135661728250, 689643286650,
            607021304825, 209673119160, 40678130502, 4143853440, 167064768,
        ],
        10,
    )
    a0 = P.pscale(
        [
            27000000000, 84037500000, -346865625000, -55567000000,
            187923165625, 36477006875, 21336230625, 19123388575, 6925739310,
            1443544710, 163913184, 7525440,
        ],
        30,
    )
    return LinearODE(tuple(tuple(a) for a in (a0, a1, a2, a3, a4, a5, a6)))


def indicial_target(dimension: int) -> tuple[int, ...]:
    """Expected indicial polynomial at z=0, ascending coefficients:
    4D -> lam^4; 5D -> lam^5 (lam - 1); 6D -> lam^6 (lam - 1)^2."""
    if dimension == 4:
        return (0, 0, 0, 0, 1)
    if dimension == 5:
        return (0, 0, 0, 0, 0, -1, 1)
    if dimension == 6:
        return (0, 0, 0, 0, 0, 0, 1, -2, 1)
    raise KeyError(dimension)


P1_DIGITS = {
    4: "1.10584379792120476018299547088585107443954623663875285836499",
    5: "1.04885235135491485162956376369999275945402550465206640313845",
    6: "1.02774910062749883985936367927396850209243990900114872425172",
}

R_DIGITS = {
    4: "0.09571315417256289673531676490121018570070881963801735768774",
    5: "0.04657695746384802419337442059480329107640239774632112930532",
    6: "0.02699987828795612426936417542619638021612262676239501413843",
}

RETURN_PROBABILITY_TABLE = {
    2: "1",
    3: "0.256318236504649",
    4: "0.095713154172563",
    5: "0.046576957463848",
    6: "0.026999878287956",
}


def integrand_2d() -> IntegrandSpec:
    return IntegrandSpec(2)


def _ctx2_ops():
    ctx = OreContext(2)
    x1, x2, z = ctx.gens
    return ctx, x1, x2, z


def annihilators_2d() -> list[OrePolynomial]:
    """First-order operators in z, x2, x1 that annihilate the 2D integrand."""
    ctx, x1, x2, z = _ctx2_ops()
    zero = ctx.zero_exp()
    g1 = OrePolynomial(ctx, {(0, 0, 1): x1 * x2 * z - 1, zero: x1 * x2})
    g2 = OrePolynomial(
        ctx,
        {
            (0, 1, 0): (x2**2 - 1) * (x1 * x2 * z - 1),
            zero: 2 * x1 * x2**2 * z - x1 * z - x2,
        },
    )
    g3 = OrePolynomial(
        ctx,
        {
            (1, 0, 0): (x1**2 - 1) * (x1 * x2 * z - 1),
            zero: 2 * x1**2 * x2 * z - x1 - x2 * z,
        },
    )
    return [g1, g2, g3]


def certificate_2d():
    """Telescoper and delta parts certifying the 2D operator in one step:
    (A + Dx1 B1 + Dx2 B2)(f) = 0."""
    ctx, x1, x2, z = _ctx2_ops()
    zero = ctx.zero_exp()
    one = ctx.field.one
    tele = OrePolynomial(
        ctx,
        {
            (0, 0, 2): z * (z**2 - 1) * one,
            (0, 0, 1): (3 * z**2 - 1) * one,
            zero: z * one,
        },
    )
    b1 = OrePolynomial(ctx, {zero: (x2 - x1**2 * x2) / (x1 * x2 * z - 1)})
    b2 = OrePolynomial(ctx, {zero: (x2 * z - x2**3 * z) / (x1 * x2 * z - 1)})
    return tele, [("x1", b1), ("x2", b2)]


def certificate_2d_stage_dz():
    """First-stage certificate eliminating x1: the z-direction operator."""
    ctx, x1, x2, z = _ctx2_ops()
    zero = ctx.zero_exp()
    tele = OrePolynomial(
        ctx, {(0, 0, 1): x2**2 * z**2 - 1, zero: x2**2 * z}
    )
    delta = OrePolynomial(ctx, {zero: (x1**2 - 1) * x2})
    return tele, [("x1", delta)]


def certificate_2d_stage_dx2():
    """First-stage certificate eliminating x1: the x2-direction operator."""
    ctx, x1, x2, z = _ctx2_ops()
    zero = ctx.zero_exp()
    tele = OrePolynomial(
        ctx,
        {
            (0, 1, 0): (x2**2 - 1) * (x2**2 * z**2 - 1),
            zero: x2 * (2 * x2**2 * z**2 - z**2 - 1),
        },
    )
    delta = OrePolynomial(ctx, {zero: (x1**2 - 1) * (x2**2 - 1) * z})
    return tele, [("x1", delta)]


def cofactor_identity_2d():
    """The pair (C1, C23) with C1*G1 + C23*(z*G2 + G3) equal to the full
    telescoping operator A + Dx1 B1 + Dx2 B2."""
    ctx, x1, x2, z = _ctx2_ops()
    zero = ctx.zero_exp()
    den = x1 * x2 * z - 1
    c1 = OrePolynomial(
        ctx,
        {
            (0, 0, 1): z * (z**2 - 1) / den,
            zero: (x1 * x2 * z * (z**2 + 1) - 3 * z**2 + 1) / den**2,
        },
    )
    c23 = OrePolynomial(ctx, {zero: -x2 / den**2})
    return c1, c23


def slice_recurrence_5d() -> MultivariateRecurrence:
    """A recurrence for the 5D slice sequence b_n(x1,x2,x3) =
    a_n(x1,x2,x3,0,0), with the property that every coefficient of an
    (n+1)-shifted term vanishes somewhere near the origin."""
    n_plus_1 = {(0, 0, 0, 0): 1, (1, 0, 0, 0): 1}

    def x_plus_2(i):
        e = [0, 0, 0, 0]
        e[i] = 1
        return {(0, 0, 0, 0): 2, tuple(e): 1}

    terms = [
        ((0, 0, 3, 1), 1, n_plus_1),
        ((0, 0, 1, 3), -1, n_plus_1),
        ((0, 1, 0, 3), 1, n_plus_1),
        ((0, 1, 3, 0), -1, n_plus_1),
        ((0, 1, 3, 4), 1, n_plus_1),
        ((0, 1, 4, 3), -1, n_plus_1),
        ((0, 3, 0, 1), -1, n_plus_1),
        ((0, 3, 1, 0), 1, n_plus_1),
        ((0, 3, 1, 4), -1, n_plus_1),
        ((0, 3, 4, 1), 1, n_plus_1),
        ((0, 4, 1, 3), 1, n_plus_1),
        ((0, 4, 3, 1), -1, n_plus_1),
        ((1, 1, 2, 3), 1, x_plus_2(2)),
        ((1, 1, 3, 2), -1, x_plus_2(3)),
        ((1, 2, 1, 3), -1, x_plus_2(1)),
        ((1, 2, 3, 1), 1, x_plus_2(1)),
        ((1, 3, 1, 2), 1, x_plus_2(3)),
        ((1, 3, 2, 1), -1, x_plus_2(2)),
    ]
    support = tuple(shift for shift, _, _ in terms)
    coefficients = tuple(
        {exp: sign * c for exp, c in poly.items()} for _, sign, poly in terms
    )
    return MultivariateRecurrence(support, coefficients)
