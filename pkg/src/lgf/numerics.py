"""High-precision limits of recurrence sequences.

The value of interest, P(1), is the limit of the partial sums f(n) of the
return-probability series. The route here is: run the recurrence for f
forward exactly, convert the tail to arbitrary-precision floats once, fit
a truncated asymptotic expansion

    f(n) = c_0 + c_1 / n^h + c_2 / n^(2h) + ... + c_K / n^(Kh)

through K+1 sample points, and read off c_0. The exponent step h is 1 when
the coefficient sequence decays like n^(-d/2) with d even and 1/2 with d
odd. Exponentially decaying solution modes of the recurrence are not
fitted; taking n in the thousands pushes them far below the target
accuracy.

Accuracy is handled by protocol rather than interval arithmetic: every
limit is computed at two working precisions 64 bits apart and must agree
to the requested width, and the fit is repeated on a second window shifted
down by 10%, whose deviation becomes the reported error estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import polyops as P
from .errors import (
    PrecisionLossError,
    SingularPointError,
    ValidationError,
)
from .operators import LinearRecurrence

GUARD_BITS = 64


@dataclass(frozen=True)
class BigFloat:
    """An arbitrary-precision float together with the working precision
    (in bits) it was computed at."""

    value: mpmath.mpf
    precision: int
    note: str | None = field(default=None, compare=False)

    def digits(self, places: int) -> str:
        """Decimal string with the given number of fractional places,
        truncated (not rounded), so prefixes are comparable."""
        if places < 0:
            raise ValidationError(f"places must be nonnegative, got {places}")
        with mpmath.workprec(self.precision + GUARD_BITS):
            text = mpmath.nstr(
                self.value,
                places + 8,
                strip_zeros=False,
                min_fixed=-mpmath.inf,
                max_fixed=mpmath.inf,
            )
        if "." not in text:
            text += "."
        head, tail = text.split(".")
        tail = (tail + "0" * places)[:places]
        return f"{head}.{tail}"

    def __float__(self) -> float:
        return float(self.value)


def common_digits(a: BigFloat, b: BigFloat) -> str:
    """Longest common decimal prefix of the two values: the digits that
    survive a change of working precision."""
    places = min(a.precision, b.precision) // 3  # < log2(10) digits per bit
    sa, sb = a.digits(places), b.digits(places)
    out = []
    for ca, cb in zip(sa, sb):
        if ca != cb:
            break
        out.append(ca)
    return "".join(out).rstrip(".")


def extend_sequence(
    rec: LinearRecurrence,
    initials: Sequence[Fraction],
    n_top: int,
    mode: str = "exact",
    precision: int = 256,
) -> list:
    """Values f(0..n_top) from the recurrence and its initial segment.

    The recurrence constrains indices from rec.start on, so the initial
    segment must cover 0..order+start-1. Exact mode returns Fractions;
    bigfloat mode iterates mpmath floats at the given precision.
    """
    needed = rec.order + rec.start
    if len(initials) != needed:
        raise ValidationError(
            f"recurrence of order {rec.order} starting at n={rec.start} "
            f"needs {needed} initial values, got {len(initials)}"
        )
    if mode not in ("exact", "bigfloat"):
        raise ValidationError(f"unknown mode {mode!r}")
    if n_top < needed - 1:
        return [Fraction(v) for v in initials][: n_top + 1]

    lead = rec.leading()
    lower = rec.coefficients[:-1]
    if mode == "exact":
        values = [Fraction(v) for v in initials]
        for m in range(needed, n_top + 1):
            n = m - rec.order
            q = P.peval(lead, n)
            if q == 0:
                raise SingularPointError(n)
            acc = Fraction(0)
            for j, poly in enumerate(lower):
                c = P.peval(poly, n)
                if c:
                    acc += c * values[n + j]
            values.append(-acc / q)
        return values

    with mpmath.workprec(precision):
        values_f = [_to_mpf(v) for v in initials]
        for m in range(needed, n_top + 1):
            n = m - rec.order
            q = P.peval(lead, n)
            if q == 0:
                raise SingularPointError(n)
            acc = mpmath.mpf(0)
            for j, poly in enumerate(lower):
                c = P.peval(poly, n)
                if c:
                    acc += c * values_f[n + j]
            values_f.append(-acc / q)
    return [BigFloat(v, precision) for v in values_f]


def _to_mpf(v):
    if isinstance(v, BigFloat):
        return v.value
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


@dataclass(frozen=True)
class ExtrapolationModel:
    """Fit c_0 + c_1/n^h + ... + c_K/n^(Kh) through the window samples.

    window holds the K+1 sample indices n_i; step is the exponent
    increment h (1 for even-dimension tails, 1/2 for odd)."""

    order: int
    window: tuple[int, ...]
    step: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "window", tuple(int(n) for n in self.window))
        object.__setattr__(self, "step", Fraction(self.step))
        if self.order < 0:
            raise ValidationError(f"model order must be nonnegative, got {self.order}")
        if len(self.window) != self.order + 1:
            raise ValidationError(
                f"window has {len(self.window)} samples, model order "
                f"{self.order} needs {self.order + 1}"
            )
        if len(set(self.window)) != len(self.window):
            raise ValidationError("window indices must be distinct")
        if min(self.window) < 1:
            raise ValidationError("window indices must be positive")
        if self.step <= 0:
            raise ValidationError("exponent step must be positive")

    def shifted(self, delta: int) -> "ExtrapolationModel":
        return ExtrapolationModel(
            self.order, tuple(n - delta for n in self.window), self.step
        )


def default_window(n_top: int, order: int, stride: int | None = None) -> tuple[int, ...]:
    """K+1 indices ending at n_top, equally spaced going down."""
    if stride is None:
        stride = max(n_top // (4 * (order + 1)), 1)
    window = tuple(n_top - stride * i for i in range(order + 1))
    if window[-1] < 1:
        raise ValidationError(
            f"window walks below 1: n_top={n_top}, order={order}, stride={stride}"
        )
    return window


@dataclass(frozen=True)
class LimitEstimate:
    """A limit value together with the deviation observed when the fit
    window is moved: |c_0(window) - c_0(shifted window)|."""

    value: BigFloat
    error: mpmath.mpf
    model: ExtrapolationModel

    @property
    def decimal_places(self) -> int:
        """Number of fractional decimal places certified by the window
        deviation (error < 10^-places)."""
        if self.error == 0:
            return self.value.precision // 4
        with mpmath.workprec(64):
            places = int(mpmath.floor(-mpmath.log10(self.error))) - 1
        return max(places, 0)

    def digits(self, places: int | None = None) -> str:
        if places is None:
            places = self.decimal_places
        return self.value.digits(places)


def _fit_constant(values, model: ExtrapolationModel, working: int):
    """Solve the (K+1) x (K+1) interpolation system at the given working
    precision and return the constant term c_0."""
    k = model.order
    with mpmath.workprec(working):
        h = mpmath.mpf(model.step.numerator) / model.step.denominator
        rows = []
        rhs = []
        for n in model.window:
            base = mpmath.power(n, -h)
            rows.append([base**j for j in range(k + 1)])
            rhs.append(_to_mpf(values[n]))
        try:
            sol = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
        except (ZeroDivisionError, ValueError) as exc:
            raise PrecisionLossError(
                f"extrapolation system is singular at {working} bits: {exc}"
            )
        return sol[0]


def extrapolate_limit(
    values: Sequence,
    model: ExtrapolationModel,
    precision: int = 256,
) -> LimitEstimate:
    """Limit c_0 of the fitted expansion, computed at two working
    precisions that must agree to the requested width, with an error
    estimate from a 10% window shift."""
    if max(model.window) >= len(values):
        raise ValidationError(
            f"window reaches n={max(model.window)} but only "
            f"{len(values)} values are supplied"
        )
    for n in (model.window[0], model.window[-1]):
        v = values[n]
        if isinstance(v, BigFloat) and v.precision < precision:
            raise ValidationError(
                f"values carry {v.precision} bits, below the requested {precision}"
            )

    # the interpolation matrix is badly conditioned, so a fixed guard is
    # not enough: raise the working precision until two runs 64 bits
    # apart agree to the requested width
    working = precision + GUARD_BITS
    for _ in range(4):
        c0 = _fit_constant(values, model, working)
        c0_check = _fit_constant(values, model, working + GUARD_BITS)
        with mpmath.workprec(working):
            drift = abs(c0 - c0_check)
            scale = max(abs(c0), mpmath.mpf(1))
            if drift <= scale * mpmath.mpf(2) ** (-precision):
                break
            deficit = precision + int(mpmath.log(drift / scale, 2))
        working += max(deficit, 0) + 2 * GUARD_BITS
    else:
        raise PrecisionLossError(
            f"fit of order {model.order} unstable: runs 64 bits apart "
            f"still differ by {mpmath.nstr(drift, 5)} at {working} bits"
        )

    delta = max(max(model.window) // 10, 1)
    if min(model.window) - delta < 1:
        delta = min(model.window) - 1
    if delta <= 0:
        raise ValidationError("window too close to n=0 for a shifted cross-check")
    c0_shift = _fit_constant(values, model.shifted(delta), working)
    with mpmath.workprec(working):
        error = abs(c0 - c0_shift)
    return LimitEstimate(BigFloat(c0, working), error, model)


def return_probability(p1: BigFloat | None, divergent: bool = False) -> BigFloat:
    """R = 1 - 1/P(1); a walk returns unless the Green's function stays
    finite. A detected-divergent P(1) means certain return, R = 1."""
    if divergent:
        return BigFloat(mpmath.mpf(1), p1.precision if p1 else 64, note="divergent")
    if p1.value < 1:
        raise ValidationError(
            f"P(1) = {mpmath.nstr(p1.value, 8)} < 1 is impossible for a "
            "return-probability series"
        )
    with mpmath.workprec(p1.precision):
        return BigFloat(1 - 1 / p1.value, p1.precision)


def detect_divergence(
    partial_sums: Sequence,
    bound: float = 100.0,
    ratio_threshold: float = 0.85,
) -> bool:
    """Heuristic divergence test on a tail of partial sums.

    Convergent tails have block increments f(N)-f(N/2) shrinking by a
    definite factor each doubling (the increments decay like n^(-d/2)
    with d >= 3); logarithmic growth keeps the ratio near 1. A sequence
    past the hard bound is divergent outright.
    """
    if len(partial_sums) < 8:
        raise ValidationError("divergence test needs at least 8 partial sums")
    top = len(partial_sums) - 1
    f = lambda n: float(_to_mpf(partial_sums[n]))
    if f(top) > bound:
        return True
    a = f(top) - f(top // 2)
    b = f(top // 2) - f(top // 4)
    if b <= 0:
        return False
    return a / b >= ratio_threshold
