"""Linear recurrences and differential operators with polynomial coefficients.

Normal forms used throughout the package:

* LinearRecurrence: sum_j q_j(n) * f(n+j) = 0 for all n >= start, with
  integer coefficient polynomials, q_order not identically zero, overall
  content 1, and the leading polynomial's leading coefficient positive.
* LinearODE: sum_j a_j(z) * (d/dz)^j annihilating a power series, same
  normalisation.
* MultivariateRecurrence: sum over shift vectors (s_0, s_1..s_k) of
  q_shift(n, x_1..x_k) * f(n+s_0, x+s') = 0, coefficients sparse integer
  polynomials keyed by exponent tuples.

The text exchange format is a header

    # lgf-op kind=<ode|rec|mrec> order=<r> degree=<D>

followed by one line per coefficient polynomial (space-separated decimal
coefficients, ascending power). Multivariate recurrences use one block per
shift vector instead. All orderings are fixed, so dumps are byte-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import polyops as P
from .errors import ValidationError
from .series import ExactSeries


def _nonempty_lines(text: str) -> list[str]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("empty operator text")
    return lines


def _parse_header(line: str, expected_kinds: tuple[str, ...]) -> dict:
    if not line.startswith("# lgf-op"):
        raise ValidationError("missing '# lgf-op' header")
    fields: dict[str, str] = {}
    for part in line.split()[2:]:
        key, _, value = part.partition("=")
        fields[key] = value
    if fields.get("kind") not in expected_kinds:
        raise ValidationError(f"unexpected operator kind {fields.get('kind')!r}")
    return fields


@dataclass(frozen=True)
class LinearRecurrence:
    """sum_j coefficients[j](n) * f(n+j) = 0, valid for every n >= start."""

    coefficients: tuple[tuple[int, ...], ...]
    start: int = 0

    def __post_init__(self):
        coeffs = [P.trim(list(c)) for c in self.coefficients]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if not coeffs:
            raise ValidationError("recurrence has no nonzero coefficient")
        norm = P.primitive_normal(coeffs)
        object.__setattr__(self, "coefficients", tuple(tuple(c) for c in norm))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def degree(self) -> int:
        return max(P.degree(c) for c in self.coefficients)

    def leading(self) -> list[int]:
        return list(self.coefficients[-1])

    def apply_at(self, values: Sequence, n: int):
        """The recurrence combination at instantiation index n."""
        return sum(
            P.peval(c, n) * values[n + j] for j, c in enumerate(self.coefficients)
        )

    def residuals(self, values: Sequence) -> list:
        """Combination at every valid index; all zero iff values satisfy
        the recurrence on the available range."""
        top = len(values) - 1 - self.order
        return [self.apply_at(values, n) for n in range(self.start, top + 1)]

    def dump(self) -> str:
        lines = [f"# lgf-op kind=rec order={self.order} degree={self.degree}"
                 + (f" start={self.start}" if self.start else "")]
        for c in self.coefficients:
            lines.append(" ".join(str(v) for v in c) if c else "0")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "LinearRecurrence":
        lines = _nonempty_lines(text)
        fields = _parse_header(lines[0], ("rec",))
        coeffs = [tuple(int(v) for v in ln.split()) for ln in lines[1:]]
        rec = cls(tuple(coeffs), start=int(fields.get("start", "0")))
        if rec.order != int(fields["order"]):
            raise ValidationError("order in header does not match body")
        return rec

    def __str__(self):
        parts = [
            f"({P.poly_str(c)})*f(n+{j})" if j else f"({P.poly_str(c)})*f(n)"
            for j, c in enumerate(self.coefficients)
            if c
        ]
        return " + ".join(parts).replace("+ -", "- ") + " = 0"


@dataclass(frozen=True)
class LinearODE:
    """sum_j coefficients[j](z) * (d/dz)^j, applied to power series in z."""

    coefficients: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        coeffs = [P.trim(list(c)) for c in self.coefficients]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if not coeffs:
            raise ValidationError("operator has no nonzero coefficient")
        norm = P.primitive_normal(coeffs)
        object.__setattr__(self, "coefficients", tuple(tuple(c) for c in norm))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def degree(self) -> int:
        return max(P.degree(c) for c in self.coefficients)

    def residuals(self, series: ExactSeries) -> list[Fraction]:
        """Coefficients 0..N-order of the image series. The image of an
        annihilated function is identically zero there."""
        c = series.coefficients
        r = self.order
        top = len(c) - 1 - r
        out = []
        for k in range(max(top + 1, 0)):
            acc = Fraction(0)
            for j, a in enumerate(self.coefficients):
                for i, aji in enumerate(a):
                    idx = k + j - i
                    if aji == 0 or idx < 0 or idx > series.order:
                        continue
                    ff = 1
                    for t in range(j):
                        ff *= idx - t
                    acc += aji * ff * c[idx]
            out.append(acc)
        return out

    def annihilates(self, series: ExactSeries) -> bool:
        return all(v == 0 for v in self.residuals(series))

    def dump(self) -> str:
        lines = [f"# lgf-op kind=ode order={self.order} degree={self.degree}"]
        for c in self.coefficients:
            lines.append(" ".join(str(v) for v in c) if c else "0")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "LinearODE":
        lines = _nonempty_lines(text)
        fields = _parse_header(lines[0], ("ode",))
        coeffs = [tuple(int(v) for v in ln.split()) for ln in lines[1:]]
        ode = cls(tuple(coeffs))
        if ode.order != int(fields["order"]):
            raise ValidationError("order in header does not match body")
        return ode

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coefficients):
            if not c:
                continue
            dz = "" if j == 0 else ("*Dz" if j == 1 else f"*Dz^{j}")
            parts.append(f"({P.poly_str(c, 'z')}){dz}")
        return " + ".join(parts).replace("+ -", "- ")


MPoly = Mapping[tuple[int, ...], int]


def mpoly_eval(poly: MPoly, point: Sequence[int]) -> int:
    total = 0
    for exps, coeff in poly.items():
        term = coeff
        for v, e in zip(point, exps):
            if e:
                term *= v**e
        total += term
    return total


@dataclass(frozen=True)
class MultivariateRecurrence:
    """sum over support of coefficient(n, x) * f((n, x) + shift) = 0.

    support[i] is a shift vector (s_0 for n, then s_1..s_k for the space
    coordinates); coefficients[i] maps exponent tuples (e_0..e_k) over
    (n, x_1..x_k) to integers.
    """

    support: tuple[tuple[int, ...], ...]
    coefficients: tuple[MPoly, ...]

    def __post_init__(self):
        if len(self.support) != len(self.coefficients):
            raise ValidationError("support and coefficient counts differ")
        if len(set(self.support)) != len(self.support):
            raise ValidationError("duplicate shift vectors")
        pairs = sorted(zip(self.support, self.coefficients), key=lambda t: t[0])
        support = []
        coeffs = []
        g = 0
        for shift, poly in pairs:
            poly = {e: c for e, c in sorted(poly.items()) if c != 0}
            if not poly:
                continue
            support.append(shift)
            coeffs.append(poly)
            for c in poly.values():
                g = math.gcd(g, c)
        if not support:
            raise ValidationError("recurrence has no nonzero coefficient")
        sign = 1
        first = next(iter(coeffs[0].values()))
        if first < 0:
            sign = -1
        coeffs = [{e: sign * c // g for e, c in poly.items()} for poly in coeffs]
        object.__setattr__(self, "support", tuple(support))
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def arity(self) -> int:
        """Number of space coordinates k."""
        return len(self.support[0]) - 1

    @property
    def order(self) -> int:
        """Largest shift in n."""
        return max(s[0] for s in self.support)

    @property
    def degree(self) -> int:
        return max(sum(e) for poly in self.coefficients for e in poly)

    def term_count(self) -> int:
        return sum(len(p) for p in self.coefficients)

    def apply_at(self, value: Callable[[int, tuple[int, ...]], int],
                 point: Sequence[int]) -> int:
        """Instantiate at point = (n, x_1..x_k); value(n', x') supplies
        table entries."""
        total = 0
        for shift, poly in zip(self.support, self.coefficients):
            coeff = mpoly_eval(poly, point)
            if coeff == 0:
                continue
            n2 = point[0] + shift[0]
            x2 = tuple(p + s for p, s in zip(point[1:], shift[1:]))
            total += coeff * value(n2, x2)
        return total

    def dump(self) -> str:
        lines = [
            f"# lgf-op kind=mrec order={self.order} degree={self.degree}"
        ]
        for shift, poly in zip(self.support, self.coefficients):
            lines.append("shift " + " ".join(str(s) for s in shift))
            for exps, coeff in poly.items():
                lines.append(f"{coeff} " + " ".join(str(e) for e in exps))
            lines.append("end")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "MultivariateRecurrence":
        lines = _nonempty_lines(text)
        _parse_header(lines[0], ("mrec",))
        support: list[tuple[int, ...]] = []
        coeffs: list[dict] = []
        current: dict | None = None
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] == "shift":
                support.append(tuple(int(v) for v in parts[1:]))
                current = {}
                coeffs.append(current)
            elif parts[0] == "end":
                current = None
            else:
                if current is None:
                    raise ValidationError(f"term line outside block: {ln!r}")
                current[tuple(int(v) for v in parts[1:])] = int(parts[0])
        return cls(tuple(support), tuple(coeffs))
