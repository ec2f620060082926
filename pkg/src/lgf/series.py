"""Exact power series with rational coefficients, plus the text dump format.

A sequence dump is a header line

    # lgf-seq d=<d> c=<c> N=<N>

followed by one coefficient per line, written as a decimal integer when the
denominator is 1 and as num/den otherwise. The format is deterministic, so
identical inputs produce byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError


@dataclass
class ExactSeries:
    """Truncated power series sum_{n<=N} coefficients[n] * var^n."""

    coefficients: list[Fraction]
    variable: str = "z"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coefficients = [Fraction(c) for c in self.coefficients]

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, n: int) -> Fraction:
        return self.coefficients[n]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactSeries)
            and self.coefficients == other.coefficients
            and self.variable == other.variable
        )

    @property
    def order(self) -> int:
        """Largest represented exponent."""
        return len(self.coefficients) - 1

    def truncate(self, n: int) -> "ExactSeries":
        return ExactSeries(self.coefficients[: n + 1], self.variable, dict(self.meta))

    def partial_sums(self) -> "ExactSeries":
        """Series of partial sums f(n) = sum_{k<=n} c_k, i.e. the Cauchy
        product with 1/(1-var)."""
        out: list[Fraction] = []
        acc = Fraction(0)
        for c in self.coefficients:
            acc += c
            out.append(acc)
        return ExactSeries(out, self.variable, dict(self.meta))


def check_excursion_series(series: ExactSeries, coordination: int) -> None:
    """A return-probability series must have c^n * p_n a nonnegative integer."""
    scale = 1
    for n, c in enumerate(series.coefficients):
        v = c * scale
        if v.denominator != 1 or v < 0:
            raise ValidationError(
                f"coefficient {n} = {c} is not a count divided by {coordination}^{n}"
            )
        scale *= coordination


def _format_fraction(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def dump_series(series: ExactSeries, dimension: int, coordination: int) -> str:
    lines = [f"# lgf-seq d={dimension} c={coordination} N={series.order}"]
    lines.extend(_format_fraction(c) for c in series.coefficients)
    return "\n".join(lines) + "\n"


def parse_series(text: str) -> tuple[ExactSeries, dict]:
    """Inverse of dump_series. Returns the series and the header fields."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# lgf-seq"):
        raise ValidationError("missing '# lgf-seq' header")
    header: dict[str, int] = {}
    for part in lines[0].split()[2:]:
        key, _, value = part.partition("=")
        try:
            header[key] = int(value)
        except ValueError as exc:
            raise ValidationError(f"bad header field {part!r}") from exc
    coeffs: list[Fraction] = []
    for ln in lines[1:]:
        try:
            coeffs.append(Fraction(ln.strip()))
        except ValueError as exc:
            raise ValidationError(f"bad coefficient line {ln!r}") from exc
    if "N" in header and header["N"] != len(coeffs) - 1:
        raise ValidationError(
            f"header says N={header['N']} but file has {len(coeffs)} coefficients"
        )
    series = ExactSeries(coeffs)
    series.meta.update(header)
    return series, header


def series_from_counts(counts: Sequence[int], coordination: int) -> ExactSeries:
    """Probability series p_n = counts[n] / coordination^n."""
    out = []
    scale = 1
    for a in counts:
        out.append(Fraction(a, scale))
        scale *= coordination
    return ExactSeries(out)
