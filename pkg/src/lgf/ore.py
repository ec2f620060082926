"""Ore operator arithmetic and exact verification tools.

Operators live in the algebra QQ(x_1..x_d, z)<D_x1..D_xd, D_z> where each
partial D_v satisfies D_v * v = v * D_v + 1 and commutes with everything
else. They are kept in normal form: a dict mapping partial-exponent tuples
to rational-function coefficients, all partials to the right.

The module also hosts the algebra-level conversions around a univariate
operator in z: Taylor-coefficient recurrences, the annihilator of P/(1-z),
and the Frobenius indicial polynomial at z = 0. These work on dense integer
coefficient lists and stay independent of the sympy field machinery.

The integrand model covers the family f = 1/(L * prod sqrt(1-x_j^2)) with
L a polynomial: every partial derivative of f is a rational multiple of f,
so applying any operator to f lands back in rational functions and exact
zero-testing decides annihilation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as iproduct
from typing import Iterable, Sequence

from sympy import QQ, sympify
from sympy.polys.fields import field

from . import polyops as P
from .errors import InsufficientDataError, ValidationError, VerificationError
from .operators import LinearODE, LinearRecurrence
from .series import ExactSeries


class OreContext:
    """Variable bookkeeping for an operator algebra on x_1..x_d and z.

    Partial exponent position i differentiates with respect to gens[i];
    z is always the last generator, so D_z is the last exponent slot.
    Contexts are interned per dimension so operators built independently
    share one coefficient field and can be combined freely.
    """

    _cache: dict[int, "OreContext"] = {}

    def __new__(cls, dimension: int):
        if not isinstance(dimension, int) or dimension < 0:
            raise ValidationError("dimension must be a nonnegative integer")
        if dimension in cls._cache:
            return cls._cache[dimension]
        instance = super().__new__(cls)
        cls._cache[dimension] = instance
        return instance

    def __init__(self, dimension: int):
        if getattr(self, "dimension", None) == dimension:
            return
        self.dimension = dimension
        names = [f"x{i}" for i in range(1, dimension + 1)] + ["z"]
        self.names = names
        created = field(",".join(names), QQ)
        self.field = created[0]
        self.gens = tuple(created[1:])
        self.nvars = dimension + 1

    @property
    def z(self):
        return self.gens[-1]

    def xs(self):
        return self.gens[:-1]

    def zero_exp(self) -> tuple[int, ...]:
        return (0,) * self.nvars

    def partial(self, index: int) -> "OrePolynomial":
        e = [0] * self.nvars
        e[index] = 1
        return OrePolynomial(self, {tuple(e): self.field.one})

    def partial_for(self, name: str) -> "OrePolynomial":
        label = name[1:] if name.startswith("D") else name
        if label not in self.names:
            raise ValidationError(f"unknown variable {name!r}")
        return self.partial(self.names.index(label))

    def coeff_from_string(self, text: str):
        try:
            return self.field.from_expr(sympify(text.replace("^", "**")))
        except Exception as exc:
            raise ValidationError(f"cannot parse coefficient {text!r}: {exc}")


class OrePolynomial:
    """Normal-form operator: sum of coeff(x,z) * D^alpha terms."""

    __slots__ = ("context", "terms")

    def __init__(self, context: OreContext, terms: dict | None = None):
        self.context = context
        clean = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(v) for v in exp)
            if len(exp) != context.nvars or any(v < 0 for v in exp):
                raise ValidationError(f"bad partial exponent {exp}")
            if coeff:
                clean[exp] = clean.get(exp, context.field.zero) + coeff
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    @classmethod
    def zero(cls, context: OreContext) -> "OrePolynomial":
        return cls(context, {})

    @classmethod
    def scalar(cls, context: OreContext, value) -> "OrePolynomial":
        return cls(context, {context.zero_exp(): context.field.one * value})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrePolynomial):
            return NotImplemented
        return self.context is other.context and self.terms == other.terms

    def __hash__(self):
        raise TypeError("OrePolynomial is mutable-by-construction; not hashable")

    def __add__(self, other: "OrePolynomial") -> "OrePolynomial":
        self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, self.context.field.zero) + c
        return OrePolynomial(self.context, out)

    def __sub__(self, other: "OrePolynomial") -> "OrePolynomial":
        return self + (-other)

    def __neg__(self) -> "OrePolynomial":
        return OrePolynomial(self.context, {e: -c for e, c in self.terms.items()})

    def scale(self, value) -> "OrePolynomial":
        return OrePolynomial(
            self.context, {e: c * value for e, c in self.terms.items()}
        )

    def _check(self, other: "OrePolynomial"):
        if self.context is not other.context:
            raise ValidationError("operators from different contexts")

    def __mul__(self, other: "OrePolynomial") -> "OrePolynomial":
        return ore_multiply(self, other)

    def order_in(self, index: int) -> int:
        return max((e[index] for e in self.terms), default=0)

    def uses_variable(self, index: int) -> bool:
        """True if gens[index] occurs in any coefficient or any partial."""
        gen = self.context.gens[index]
        for exp, coeff in self.terms.items():
            if exp[index]:
                return True
            if coeff.numer.degrees()[index] > 0 or coeff.denom.degrees()[index] > 0:
                return True
        return False

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms):
            mono = "*".join(
                f"D{self.context.names[i]}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exp)
                if e
            )
            c = str(self.terms[exp])
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    __repr__ = __str__


def ore_multiply(a: OrePolynomial, b: OrePolynomial) -> OrePolynomial:
    """Product in normal form: partials are moved right using the Leibniz
    expansion D^a (c g) = sum_g<=a binom(a,g) (D^g c) D^(a-g) g."""
    a._check(b)
    ctx = a.context
    out: dict[tuple[int, ...], object] = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            for gamma in iproduct(*(range(v + 1) for v in ea)):
                dcb = cb
                mult = 1
                for i, g in enumerate(gamma):
                    mult *= math.comb(ea[i], g)
                    for _ in range(g):
                        dcb = dcb.diff(ctx.gens[i])
                    if not dcb:
                        break
                if not dcb:
                    continue
                exp = tuple(ea[i] - gamma[i] + eb[i] for i in range(ctx.nvars))
                add = ca * dcb * mult
                out[exp] = out.get(exp, ctx.field.zero) + add
    return OrePolynomial(ctx, out)


@dataclass(frozen=True)
class IntegrandSpec:
    """The function 1/(L(x,z) * prod_j sqrt(1-x_j^2)) with
    L = 1 - (z/m) * sum_{i<j} x_i x_j and m the number of coordinate pairs.

    Its logarithmic derivatives are rational, so operator application
    returns the rational multiplier R with op(f) = R*f.
    """

    dimension: int

    def __post_init__(self):
        if self.dimension < 2:
            raise ValidationError("integrand needs dimension >= 2")

    def context(self) -> OreContext:
        return OreContext(self.dimension)

    def linear_form(self, ctx: OreContext):
        m = math.comb(self.dimension, 2)
        xs = ctx.xs()
        s = ctx.field.zero
        for i, j in combinations(range(self.dimension), 2):
            s += xs[i] * xs[j]
        return ctx.field.one - ctx.z * s * QQ(1, m)

    def log_derivatives(self, ctx: OreContext):
        """d/dv f / f for v = x_1..x_d, z (in context order)."""
        L = self.linear_form(ctx)
        out = []
        for i, g in enumerate(ctx.gens):
            ld = -L.diff(g) / L
            if i < self.dimension:
                ld += g / (ctx.field.one - g * g)
            out.append(ld)
        return out


def apply_operator_to_integrand(op: OrePolynomial, spec: IntegrandSpec):
    """Rational multiplier R with op(f) = R*f for the spec's integrand.

    Uses phi_{a+e_v} = d/dv phi_a + phi_a * logderiv_v, where phi_a is the
    multiplier of D^a f, and sums coefficients against the phi table.
    """
    ctx = op.context
    if ctx.dimension != spec.dimension:
        raise ValidationError("operator and integrand dimensions differ")
    lds = spec.log_derivatives(ctx)
    phi = {ctx.zero_exp(): ctx.field.one}

    def get_phi(exp):
        if exp in phi:
            return phi[exp]
        i = next(k for k, v in enumerate(exp) if v)
        prev = list(exp)
        prev[i] -= 1
        prev = tuple(prev)
        base = get_phi(prev)
        val = base.diff(ctx.gens[i]) + base * lds[i]
        phi[exp] = val
        return val

    total = ctx.field.zero
    for exp, coeff in op.terms.items():
        total += coeff * get_phi(exp)
    return total


def certify_telescoper(
    telescoper: OrePolynomial,
    delta_parts: Sequence[tuple[str, OrePolynomial]],
    spec: IntegrandSpec,
) -> bool:
    """Check (A + sum_j D_{v_j} B_j)(f) == 0 exactly.

    A must be free of the variables being integrated out, i.e. those named
    by the delta parts, and of their partials; remaining x variables may
    appear (stage-wise certificates keep them as parameters).
    """
    ctx = telescoper.context
    for name, _ in delta_parts:
        label = name[1:] if name.startswith("D") else name
        if label not in ctx.names[: spec.dimension]:
            raise ValidationError(f"delta part names non-integration variable {name!r}")
        i = ctx.names.index(label)
        if telescoper.uses_variable(i):
            raise ValidationError(
                f"telescoper must be free of {ctx.names[i]} and its partial"
            )
    total = telescoper
    for name, part in delta_parts:
        outer = ctx.partial_for(name)
        part._check(telescoper)
        total = total + ore_multiply(outer, part)
    return apply_operator_to_integrand(total, spec).numer == 0


# certificate files: one JSON object per line, streamed
#   {"kind": "meta", "dimension": d}
#   {"kind": "telescoper", "terms": [[{"Dz": 2}, "z^3 - z"], ...]}
#   {"kind": "delta", "variable": "x1", "terms": [...]}


def _terms_from_json(ctx: OreContext, items) -> OrePolynomial:
    terms = {}
    for partials, coeff_text in items:
        exp = [0] * ctx.nvars
        for label, power in partials.items():
            name = label[1:] if label.startswith("D") else label
            if name not in ctx.names:
                raise ValidationError(f"unknown partial {label!r}")
            exp[ctx.names.index(name)] = int(power)
        coeff = ctx.coeff_from_string(coeff_text)
        key = tuple(exp)
        terms[key] = terms.get(key, ctx.field.zero) + coeff
    return OrePolynomial(ctx, terms)


def _terms_to_json(op: OrePolynomial):
    out = []
    for exp in sorted(op.terms):
        partials = {
            "D" + op.context.names[i]: e for i, e in enumerate(exp) if e
        }
        out.append([partials, str(op.terms[exp])])
    return out


def dump_certificate(
    telescoper: OrePolynomial,
    delta_parts: Sequence[tuple[str, OrePolynomial]],
    dimension: int,
) -> str:
    lines = [json.dumps({"kind": "meta", "dimension": dimension})]
    lines.append(
        json.dumps({"kind": "telescoper", "terms": _terms_to_json(telescoper)})
    )
    for name, part in delta_parts:
        lines.append(
            json.dumps(
                {"kind": "delta", "variable": name, "terms": _terms_to_json(part)}
            )
        )
    return "\n".join(lines) + "\n"


def verify_certificate_stream(lines: Iterable[str]):
    """Stream a JSONL certificate and verify it against the fcc integrand
    of the declared dimension. Returns a report dict; raises
    ValidationError on malformed input and VerificationError on failure.
    """
    ctx = None
    spec = None
    telescoper = None
    deltas = []
    blocks = 0
    for raw in lines:
        raw = raw.strip()
        if not raw:
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"bad certificate line: {exc}")
        kind = obj.get("kind")
        blocks += 1
        if kind == "meta":
            spec = IntegrandSpec(int(obj["dimension"]))
            ctx = spec.context()
        elif kind == "telescoper":
            if ctx is None:
                raise ValidationError("certificate must start with a meta line")
            telescoper = _terms_from_json(ctx, obj["terms"])
        elif kind == "delta":
            if ctx is None:
                raise ValidationError("certificate must start with a meta line")
            deltas.append((obj["variable"], _terms_from_json(ctx, obj["terms"])))
        else:
            raise ValidationError(f"unknown certificate block kind {kind!r}")
    if spec is None or telescoper is None:
        raise ValidationError("certificate lacks meta or telescoper block")
    total = telescoper
    for name, part in deltas:
        total = total + ore_multiply(ctx.partial_for(name), part)
    residual = apply_operator_to_integrand(total, spec)
    if residual.numer != 0:
        first = _first_term_string(residual)
        raise VerificationError(
            f"certificate residual is nonzero; first failing term {first}"
        )
    return {
        "dimension": spec.dimension,
        "blocks": blocks,
        "delta_parts": len(deltas),
        "telescoper_order": telescoper.order_in(ctx.nvars - 1),
    }


def _first_term_string(residual) -> str:
    numer = residual.numer
    monom, coeff = sorted(numer.terms())[0]
    names = residual.field.symbols if hasattr(residual, "field") else None
    pieces = [str(coeff)]
    for i, e in enumerate(monom):
        if e:
            label = str(names[i]) if names else f"v{i}"
            pieces.append(f"{label}^{e}")
    return "*".join(pieces)


def ode_to_recurrence(ode: LinearODE) -> LinearRecurrence:
    """Recurrence satisfied by the Taylor coefficients of any series
    solution. A term a_{j,i} z^i D^j sends c_k z^k to
    a_{j,i} ff(k+j-i, j) c_{k+j-i} z^k, so each (j, i) contributes to the
    shift s = j - i with polynomial a_{j,i} * ff(k+s, j)."""
    shifts: dict[int, list] = {}
    for j, poly in enumerate(ode.coefficients):
        for i, a in enumerate(poly):
            if a == 0:
                continue
            s = j - i
            ff = P.pscale(P.falling_factorial_poly(s, j), a)
            shifts[s] = P.padd(shifts.get(s, []), ff)
    shifts = {s: p for s, p in shifts.items() if not P.is_zero(P.trim(p))}
    if not shifts:
        raise ValidationError("zero operator has no coefficient recurrence")
    s_min = min(shifts)
    s_max = max(shifts)
    start = max(0, s_min)
    # re-index so the lowest shift becomes term 0 at index m = k + s_min
    polys = []
    for t in range(s_max - s_min + 1):
        q = shifts.get(s_min + t, [])
        polys.append(tuple(P.pshift(q, -s_min)))
    while polys and P.is_zero(P.trim(list(polys[0]))):
        polys = [tuple(P.pshift(list(q), -1)) for q in polys[1:]]
        start += 1
    return LinearRecurrence(tuple(polys), start=start)


def apply_ode_to_series(ode: LinearODE, series: ExactSeries) -> ExactSeries:
    """Truncated image of the operator on the series; coefficient k of the
    image is computable for k <= order(series) - order(ode)."""
    top = series.order - ode.order
    if top < 0:
        raise InsufficientDataError(
            f"series has {series.order + 1} terms, fewer than ODE order "
            f"{ode.order} + 1"
        )
    return ExactSeries(
        tuple(ode.residuals(series)), variable=series.variable
    )


def _ode_to_ore(ode: LinearODE, ctx: OreContext) -> OrePolynomial:
    z = ctx.z
    terms = {}
    for j, poly in enumerate(ode.coefficients):
        coeff = ctx.field.zero
        for i, a in enumerate(poly):
            if a:
                coeff += ctx.field.one * a * z**i
        if coeff:
            terms[(j,)] = coeff
    return OrePolynomial(ctx, terms)


def _ore_to_ode(op: OrePolynomial) -> LinearODE:
    order = op.order_in(0)
    polys = []
    for j in range(order + 1):
        coeff = op.terms.get((j,))
        if coeff is None:
            polys.append(())
            continue
        if coeff.denom.degrees()[0] > 0:
            raise ValidationError("operator coefficient is not polynomial")
        den = Fraction(
            int(coeff.denom.LC.numerator), int(coeff.denom.LC.denominator)
        )
        dense: list[Fraction] = []
        for (e,), c in coeff.numer.terms():
            if e >= len(dense):
                dense.extend([Fraction(0)] * (e + 1 - len(dense)))
            dense[e] = Fraction(int(c.numerator), int(c.denominator)) / den
        polys.append(tuple(dense))
    cleared = P.clear_denominators([list(q) for q in polys])
    return LinearODE(tuple(tuple(q) for q in cleared))


def quotient_closure(ode: LinearODE) -> LinearODE:
    """Annihilator of P(z)/(1-z) given an annihilator of P(z): compose with
    multiplication by (1-z) on the right and renormalize."""
    ctx = OreContext(0)
    a = _ode_to_ore(ode, ctx)
    mult = OrePolynomial(ctx, {(0,): ctx.field.one - ctx.z})
    return _ore_to_ode(ore_multiply(a, mult))


def indicial_polynomial(ode: LinearODE) -> tuple[int, ...]:
    """Frobenius indicial polynomial at z = 0, as integer coefficients in
    ascending powers of the exponent variable, content-normalized with
    positive leading sign. Substituting z^lam gives, from a_j(z) D^j, the
    lowest-order term [z^{v_j}]a_j * ff(lam, j) * z^{lam + v_j - j}; terms
    attaining the minimal exponent shift aggregate."""
    vals = []
    for j, poly in enumerate(ode.coefficients):
        q = P.trim(list(poly))
        if P.is_zero(q):
            continue
        v = next(i for i, c in enumerate(q) if c != 0)
        vals.append((j, v, q[v]))
    if not vals:
        raise ValidationError("zero operator has no indicial polynomial")
    mu = min(v - j for j, v, _ in vals)
    ind: list = []
    for j, v, c in vals:
        if v - j == mu:
            ind = P.padd(ind, P.pscale(P.falling_factorial_poly(0, j), c))
    ind = P.trim(ind)
    norm = P.primitive_normal([ind])[0]
    return tuple(norm)
