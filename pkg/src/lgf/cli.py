"""Command line front end.

Subcommands cover the individual stages (counting, series construction,
guessing, operator algebra, certificate checking) and a `pipeline` command
chaining them per dimension up to the printed return probability. Output
is line oriented and deterministic: the same flags produce byte-identical
text, so artifacts can be diffed or piped between subcommands. `--json`
swaps the human output for a machine-readable envelope; `--out` writes the
primary artifact to a file and keeps stdout to a one-line summary.

Exit codes mirror the exception hierarchy: 0 success, 2 bad input,
3 exhausted budget, 4 not enough data, 5 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import golden
from .errors import LgfError, PrecisionLossError, ValidationError, VerificationError
from .guess import guess_ode, guess_recurrence
from .lattice import Lattice
from .multistep import multi_step_pipeline
from .numerics import (
    ExtrapolationModel,
    default_window,
    extend_sequence,
    extrapolate_limit,
    return_probability,
)
from .operators import LinearODE, LinearRecurrence
from .ore import (
    indicial_polynomial,
    ode_to_recurrence,
    quotient_closure,
    verify_certificate_stream,
)
from .series import ExactSeries, dump_series, parse_series, series_from_counts
from .walkcount import count_excursions

# annihilators shipped with the package, by dimension
EMBEDDED_ODES = {2: golden.ode_2d, 4: golden.fcc4_ode, 5: golden.fcc5_ode}

BUNDLED_CERTIFICATES = ("cert_2d", "cert_2d_step_dz", "cert_2d_step_dx2")

# per-dimension evaluation plans for the return probability: series
# source, forward run length, fit order, exponent step of the asymptotic
# basis (the partial-sum tail decays like n^(1-d/2)), working precision,
# and how many decimal places the run is expected to certify
PIPELINE_PLANS = {
    3: dict(source="guessed", series_terms=60, guess_bounds=(4, 8),
            extend_to=1600, fit_order=24, step=Fraction(1, 2),
            precision=256, digits=15),
    4: dict(source="embedded", extend_to=2600, fit_order=30,
            step=Fraction(1), precision=384, digits=50),
    5: dict(source="embedded", extend_to=2800, fit_order=44,
            step=Fraction(1, 2), precision=384, digits=50),
    6: dict(source="file", extend_to=2600, fit_order=30,
            step=Fraction(1), precision=384, digits=50),
}


def _default_schedule(dimension: int) -> tuple[int, ...]:
    return (2, 1, 2) if dimension == 5 else (1,) * dimension


def _dump_counts(dimension: int, coordination: int, counts) -> str:
    lines = [f"# lgf-seq d={dimension} c={coordination} N={len(counts) - 1}"]
    lines.extend(str(int(v)) for v in counts)
    return "\n".join(lines) + "\n"


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="ascii") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}")


def _piped_stdin() -> str:
    """Stdin content when something was actually piped in, else empty."""
    if sys.stdin.isatty():
        return ""
    return sys.stdin.read()


def _read_text(args, what: str) -> str:
    """Operator input: --ode-file wins, otherwise stdin must be piped."""
    if getattr(args, "ode_file", None):
        return _read_file(args.ode_file)
    piped = _piped_stdin()
    if piped.strip():
        return piped
    raise ValidationError(f"no {what}: pass --ode-file or pipe one on stdin")


def _series_from_args(args, probability: bool) -> ExactSeries:
    """Input sequence from -d/-N (counted) or from a dump on stdin.

    With probability set, integer dumps carrying a coordination header are
    counts and get divided down to p_n; recurrence fitting works on the
    values as given.
    """
    if args.dimension is not None:
        if args.terms is None:
            raise ValidationError("-d needs -N to know how many terms to count")
        lattice = Lattice(args.dimension)
        counts = count_excursions(lattice, args.terms)
        if probability:
            return series_from_counts(counts, lattice.coordination_number)
        return ExactSeries([Fraction(v) for v in counts])
    piped = _piped_stdin()
    if not piped.strip():
        raise ValidationError("no series: pass -d/-N or pipe a sequence dump")
    series, header = parse_series(piped)
    c = header.get("c", 0)
    if probability and c > 1 and all(v.denominator == 1 for v in series.coefficients):
        series = series_from_counts(
            [v.numerator for v in series.coefficients], c
        )
    return series


def _bundled_certificate_lines(name: str):
    from importlib import resources

    if name not in BUNDLED_CERTIFICATES:
        raise ValidationError(
            f"unknown bundled certificate {name!r}; "
            f"choose from {', '.join(BUNDLED_CERTIFICATES)}"
        )
    ref = resources.files("lgf").joinpath(f"data/{name}.jsonl")
    return ref.read_text(encoding="ascii").splitlines()


def _lambda_power_string(coeffs) -> str:
    """Factored display of an indicial polynomial, as far as small integer
    roots go: lam^v * (lam - r)^m * ... [unfactored rest]."""
    from . import polyops as P

    q = P.trim(list(coeffs))
    v = next(i for i, c in enumerate(q) if c != 0)
    q = q[v:]
    parts = []
    if v:
        parts.append("lam" if v == 1 else f"lam^{v}")
    for root in (r for r in range(-8, 9) if r):
        count = 0
        while len(q) > 1 and P.peval(q, root) == 0:
            deg = len(q) - 1
            b = [0] * deg
            b[deg - 1] = q[deg]
            for i in range(deg - 1, 0, -1):
                b[i - 1] = q[i] + root * b[i]
            q = b
            count += 1
        if count:
            factor = f"(lam - {root})" if root > 0 else f"(lam + {-root})"
            parts.append(factor if count == 1 else f"{factor}^{count}")
    if q != [1]:
        parts.append(f"[{P.poly_str(q, 'lam')}]")
    return " * ".join(parts) or "1"


def cmd_count(args):
    lattice = Lattice(args.dimension)
    counts = count_excursions(lattice, args.terms)
    text = _dump_counts(args.dimension, lattice.coordination_number, counts)
    data = {
        "dimension": args.dimension,
        "coordination": lattice.coordination_number,
        "counts": [int(v) for v in counts],
    }
    return text, f"counted a_n(0) for n <= {args.terms}", data


def cmd_series_wallis(args):
    from .analytic import lgf_series_wallis

    lattice = Lattice(args.dimension)
    series = lgf_series_wallis(lattice, args.terms)
    text = dump_series(series, args.dimension, lattice.coordination_number)
    data = {
        "dimension": args.dimension,
        "coefficients": [str(c) for c in series.coefficients],
    }
    return text, f"series to order {args.terms} by term integration", data


def cmd_multistep(args):
    lattice = Lattice(args.dimension)
    schedule = args.schedule or _default_schedule(args.dimension)
    series = multi_step_pipeline(
        lattice, schedule, args.terms, threads=args.threads
    )
    counts = [int(c) for c in series.coefficients]
    text = _dump_counts(args.dimension, lattice.coordination_number, counts)
    data = {
        "dimension": args.dimension,
        "schedule": list(schedule),
        "counts": counts,
    }
    summary = (
        f"a_n(0) to n={args.terms} through schedule "
        + ",".join(str(s) for s in schedule)
    )
    return text, summary, data


def cmd_guess_rec(args):
    series = _series_from_args(args, probability=False)
    rec = guess_recurrence(series.coefficients, args.max_order, args.max_degree)
    if rec is None:
        raise VerificationError(
            f"no recurrence within order {args.max_order}, "
            f"degree {args.max_degree} fits the data"
        )
    data = {"order": rec.order, "degree": rec.degree, "operator": rec.dump()}
    return rec.dump(), f"recurrence of order {rec.order}, degree {rec.degree}", data


def cmd_guess_ode(args):
    series = _series_from_args(args, probability=True)
    ode = guess_ode(series, args.max_order, args.max_degree)
    if ode is None:
        raise VerificationError(
            f"no operator within order {args.max_order}, "
            f"degree {args.max_degree} annihilates the data"
        )
    data = {"order": ode.order, "degree": ode.degree, "operator": ode.dump()}
    return ode.dump(), f"operator of order {ode.order}, degree {ode.degree}", data


def cmd_ode2rec(args):
    ode = LinearODE.parse(_read_text(args, "operator"))
    rec = ode_to_recurrence(ode)
    data = {
        "order": rec.order,
        "degree": rec.degree,
        "start": rec.start,
        "operator": rec.dump(),
    }
    return rec.dump(), f"coefficient recurrence of order {rec.order}", data


def cmd_closure(args):
    ode = LinearODE.parse(_read_text(args, "operator"))
    closed = quotient_closure(ode)
    data = {"order": closed.order, "degree": closed.degree, "operator": closed.dump()}
    return (
        closed.dump(),
        f"annihilator of P/(1-z): order {closed.order}, degree {closed.degree}",
        data,
    )


def cmd_indicial(args):
    ode = LinearODE.parse(_read_text(args, "operator"))
    ind = indicial_polynomial(ode)
    pretty = _lambda_power_string(ind)
    text = " ".join(str(c) for c in ind) + "\n" + pretty + "\n"
    data = {"coefficients": list(ind), "factored": pretty}
    return text, f"indicial polynomial {pretty}", data


def cmd_verify_ode(args):
    if args.dimension is None or args.terms is None:
        raise ValidationError("verify-ode needs -d and -N for the series")
    if args.ode_file:
        ode = LinearODE.parse(_read_file(args.ode_file))
        origin = "supplied"
    else:
        if args.dimension not in EMBEDDED_ODES:
            raise ValidationError(
                f"no embedded annihilator for dimension {args.dimension}; "
                "pass --ode-file"
            )
        ode = EMBEDDED_ODES[args.dimension]()
        origin = "embedded"
    lattice = Lattice(args.dimension)
    counts = count_excursions(lattice, args.terms)
    series = series_from_counts(counts, lattice.coordination_number)
    residuals = ode.residuals(series)
    bad = next((i for i, v in enumerate(residuals) if v != 0), None)
    if bad is not None:
        raise VerificationError(
            f"residual coefficient {bad} is {residuals[bad]}, not zero"
        )
    text = (
        f"ok: {origin} operator (order {ode.order}, degree {ode.degree}) "
        f"annihilates {len(residuals)} series coefficients\n"
    )
    data = {
        "origin": origin,
        "order": ode.order,
        "degree": ode.degree,
        "residuals_checked": len(residuals),
    }
    return text, text.strip(), data


def cmd_certify(args):
    if args.bundled:
        lines = _bundled_certificate_lines(args.bundled)
        label = f"bundled {args.bundled}"
    elif args.certificate:
        lines = _read_file(args.certificate).splitlines()
        label = args.certificate
    else:
        raise ValidationError("certify needs a certificate file or --bundled name")
    report = verify_certificate_stream(lines)
    text = (
        f"ok: {label} verifies; dimension {report['dimension']}, "
        f"{report['delta_parts']} delta parts, telescoper order "
        f"{report['telescoper_order']} in z\n"
    )
    return text, text.strip(), dict(report, label=label)


def _pipeline_series(args, plan, report):
    """Annihilator for the chosen dimension, per the plan's source."""
    d = args.dimension
    if plan["source"] == "file" and not args.ode_file:
        raise ValidationError(
            f"dimension {d} has no printed annihilator; pass --ode-file"
        )
    if args.ode_file:
        ode = LinearODE.parse(_read_text(args, "operator"))
        report.append(f"operator: order {ode.order}, degree {ode.degree} (from file)")
    elif plan["source"] == "embedded":
        ode = EMBEDDED_ODES[d]()
        report.append(f"operator: order {ode.order}, degree {ode.degree} (embedded)")
    else:
        lattice = Lattice(d)
        counts = count_excursions(lattice, plan["series_terms"])
        series = series_from_counts(counts, lattice.coordination_number)
        ode = guess_ode(series, *plan["guess_bounds"])
        if ode is None:
            raise VerificationError(
                f"no annihilator within bounds {plan['guess_bounds']} "
                f"for the {d}-dimensional series"
            )
        report.append(
            f"operator: order {ode.order}, degree {ode.degree} "
            f"(guessed from {plan['series_terms'] + 1} counted terms)"
        )
    return ode


def cmd_pipeline(args):
    d = args.dimension
    if d not in PIPELINE_PLANS:
        raise ValidationError(
            f"pipeline supports dimensions {sorted(PIPELINE_PLANS)}, got {d}"
        )
    plan = PIPELINE_PLANS[d]
    report: list[str] = []
    ode = _pipeline_series(args, plan, report)

    closed = quotient_closure(ode)
    rec = ode_to_recurrence(closed)
    report.append(
        f"partial-sum recurrence: order {rec.order}, degree {rec.degree}, "
        f"valid from n={rec.start}"
    )

    lattice = Lattice(d)
    counts = count_excursions(lattice, rec.order + rec.start - 1)
    p_series = series_from_counts(counts, lattice.coordination_number)
    initials = p_series.partial_sums().coefficients

    n_top = plan["extend_to"]
    f = extend_sequence(rec, initials, n_top)
    report.append(f"forward run: exact partial sums to n={n_top}")

    model = ExtrapolationModel(
        plan["fit_order"], default_window(n_top, plan["fit_order"]), plan["step"]
    )
    est = extrapolate_limit(f, model, precision=plan["precision"])
    r_value = return_probability(est.value)
    report.append(
        f"fit: order {plan['fit_order']}, exponent step {plan['step']}, "
        f"window ending at n={n_top}"
    )

    digits = args.digits if args.digits is not None else plan["digits"]
    places = est.decimal_places
    if places < digits:
        raise PrecisionLossError(
            f"run certifies {places} decimal places, {digits} requested; "
            "deepen the forward run or raise the fit order"
        )
    report.append(f"P(1) = {est.digits(digits)} (± 10^-{digits})")
    report.append(f"R = {r_value.digits(digits)} (± 10^-{digits})")
    text = "\n".join(report) + "\n"
    data = {
        "dimension": d,
        "p1": est.digits(digits),
        "r": r_value.digits(digits),
        "certified_places": places,
        "digits": digits,
        "recurrence_order": rec.order,
    }
    return text, f"R = {r_value.digits(min(digits, 15))}...", data


COMMANDS = {
    "count": cmd_count,
    "series-wallis": cmd_series_wallis,
    "guess-rec": cmd_guess_rec,
    "guess-ode": cmd_guess_ode,
    "multistep": cmd_multistep,
    "ode2rec": cmd_ode2rec,
    "closure": cmd_closure,
    "indicial": cmd_indicial,
    "verify-ode": cmd_verify_ode,
    "certify": cmd_certify,
    "pipeline": cmd_pipeline,
}


def _parse_schedule(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad --schedule {text!r}: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgf",
        description="Lattice Green's functions of fcc lattices: counting, "
        "guessing, operator algebra, return probabilities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, terms=False, dim=False, bounds=False,
            ode=False, schedule=False, digits=False, certificate=False):
        p = sub.add_parser(name, help=help_text)
        if dim:
            p.add_argument("-d", "--dimension", type=int,
                           required=name in ("count", "series-wallis",
                                             "multistep", "pipeline"),
                           help="lattice dimension")
        if terms:
            p.add_argument("-N", "--terms", type=int,
                           required=name in ("count", "series-wallis",
                                             "multistep"),
                           help="last series index to produce")
        if bounds:
            p.add_argument("--max-order", type=int, default=6)
            p.add_argument("--max-degree", type=int, default=10)
        if ode:
            p.add_argument("--ode-file", help="operator dump to read")
        if schedule:
            p.add_argument("--schedule", type=_parse_schedule,
                           help="comma-separated coordinate drops per stage")
        if digits:
            p.add_argument("--digits", type=int, default=None,
                           help="decimal places to certify and print")
        if certificate:
            p.add_argument("certificate", nargs="?",
                           help="JSONL certificate file")
            p.add_argument("--bundled", choices=BUNDLED_CERTIFICATES,
                           help="check a certificate shipped with the package")
        p.add_argument("--threads", type=int, default=1,
                       help="worker hint for stages that can partition")
        p.add_argument("--out", help="write the primary artifact to this file")
        p.add_argument("--json", action="store_true",
                       help="machine-readable envelope on stdout")
        return p

    add("count", "excursion counts a_n(0) by direct propagation",
        dim=True, terms=True)
    add("series-wallis", "probability series by cosine-moment integration",
        dim=True, terms=True)
    add("guess-rec", "fit a certified recurrence to a sequence",
        dim=True, terms=True, bounds=True)
    add("guess-ode", "fit a certified differential operator to a series",
        dim=True, terms=True, bounds=True)
    add("multistep", "long count series via staged section guessing",
        dim=True, terms=True, schedule=True)
    add("ode2rec", "coefficient recurrence of an operator", ode=True)
    add("closure", "annihilator of P/(1-z) from an annihilator of P", ode=True)
    add("indicial", "Frobenius indicial polynomial at z=0", ode=True)
    add("verify-ode", "check an operator against counted series terms",
        dim=True, terms=True, ode=True)
    add("certify", "verify a telescoper certificate stream", certificate=True)
    add("pipeline", "full chain to the return probability",
        dim=True, ode=True, digits=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command]
    try:
        artifact, summary, data = handler(args)
    except LgfError as exc:
        if getattr(args, "json", False):
            envelope = {
                "command": args.command,
                "ok": False,
                "error": str(exc),
                "exit_code": exc.exit_code,
            }
            print(json.dumps(envelope, sort_keys=True))
        else:
            print(f"lgf {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code

    if args.json:
        envelope = {"command": args.command, "ok": True, "data": data}
        print(json.dumps(envelope, sort_keys=True))
        if args.out:
            with open(args.out, "w", encoding="ascii") as fh:
                fh.write(artifact)
        return 0
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(artifact)
        print(summary)
    else:
        sys.stdout.write(artifact)
    return 0


if __name__ == "__main__":
    sys.exit(main())
