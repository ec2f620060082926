"""Multi-step table extension: count a little, guess, extend, repeat.

The excursion counts a_n(x) of a d-dimensional fcc lattice are far too
expensive to count directly for large n. This module trades dimensions for
length: starting from a directly counted table, it repeatedly restricts to
a section (trailing coordinates pinned to zero), guesses certified
multivariate recurrences for the section, and runs them forward to a much
larger n. After the last restriction the scalar sequence a_n(0) remains,
extendable by an ordinary univariate recurrence.

Every stage revalidates itself: the last few counted layers are excluded
from the seed, re-derived through the guessed recurrences, and compared
against the source table. A mismatch, or a recurrence forcing a
non-integer value, raises GuessInconsistencyError; a layer no recurrence
can determine (every usable leading coefficient vanishes) raises
NoApplicableRecurrenceError.

Not every section can sustain itself. A section's certified recurrences
sometimes leave a whole sub-section (typically an axis) undetermined on
each new layer, no matter how the ansatz is enlarged; the missing values
are simply not linear consequences of the section data. When that happens
the stage is absorbed upstream: the previous table, whose own recurrences
have no such defect, is extended to the failed stage's target, and the
section is served from it by restriction.

Section values inherit the full symmetry of the lattice in their free
coordinates, so tables store one canonical representative per orbit
(coordinates nonnegative, sorted descending) and fold queries on access.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .errors import (
    GuessInconsistencyError,
    InsufficientDataError,
    NoApplicableRecurrenceError,
    ValidationError,
)
from .guess import box_support, guess_multivariate_recurrence, guess_recurrence
from .lattice import Lattice
from .operators import MultivariateRecurrence, mpoly_eval
from .polyops import peval
from .series import ExactSeries
from .walkcount import count_walk_table

DEFAULT_OVERLAP = 3

# how deep to count directly before the first guess, by dimension
COUNT_TOP = {2: 24, 3: 20, 4: 16}
COUNT_TOP_DEFAULT = 15

# ansatz ladders per section arity: (n-shifts, box width, coefficient
# degree, basis cap), ordered by system size so the cheapest sufficient
# ansatz wins. The last arity-3 family needs its full nullspace: its
# extra directions are what pin the near-origin values, and they sit
# behind dozens of shifted copies of the smaller family's relations.
LADDERS = {
    1: (
        ((0, 1), 2, 2, 8),
        ((0, 1), 3, 3, 8),
        ((0, 1, 2), 2, 2, 8),
        ((0, 1, 2), 4, 4, 8),
    ),
    2: (
        ((0, 1), 2, 1, 8),
        ((0, 1), 2, 2, 8),
        ((0, 1), 3, 2, 8),
        ((0, 1, 2), 2, 2, 40),
        ((0, 1), 4, 2, 8),
    ),
    3: (
        ((0, 1), 2, 1, 8),
        ((0, 1), 3, 1, 8),
        ((0, 1), 4, 1, 8),
        ((0, 1, 2), 4, 1, 40),
    ),
}
LADDER_DEFAULT = (
    ((0, 1), 2, 1, 8),
    ((0, 1), 2, 2, 8),
    ((0, 1), 3, 1, 8),
)

# how far the mass sequence is tabulated directly before guessing takes over
MASS_GUESS_TOP = 84


def _canonical_points(arity: int, n: int) -> list[tuple[int, ...]]:
    """Canonical section points of layer n: nonnegative coordinates sorted
    descending, within the n-step cone, even coordinate sum."""
    if arity == 0:
        return [()]
    points: list[tuple[int, ...]] = []

    def grow(prefix: list[int], cap: int, total: int):
        if len(prefix) == arity:
            if total % 2 == 0:
                points.append(tuple(prefix))
            return
        for v in range(min(cap, 2 * n - total) + 1):
            grow(prefix + [v], v, total + v)

    grow([], n, 0)
    return points


class SectionTable:
    """Layered store of a section sequence v(n, x_1..x_k), complete on the
    cone for every held layer. Queries outside the cone or with odd
    coordinate sum answer zero without a lookup."""

    __slots__ = ("arity", "layers")

    def __init__(self, arity: int):
        self.arity = arity
        self.layers: list[dict[tuple[int, ...], int]] = []

    @property
    def top(self) -> int:
        return len(self.layers) - 1

    @staticmethod
    def canonical(x: Sequence[int]) -> tuple[int, ...]:
        return tuple(sorted((abs(v) for v in x), reverse=True))

    @staticmethod
    def known_zero(n: int, cx: tuple[int, ...]) -> bool:
        return (
            sum(cx) % 2 == 1
            or (len(cx) > 0 and cx[0] > n)
            or sum(cx) > 2 * n
        )

    def get(self, n: int, x: Sequence[int]) -> int:
        if n < 0:
            return 0
        cx = self.canonical(x)
        if self.known_zero(n, cx):
            return 0
        return self.layers[n][cx]


def _orbit_size(cx: tuple[int, ...]) -> int:
    """Number of signed permutations of a canonical point."""
    perms = factorial(len(cx))
    for count in Counter(cx).values():
        perms //= factorial(count)
    return perms << sum(1 for v in cx if v)


def _wedge_points(q: int, n: int):
    """Nonnegative descending tuples reachable by n projected steps; unlike
    the section cone there is no parity constraint."""
    def grow(prefix: list[int], cap: int, total: int):
        if len(prefix) == q:
            yield tuple(prefix)
            return
        for v in range(min(cap, 2 * n - total) + 1):
            yield from grow(prefix + [v], v, total + v)

    yield from grow([], n, 0)


def _section_mass(lattice: Lattice, keep: int, n_target: int) -> list | None:
    """Totals M(n) = sum over x of v(n, x) for the arity-`keep` section.

    Summing the section over all of Z^keep counts exactly the walks whose
    dropped coordinates return to the origin, i.e. the returns of the walk
    that the dropped coordinates perform on their own. That walk has few
    distinct steps, so its counts are cheap to tabulate; past the tabulated
    range the sequence is continued by a guessed recurrence. Returns None
    when no recurrence certifies within the bounds.
    """
    q = lattice.dimension - keep
    weights: dict[tuple[int, ...], int] = {}
    for step in lattice.steps:
        proj = tuple(step[keep:])
        weights[proj] = weights.get(proj, 0) + 1
    layer = {(0,) * q: 1}
    top = min(n_target, MASS_GUESS_TOP)
    seq = [1]
    canon = SectionTable.canonical
    for n in range(1, top + 1):
        new = {}
        for cy in _wedge_points(q, n):
            acc = 0
            for vec, w in weights.items():
                acc += w * layer.get(canon(tuple(
                    a - b for a, b in zip(cy, vec))), 0)
            if acc:
                new[cy] = acc
        layer = new
        seq.append(layer.get((0,) * q, 0))
    if n_target <= top:
        return seq
    try:
        return _extend_scalar(seq, n_target, DEFAULT_OVERLAP, 6, 6)
    except (NoApplicableRecurrenceError, InsufficientDataError):
        return None


def _dropped(value: Callable, drop: int) -> Callable:
    """Section of a table getter with the last `drop` coordinates at zero."""
    if drop == 0:
        return value
    zeros = (0,) * drop

    def section(n: int, x: Sequence[int]) -> int:
        return value(n, tuple(x) + zeros)

    return section


def _seeded_table(section: Callable, arity: int, seed_top: int) -> SectionTable:
    table = SectionTable(arity)
    for n in range(seed_top + 1):
        table.layers.append(
            {cx: section(n, cx) for cx in _canonical_points(arity, n)}
        )
    return table


def _corner_options(relations: Sequence[MultivariateRecurrence]):
    """All (relation, maximal n-shift, corner index) triples; a corner is a
    support vector attaining the relation's maximal shift in n."""
    options = []
    for rel in relations:
        s0max = max(s[0] for s in rel.support)
        for idx, s in enumerate(rel.support):
            if s[0] == s0max:
                options.append((rel, s0max, idx))
    return options


def _solve_point(table, options, order, m, cx, values):
    """Try to pin v(m, cx) with one of the corner options. Returns the value,
    or None while some same-layer dependency is still unknown."""
    for pos, oi in enumerate(order):
        rel, s0max, corner = options[oi]
        n0 = m - s0max
        if n0 < 0:
            continue
        corner_shift = rel.support[corner]
        base = (n0,) + tuple(a - b for a, b in zip(cx, corner_shift[1:]))
        if mpoly_eval(rel.coefficients[corner], base) == 0:
            continue
        total = 0
        rhs = 0
        blocked = False
        for shift, poly in zip(rel.support, rel.coefficients):
            c = mpoly_eval(poly, base)
            if c == 0:
                continue
            pn = n0 + shift[0]
            px = tuple(a + b for a, b in zip(base[1:], shift[1:]))
            if pn < m:
                rhs += c * table.get(pn, px)
                continue
            cx2 = SectionTable.canonical(px)
            if SectionTable.known_zero(m, cx2):
                continue
            if cx2 == cx:
                total += c
            elif cx2 in values:
                rhs += c * values[cx2]
            else:
                blocked = True
                break
        if blocked or total == 0:
            continue
        if rhs % total:
            raise GuessInconsistencyError(
                f"recurrence forces a non-integer value at n={m}, x={cx}"
            )
        if pos:
            order.insert(0, order.pop(pos))
        return -rhs // total
    return None


CLUSTER_SURPLUS = 40  # consistency checks absorbed beyond full rank


def _cluster_solve(table, relations, m, values, stuck, mass_value=None):
    """Joint exact solve for the layer-m points the greedy pass left.

    Points near the origin can depend on each other cyclically, so no
    single corner instantiation pins any one of them. Every instantiation
    touching the stuck set still yields a linear equation over it, and the
    layer total (when known) contributes one more; if the collected system
    has full rank and an integral solution, the whole cluster is determined
    at once. Returns None while underdetermined.
    """
    index = {cx: i for i, cx in enumerate(stuck)}
    k = len(stuck)

    def candidate_rows():
        if mass_value is not None:
            coeffs = [_orbit_size(cx) for cx in stuck]
            rhs = -mass_value
            for cx, v in values.items():
                rhs += _orbit_size(cx) * v
            yield coeffs, rhs
        seen = set()
        for ri, rel in enumerate(relations):
            s0max = max(s[0] for s in rel.support)
            n0 = m - s0max
            if n0 < 0:
                continue
            corners = [s for s in rel.support if s[0] == s0max]
            for u in stuck:
                for cs in corners:
                    y = tuple(a - b for a, b in zip(u, cs[1:]))
                    if (ri, y) in seen:
                        continue
                    seen.add((ri, y))
                    base = (n0,) + y
                    coeffs = [0] * k
                    rhs = 0
                    for shift, poly in zip(rel.support, rel.coefficients):
                        c = mpoly_eval(poly, base)
                        if c == 0:
                            continue
                        pn = n0 + shift[0]
                        px = tuple(a + b for a, b in zip(y, shift[1:]))
                        if pn < m:
                            rhs += c * table.get(pn, px)
                            continue
                        cx2 = SectionTable.canonical(px)
                        if SectionTable.known_zero(m, cx2):
                            continue
                        if cx2 in values:
                            rhs += c * values[cx2]
                        else:
                            coeffs[index[cx2]] += c
                    if any(coeffs):
                        yield coeffs, rhs

    # forward elimination over Q; the unknown columns hold polynomial
    # evaluations (small), only the last column carries table-sized values.
    # Rows arriving after the rank is complete reduce to zero exactly when
    # they are consistent, so a handful of them double as a verification
    # pass, after which the enumeration is cut off.
    echelon: list[list[Fraction]] = []
    pivots: list[int] = []
    surplus = 0
    for coeffs, rhs in candidate_rows():
        vec = [Fraction(c) for c in coeffs] + [Fraction(-rhs)]
        for row, piv in zip(echelon, pivots):
            f = vec[piv]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
        piv = next((i for i in range(k) if vec[i]), None)
        if piv is None:
            if vec[k]:
                raise GuessInconsistencyError(
                    f"recurrences are mutually inconsistent on layer {m}"
                )
            if len(pivots) == k:
                surplus += 1
                if surplus >= CLUSTER_SURPLUS:
                    break
            continue
        inv = 1 / vec[piv]
        echelon.append([a * inv for a in vec])
        pivots.append(piv)
    if len(pivots) < k:
        return None

    solution: list[Fraction] = [Fraction(0)] * k
    for row, piv in zip(reversed(echelon), reversed(pivots)):
        acc = row[k]
        for c in range(k):
            if c != piv and row[c]:
                acc -= row[c] * solution[c]
        solution[piv] = acc
    if any(v.denominator != 1 for v in solution):
        raise GuessInconsistencyError(
            f"recurrences force non-integer values on layer {m}"
        )
    return {cx: int(solution[i]) for cx, i in index.items()}


def _solve_layer(table, relations, options, order, m, mass_supplier=None):
    pending = _canonical_points(table.arity, m)
    values: dict[tuple[int, ...], int] = {}
    while pending:
        stuck = []
        for cx in pending:
            v = _solve_point(table, options, order, m, cx, values)
            if v is None:
                stuck.append(cx)
            else:
                values[cx] = v
        if len(stuck) == len(pending):
            mass_value = None
            if mass_supplier is not None:
                mass = mass_supplier()
                if mass is not None and m < len(mass):
                    mass_value = mass[m]
            cluster = _cluster_solve(
                table, relations, m, values, stuck, mass_value
            )
            if cluster is None:
                raise NoApplicableRecurrenceError(
                    (m,) + stuck[0],
                    f"no recurrence determines the value at n={m}, "
                    f"x={stuck[0]}",
                )
            values.update(cluster)
            break
        pending = stuck
    return values


def _extend_table(table, relations, target, mass_supplier=None,
                  check_value=None, check_top=-1):
    """Append layers up to target; layers at or below check_top are compared
    pointwise against check_value before being committed."""
    options = _corner_options(relations)
    order = list(range(len(options)))
    for m in range(table.top + 1, target + 1):
        layer = _solve_layer(table, relations, options, order, m,
                             mass_supplier)
        if check_value is not None and m <= check_top:
            for cx in sorted(layer):
                reference = check_value(m, cx)
                if layer[cx] != reference:
                    raise GuessInconsistencyError(
                        f"extension disagrees with the source table at "
                        f"n={m}, x={cx}: {layer[cx]} vs {reference}"
                    )
        table.layers.append(layer)


def _grow_section(
    section: Callable,
    arity: int,
    known_top: int,
    target: int,
    overlap: int,
    ladder,
    mass_supplier=None,
) -> tuple[SectionTable, list[MultivariateRecurrence]]:
    """Guess recurrences for the section (complete to known_top) and extend
    it to target, revalidating the last `overlap` known layers."""
    relations: list[MultivariateRecurrence] = []
    insufficient = 0
    last_failure: NoApplicableRecurrenceError | None = None
    for n_shifts, width, degree, cap in ladder:
        support = box_support(sorted(n_shifts), width, arity)
        try:
            found = guess_multivariate_recurrence(
                section, arity, known_top, support, degree, max_basis=cap
            )
        except InsufficientDataError:
            insufficient += 1
            continue
        relations.extend(r for r in found if r not in relations)
        if not relations:
            continue
        table = _seeded_table(section, arity, known_top - overlap)
        try:
            _extend_table(
                table, relations, target, mass_supplier,
                check_value=section, check_top=known_top,
            )
            return table, relations
        except NoApplicableRecurrenceError as exc:
            last_failure = exc
    if last_failure is not None:
        raise last_failure
    if insufficient == len(ladder):
        raise InsufficientDataError(
            f"a table of depth {known_top} cannot overdetermine any ansatz "
            f"in the arity-{arity} ladder"
        )
    raise NoApplicableRecurrenceError(
        (known_top + 1,),
        f"no certified recurrence found for the arity-{arity} section",
    )


def _extend_scalar(f, n_terms, overlap, max_order, max_degree):
    """Continue the integer sequence f to n_terms terms via a guessed
    univariate recurrence, holding back the last `overlap` terms as an
    extra consistency check."""
    if n_terms < len(f):
        return f[: n_terms + 1]
    rec = guess_recurrence(f[: len(f) - overlap], max_order, max_degree)
    if rec is None:
        raise NoApplicableRecurrenceError(
            (len(f),),
            "no recurrence within the bounds fits the final sequence",
        )
    if any(r != 0 for r in rec.residuals(f)):
        raise GuessInconsistencyError(
            "final recurrence contradicts the reserved terms"
        )
    r = rec.order
    out = list(f)
    for m in range(len(f), n_terms + 1):
        n0 = m - r
        lead = peval(rec.coefficients[r], n0)
        if n0 < rec.start or lead == 0:
            raise NoApplicableRecurrenceError(
                (m,), f"leading coefficient vanishes at n={n0}"
            )
        acc = 0
        for j in range(r):
            c = peval(rec.coefficients[j], n0)
            if c:
                acc += c * out[n0 + j]
        if acc % lead:
            raise GuessInconsistencyError(
                f"recurrence forces a non-integer value at n={m}"
            )
        out.append(-acc // lead)
    return out


def multi_step_pipeline(
    lattice: Lattice,
    schedule: Sequence[int],
    n_terms: int,
    *,
    count_top: int | None = None,
    overlap: int = DEFAULT_OVERLAP,
    ladders: dict | None = None,
    max_order: int = 8,
    max_degree: int = 10,
    threads: int = 1,
) -> ExactSeries:
    """Excursion counts a_n(0) for n <= n_terms, via staged section guessing.

    schedule lists how many coordinates to drop per stage; the drops must
    sum to the lattice dimension. Each intermediate stage guesses on the
    previous table's section and extends it; a stage whose section cannot
    be run forward (its recurrences leave part of each new layer
    undetermined) is absorbed by extending the previous table instead.
    The final drop leaves the scalar sequence, extended by a univariate
    recurrence when n_terms exceeds the last table. ladders overrides the
    ansatz ladder per arity with (n-shifts, box width, degree, basis cap)
    entries. threads is accepted as a hint; the engine is sequential.
    """
    d = lattice.dimension
    schedule = tuple(int(s) for s in schedule)
    if not schedule or any(s < 1 for s in schedule):
        raise ValidationError("schedule entries must be positive")
    if sum(schedule) != d:
        raise ValidationError(
            f"schedule {schedule} must drop exactly {d} coordinates"
        )
    if n_terms < 0:
        raise ValidationError("n_terms must be nonnegative")
    if overlap < 1:
        raise ValidationError("overlap must be at least 1")
    if count_top is None:
        count_top = COUNT_TOP.get(d, COUNT_TOP_DEFAULT)
    if count_top < overlap + 5:
        raise ValidationError(
            f"count_top {count_top} leaves no room for seeding with "
            f"overlap {overlap}"
        )

    if n_terms <= count_top:
        walks = count_walk_table(lattice, n_terms, radius_cut=n_terms,
                                 threads=threads)
        origin = (0,) * d
        return ExactSeries([walks.get(n, origin) for n in range(n_terms + 1)])

    walks = count_walk_table(lattice, count_top, radius_cut=count_top,
                             threads=threads)
    value: Callable = walks.get
    arity, top = d, count_top
    stages = len(schedule)
    mass_cache: dict = {}

    def mass_supplier_for(keep, mass_top):
        def supply():
            key = (keep, mass_top)
            if key not in mass_cache:
                mass_cache[key] = _section_mass(lattice, keep, mass_top)
            return mass_cache[key]

        return supply

    grown: tuple[SectionTable, list[MultivariateRecurrence]] | None = None
    for idx, drop in enumerate(schedule):
        section = _dropped(value, drop)
        arity -= drop
        if arity == 0:
            f = [section(n, ()) for n in range(top + 1)]
            return ExactSeries(
                _extend_scalar(f, n_terms, overlap, max_order, max_degree)
            )
        floor = 160 if idx == stages - 2 else 32
        target = min(n_terms, max(2 * top, floor))
        ladder = (ladders or {}).get(arity) or LADDERS.get(arity, LADDER_DEFAULT)
        try:
            table, relations = _grow_section(
                section, arity, top, target, overlap, ladder,
                mass_supplier_for(arity, target),
            )
            value, top = table.get, target
            grown = (table, relations)
        except NoApplicableRecurrenceError:
            # some sections cannot sustain themselves: their recurrences
            # leave a sub-section (an axis, say) undetermined on every new
            # layer. The parent table has no such defect, so the stage is
            # absorbed upstream: extend the parent to this stage's target
            # and serve the section off the deeper table.
            if grown is None:
                raise
            ptable, prelations = grown
            _extend_table(ptable, prelations, target,
                          mass_supplier_for(ptable.arity, target))
            value, top = section, target
    raise ValidationError("schedule did not reach the scalar sequence")
