"""Chern classes of the bundles V(I/J) and of their Whitney products.

A colength-one step I > J with quotient spanned by x^a y^b gives a line
bundle whose first Chern class is computed from the exponents of that
monomial and of the matching monomial of the degenerated pair.  Over the
compactification Y the classes come from a table of first Chern classes, part
of which is re-derived here from a small linear system in seven unknown
multiplicities.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Mapping, Sequence

from .chow import ChowClass, RingKind, RingSpec
from .errors import ChernError, SolverError
from .fan import Fan2D, FanCase, Ray, pullback_divisor, reference_fan
from .ideals import Filtration, MonomialIdeal
from .limits import DegenerationDirection, degeneration_ideal


# ---------------------------------------------------------------------------
# Chern polynomials


@dataclass(frozen=True)
class ChernPoly:
    """Total Chern class of a rank ``rank`` bundle, split by codegree."""

    rank: int
    parts: tuple[ChowClass, ...]

    def __post_init__(self):
        if self.rank < 0:
            raise ChernError("negative rank")
        if not self.parts or self.parts[0] != self.parts[0].ring.one:
            raise ChernError("part 0 of a Chern polynomial must be 1")
        for k, p in enumerate(self.parts):
            if not p.is_homogeneous(k):
                raise ChernError(f"part {k} is not homogeneous of degree {k}")

    @property
    def ring(self) -> RingSpec:
        return self.parts[0].ring

    @classmethod
    def from_total(cls, rank: int, total: ChowClass) -> "ChernPoly":
        ring = total.ring
        return cls(rank, tuple(total.part(k) for k in range(ring.top + 1)))

    @classmethod
    def trivial(cls, ring: RingSpec, rank: int = 0) -> "ChernPoly":
        return cls.from_total(rank, ring.one)

    @classmethod
    def line(cls, c1: ChowClass) -> "ChernPoly":
        if not c1.is_homogeneous(1):
            raise ChernError("a line bundle class must have degree 1")
        return cls.from_total(1, c1.ring.one + c1)

    def c(self, k: int) -> ChowClass:
        return self.parts[k] if k < len(self.parts) else self.ring.zero

    @property
    def total(self) -> ChowClass:
        out = self.ring.zero
        for p in self.parts:
            out = out + p
        return out

    def __mul__(self, other: "ChernPoly") -> "ChernPoly":
        return whitney(self, other)

    def render(self) -> str:
        return self.total.render()


def whitney(a: ChernPoly, b: ChernPoly) -> ChernPoly:
    """Chern polynomial of an extension of b by a."""
    if a.ring is not b.ring:
        raise ChernError("Whitney product of classes in different rings")
    return ChernPoly.from_total(a.rank + b.rank, a.total * b.total)


def twist(c: ChernPoly, d: ChowClass) -> ChernPoly:
    """Chern polynomial of V tensor L where c1(L) = d (splitting principle)."""
    if d.ring is not c.ring:
        raise ChernError("twist class lives in a different ring")
    if d and not d.is_homogeneous(1):
        raise ChernError("the twisting class must have degree 1")
    ring = c.ring
    powers = [ring.one]
    for _ in range(ring.top):
        powers.append(powers[-1] * d)
    parts = []
    for k in range(ring.top + 1):
        acc = ring.zero
        for i in range(min(k, c.rank) + 1):
            coeff = comb(c.rank - i, k - i)
            if coeff:
                acc = acc + c.c(i) * powers[k - i] * coeff
        parts.append(acc)
    return ChernPoly(c.rank, tuple(parts))


# ---------------------------------------------------------------------------
# First Chern classes of monomial quotients


def case_direction(case: FanCase) -> DegenerationDirection:
    return DegenerationDirection.X_BY_Y2 if case is FanCase.M41 else DegenerationDirection.Y_BY_X


def step_exponents(I: MonomialIdeal, J: MonomialIdeal, case: FanCase = FanCase.M41):
    """((a, b), (c, d)): quotient monomials of I/J and of the degenerated pair."""
    q = I.quotient_monomial(J)
    direction = case_direction(case)
    dq = degeneration_ideal(I, direction).quotient_monomial(degeneration_ideal(J, direction))
    return (q.a, q.b), (dq.a, dq.b)


def c1_quotient(I: MonomialIdeal, J: MonomialIdeal, case: FanCase, ring: RingSpec) -> ChowClass:
    """First Chern class of the line bundle V(I/J).

    With x^a y^b spanning I/J and x^c y^d spanning the quotient of the
    degenerated pair the class is

        -a h2 + b (c1 + h2) + (a - c)(h2 - h3)            (case M41)
        -a h2 + b (c1 + h2) + (a - c)(c1 + h3p + h2)      (case M32)

    Over rings without the extra fiber class the correction term must vanish.
    """
    if ring.kind is RingKind.S:
        raise ChernError("the surface ring has no fiber class h2")
    (a, b), (c, _) = step_exponents(I, J, case)
    h2, c1 = ring.gen("h2"), ring.gen("c1")
    out = h2 * (-a) + (c1 + h2) * b
    if a == c:
        return out
    if case is FanCase.M41:
        if ring.kind is not RingKind.C23:
            raise ChernError(f"step {I} > {J} needs h3 (a={a}, c={c}) but the ring is {ring.kind.value}")
        return out + (h2 - ring.gen("h3")) * (a - c)
    if ring.kind is not RingKind.C22P:
        raise ChernError(f"step {I} > {J} needs h3p (a={a}, c={c}) but the ring is {ring.kind.value}")
    return out + (c1 + ring.gen("h3p") + h2) * (a - c)


# ---------------------------------------------------------------------------
# The table of first Chern classes over Y

TABLE3_COLUMNS: tuple = ("c1", "h2", Ray(0, 1), Ray(1, 4), Ray(1, 3), Ray(2, 5), Ray(1, 2))

_ROWS = [
    ((1, 1, 2, 2), (2, 2, 0, 0, 0, 0, 0)),
    ((1, 2, 2, 1), (1, 0, 0, 0, 0, 0, 0)),
    ((2, 1, 2, 2), (3, 3, 0, 0, 0, 0, 0)),
    ((2, 2, 2, 3), (4, 4, 0, 2, 2, 4, 2)),
    ((2, 3, 3, 2), (2, 1, 0, 0, 0, 0, 0)),
    ((3, 2, 3, 3), (5, 5, 0, 2, 2, 4, 2)),
    ((3, 3, 3, 4), (6, 6, 2, 6, 4, 6, 3)),
    ((3, 4, 4, 3), (3, 2, 0, 0, 0, 1, 0)),
    ((4, 3, 4, 4), (7, 7, 2, 6, 5, 8, 3)),
    ((0, 2, 0, 3), (2, 2, 0, 1, 1, 2, 1)),
    ((0, 3, 1, 2), (0, -1, 0, -1, -1, -2, -1)),
    ((1, 2, 1, 3), (3, 3, 0, 1, 1, 2, 1)),
    ((0, 3, 0, 4), (3, 3, 1, 3, 2, 3, 1)),
    ((0, 4, 1, 3), (0, -1, -1, -3, -2, -3, -1)),
    ((1, 3, 1, 4), (4, 4, 1, 3, 2, 4, 2)),
]

TABLE3: dict[tuple[int, int, int, int], tuple[Fraction, ...]] = {
    k: tuple(Fraction(v) for v in row) for k, row in _ROWS
}

# Rows whose label does not name a colength-one pair; bound to the chain step
# whose class they carry.  "1,1/2,2" is the step (x^2,xy,y^2) > (x^2,xy,y^3).
ROW_ALIASES = {(1, 1, 1, 2): (1, 1, 2, 2)}

# The rows that the multiplicity solver re-derives.
UNKNOWN_BEARING_ROWS = ((3, 3, 3, 4), (3, 4, 4, 3), (4, 3, 4, 4))


def format_key(key) -> str:
    return f"{key[0]},{key[1]}/{key[2]},{key[3]}"


def parse_key(text: str) -> tuple[int, int, int, int]:
    try:
        left, right = text.replace(" ", "").split("/")
        m = tuple(int(t) for t in left.split(",") + right.split(","))
    except ValueError:
        raise ChernError(f"cannot read table key {text!r}; expected m1,m2/m3,m4") from None
    if len(m) != 4:
        raise ChernError(f"cannot read table key {text!r}; expected m1,m2/m3,m4")
    return m


def key_ideal(m: int, n: int) -> MonomialIdeal:
    """The ideal (x^2, x y^m, y^(m+n))."""
    return MonomialIdeal([(2, 0), (1, m), (0, m + n)])


def key_ideals(key) -> tuple[MonomialIdeal, MonomialIdeal]:
    return key_ideal(key[0], key[1]), key_ideal(key[2], key[3])


def key_for_step(I: MonomialIdeal, J: MonomialIdeal):
    """The table key naming the step I > J, or None."""

    def label(K: MonomialIdeal):
        for m in range(0, K.y_power + 1):
            n = K.y_power - m
            if n >= 0 and key_ideal(m, n) == K:
                return m, n
        return None

    li, lj = label(I), label(J)
    if li is None or lj is None:
        return None
    key = li + lj
    return ROW_ALIASES.get(key, key)


def row_class(row: Sequence[Fraction], ring: RingSpec) -> ChowClass:
    c1, h2 = ring.gen("c1"), ring.gen("h2")
    out = c1 * row[0] + h2 * row[1]
    for ray, coef in zip(TABLE3_COLUMNS[2:], row[2:]):
        if coef:
            out = out + ring.ray_divisor(ray) * coef
    return out


def table3_c1(key, ringY: RingSpec, table: Mapping | None = None) -> ChowClass:
    """First Chern class recorded in the table row ``key`` as a class on Y."""
    table = TABLE3 if table is None else table
    key = tuple(key)
    key = ROW_ALIASES.get(key, key)
    if key not in table:
        raise ChernError(f"no table row {format_key(key)}")
    if ringY.kind is not RingKind.Y:
        raise ChernError("table classes live in the Y ring")
    return row_class(table[key], ringY)


def chern_of_filtration(chain: Filtration, c1_provider: Callable[[MonomialIdeal, MonomialIdeal], ChowClass],
                        ring: RingSpec | None = None) -> ChernPoly:
    """Whitney product of the line bundles of the steps of ``chain``."""
    classes = [c1_provider(I, J) for I, J in chain.steps]
    if ring is None:
        if not classes:
            raise ChernError("empty filtration needs an explicit ring")
        ring = classes[0].ring
    out = ChernPoly.trivial(ring)
    for k, cls in enumerate(classes):
        if cls.ring is not ring:
            raise ChernError(f"step {k} lives in ring {cls.ring.kind.value}, expected {ring.kind.value}")
        out = whitney(out, ChernPoly.line(cls) if cls else ChernPoly.trivial(ring, 1))
    return out


def step_provider(ring: RingSpec, case: FanCase = FanCase.M41, table: Mapping | None = None):
    """Per-step first Chern classes: table rows over Y, the monomial formula elsewhere."""

    def provider(I: MonomialIdeal, J: MonomialIdeal) -> ChowClass:
        if ring.kind is RingKind.Y:
            key = key_for_step(I, J)
            tab = TABLE3 if table is None else table
            if key is not None and key in tab:
                return table3_c1(key, ring, tab)
            (a, b), (c, _) = step_exponents(I, J, case)
            if a != c:
                raise ChernError(f"no class over Y for the step {I} > {J}")
            h2, c1 = ring.gen("h2"), ring.gen("c1")
            return h2 * (-a) + (c1 + h2) * b
        return c1_quotient(I, J, case, ring)

    return provider


def h3_on_Y(ringY: RingSpec, n: Sequence[int] | None = None) -> ChowClass:
    """Image of h3 on Y: h2 plus the boundary divisors with multiplicities.

    The default multiplicities (1, 1, 2, 1) on D(1,4), D(1,3), D(2,5), D(1,2)
    are those for which the relation (h3 + 2h2 + 2c1)(h3 - h2) = 0 holds on Y.
    """
    n = (1, 1, 2, 1) if n is None else n
    out = ringY.gen("h2")
    for ray, k in zip((Ray(1, 4), Ray(1, 3), Ray(2, 5), Ray(1, 2)), n):
        out = out + ringY.ray_divisor(ray) * k
    return out


# ---------------------------------------------------------------------------
# Multiplicity solver


UNKNOWNS = tuple(f"n{k}" for k in range(1, 8))


class ConstraintKind(enum.Enum):
    WHITNEY_EQ = "WHITNEY_EQ"
    PULLBACK_COMB = "PULLBACK_COMB"


@dataclass(frozen=True)
class MultiplicityConstraint:
    """The linear equation sum(terms[n] * n) + constant == 0."""

    kind: ConstraintKind
    terms: tuple[tuple[str, Fraction], ...]
    constant: Fraction
    label: str = ""

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        return self.constant + sum((c * Fraction(values[n]) for n, c in self.terms), Fraction(0))

    def render(self) -> str:
        parts = [f"{c}*{n}" for n, c in self.terms if c]
        if self.constant or not parts:
            parts.append(str(self.constant))
        return " + ".join(parts).replace("+ -", "- ") + " = 0"


class LinForm:
    """An affine form in the unknowns, used to assemble constraints."""

    def __init__(self, const=0, **coeffs):
        self.const = Fraction(const)
        self.coeffs = {k: Fraction(v) for k, v in coeffs.items() if v}

    def __add__(self, other: "LinForm") -> "LinForm":
        out = LinForm(self.const + other.const)
        out.coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out.coeffs[k] = out.coeffs.get(k, 0) + v
        out.coeffs = {k: v for k, v in out.coeffs.items() if v}
        return out

    def scale(self, c) -> "LinForm":
        out = LinForm(self.const * c)
        out.coeffs = {k: v * c for k, v in self.coeffs.items() if v * c}
        return out

    def __sub__(self, other: "LinForm") -> "LinForm":
        return self + other.scale(-1)

    def value(self, values: Mapping[str, Fraction]) -> Fraction:
        return self.const + sum((v * Fraction(values[k]) for k, v in self.coeffs.items()), Fraction(0))


def _row_forms(row: Sequence[Fraction]) -> list[LinForm]:
    return [LinForm(v) for v in row]


def _add_rows(*rows: Sequence[LinForm]) -> list[LinForm]:
    out = [LinForm() for _ in TABLE3_COLUMNS]
    for r in rows:
        out = [a + b for a, b in zip(out, r)]
    return out


def _unknown_on(column: Ray, name: str) -> list[LinForm]:
    return [LinForm(**{name: 1}) if col == column else LinForm() for col in TABLE3_COLUMNS]


def unknown_classes(table: Mapping | None = None) -> dict[str, list[LinForm]]:
    """The four classes carrying unknown multiplicities, as affine forms per column.

    phi1: twice the class of (x, y^3) > (x, y^4), plus n1 D(1,2).
    phi2: the same bundle through a second map: three times the class of
          (x, y^2) > (x, y^3), plus n2 D(0,1) + n3 D(1,4) + n4 D(1,3).
    phi3: the middle step of the chain, rows 0,4/1,3 and 0,3/0,4 summed,
          plus n5 D(2,5).
    phi4: the last step of the chain, rows 1,3/1,4 and 0,3/0,4 summed,
          plus n6 D(1,3) + n7 D(2,5).
    """
    t = TABLE3 if table is None else table
    row = lambda k: _row_forms(t[k])
    r034, r023 = row((0, 3, 0, 4)), row((0, 2, 0, 3))
    return {
        "phi1": _add_rows(r034, r034, _unknown_on(Ray(1, 2), "n1")),
        "phi2": _add_rows(r023, r023, r023, _unknown_on(Ray(0, 1), "n2"),
                          _unknown_on(Ray(1, 4), "n3"), _unknown_on(Ray(1, 3), "n4")),
        "phi3": _add_rows(row((0, 4, 1, 3)), r034, _unknown_on(Ray(2, 5), "n5")),
        "phi4": _add_rows(row((1, 3, 1, 4)), r034, _unknown_on(Ray(1, 3), "n6"),
                          _unknown_on(Ray(2, 5), "n7")),
    }


def _pullback_conditions(fine: Fan2D, coarse: Fan2D, form: list[LinForm]) -> list[tuple[Ray, LinForm]]:
    """Conditions for a class on the fine fan to be pulled back from the coarse fan."""
    coeff = {ray: f for ray, f in zip(TABLE3_COLUMNS[2:], form[2:])}
    missing = [r for r in fine.interior if r not in coarse.rays]
    out = []
    for m in missing:
        expected = LinForm()
        for r in coarse.interior:
            pb = dict(pullback_divisor(coarse, fine, r))
            if pb[m]:
                expected = expected + coeff[r].scale(pb[m])
        out.append((m, coeff[m] - expected))
    return out


ALL_CONSTRAINT_GROUPS = ("whitney", "pullback_b7", "pullback_i4")


def build_constraints(table: Mapping | None = None, fan: Fan2D | None = None,
                      groups: Sequence[str] = ALL_CONSTRAINT_GROUPS) -> list[MultiplicityConstraint]:
    """Linear constraints on n1..n7.

    whitney      the two expressions of the same class agree column by column
    pullback_b7  phi1 + phi3 is pulled back from the fan without (2,5)
    pullback_i4  phi1 + phi3 + phi4 is pulled back from the fan without (1,3), (2,5)
    """
    fan = reference_fan() if fan is None else fan
    phi = unknown_classes(table)
    out: list[MultiplicityConstraint] = []

    def emit(kind, form: LinForm, label: str):
        terms = tuple((n, form.coeffs.get(n, Fraction(0))) for n in UNKNOWNS if form.coeffs.get(n))
        out.append(MultiplicityConstraint(kind, terms, form.const, label))

    if "whitney" in groups:
        for col, a, b in zip(TABLE3_COLUMNS, phi["phi1"], phi["phi2"]):
            emit(ConstraintKind.WHITNEY_EQ, a - b, f"phi1 = phi2 on {col}")
    coarse_rays = {
        "pullback_b7": [r for r in fan.rays if r != Ray(2, 5)],
        "pullback_i4": [r for r in fan.rays if r not in (Ray(1, 3), Ray(2, 5))],
    }
    sums = {
        "pullback_b7": _add_rows(phi["phi1"], phi["phi3"]),
        "pullback_i4": _add_rows(phi["phi1"], phi["phi3"], phi["phi4"]),
    }
    for g in ("pullback_b7", "pullback_i4"):
        if g not in groups:
            continue
        coarse = Fan2D.standard(coarse_rays[g], fan.case)
        for ray, form in _pullback_conditions(fan, coarse, sums[g]):
            emit(ConstraintKind.PULLBACK_COMB, form, f"{g}: coefficient of {ray}")
    unknown = [g for g in groups if g not in ALL_CONSTRAINT_GROUPS]
    if unknown:
        raise SolverError(f"unknown constraint groups {unknown}")
    return out


def solve_multiplicities(constraints: Sequence[MultiplicityConstraint]) -> dict[str, Fraction]:
    """Exact solution of the constraint system; it must be unique, integral and positive."""
    rows = []
    for c in constraints:
        coeffs = dict(c.terms)
        rows.append([Fraction(coeffs.get(n, 0)) for n in UNKNOWNS] + [-Fraction(c.constant)])
    ncols = len(UNKNOWNS)
    pivots = []
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        f = rows[r][col]
        rows[r] = [v / f for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                g = rows[i][col]
                rows[i] = [a - g * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for row in rows[r:]:
        if row[-1]:
            raise SolverError("inconsistent multiplicity constraints")
    if len(pivots) < ncols:
        free = [UNKNOWNS[c] for c in range(ncols) if c not in pivots]
        raise SolverError(f"underdetermined multiplicity constraints (free: {', '.join(free)})")
    sol = {UNKNOWNS[c]: rows[i][-1] for i, c in enumerate(pivots)}
    bad = [n for n, v in sol.items() if v.denominator != 1 or v <= 0]
    if bad:
        raise SolverError("solution is not a positive integer for " + ", ".join(
            f"{n}={v}" for n, v in sol.items() if n in bad))
    return sol


def regenerate_rows(solution: Mapping[str, Fraction], table: Mapping | None = None) -> dict:
    """The unknown-bearing table rows implied by a solution.

    Row 3,3/3,4 is phi1 (equivalently phi2), row 3,4/4,3 is phi3 and row
    4,3/4,4 is phi4.
    """
    phi = unknown_classes(table)
    ev = lambda forms: tuple(f.value(solution) for f in forms)
    return {
        (3, 3, 3, 4): ev(phi["phi1"]),
        (3, 4, 4, 3): ev(phi["phi3"]),
        (4, 3, 4, 4): ev(phi["phi4"]),
    }


# ---------------------------------------------------------------------------
# Table checks

_LABEL_OF_ROW = {v: k for k, v in ROW_ALIASES.items()}


def row_step(key) -> tuple[MonomialIdeal, MonomialIdeal] | None:
    """The colength-one step a table row belongs to, or None when its label names no such step."""
    key = _LABEL_OF_ROW.get(tuple(key), tuple(key))
    I, J = key_ideals(key)
    if J.issubset(I) and J.colength() == I.colength() + 1:
        return I, J
    return None


def formula_check(key, table: Mapping | None = None):
    """Compare a table row with the monomial formula -a h2 + b (c1 + h2).

    Returns (scope, ok).  When the degenerated quotient monomial keeps the
    x-exponent (a = c) the formula is the whole class, so the boundary
    entries must vanish too (scope "full").  Otherwise only the c1 and h2
    entries are compared (scope "base").  Rows whose label names no
    colength-one step give (None, True).
    """
    table = TABLE3 if table is None else table
    step = row_step(key)
    if step is None:
        return None, True
    (a, b), (c, _) = step_exponents(*step)
    row = table[tuple(key)]
    base_ok = row[0] == b and row[1] == b - a
    if a == c:
        return "full", base_ok and not any(row[2:])
    return "base", base_ok


def table3_report(table: Mapping | None = None) -> list[dict]:
    """Per-row status: regenerated by the solver, checked by the formula, or seed data."""
    table = TABLE3 if table is None else table
    solution = solve_multiplicities(build_constraints(table))
    regen = regenerate_rows(solution, table)
    out = []
    for key, row in table.items():
        entry = {"key": format_key(key), "row": [str(v) for v in row]}
        if key in regen:
            entry["check"] = "regenerated"
            entry["regenerated"] = [str(v) for v in regen[key]]
            entry["ok"] = tuple(regen[key]) == tuple(row)
        else:
            scope, ok = formula_check(key, table)
            entry["check"] = "seed" if scope is None else f"formula-{scope}"
            entry["ok"] = ok
        out.append(entry)
    return out
