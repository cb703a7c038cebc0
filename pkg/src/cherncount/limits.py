"""Flat limits of monomial ideals under one-parameter coordinate changes.

The image g(t)(I) of an ideal under x -> x + t y^2 (or y -> y + t x) is a
family of subspaces of the finite-dimensional algebra R/m^N.  Writing
u = 1/t, the limit as t -> infinity is obtained by saturating the spanning
columns over K[u] and setting u = 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import NonMonomialLimitError
from .ideals import Monomial, MonomialIdeal, measuring_sequence, truncation_order


class DegenerationDirection(enum.Enum):
    X_BY_Y2 = "x+ty2"  # x -> x + t y^2, y fixed
    Y_BY_X = "y+tx"  # y -> y + t x, x fixed

    @classmethod
    def parse(cls, text: str) -> "DegenerationDirection":
        key = text.strip().lower().replace(" ", "").replace("^", "")
        for d in cls:
            if key in (d.value, d.name.lower()):
                return d
        raise ValueError(f"unknown direction {text!r}; use 'x+ty2' or 'y+tx'")

    def weight(self, m: Monomial) -> int:
        """A grading in which the substitution is homogeneous."""
        if self is DegenerationDirection.X_BY_Y2:
            return 2 * m.a + m.b
        return m.a + m.b

    def image_terms(self, m: Monomial) -> list[tuple[int, Monomial, int]]:
        """Terms (power of t, monomial, coefficient) of the image of m."""
        a, b = m
        if self is DegenerationDirection.X_BY_Y2:
            return [(j, Monomial(a - j, b + 2 * j), comb(a, j)) for j in range(a + 1)]
        return [(j, Monomial(a + j, b - j), comb(b, j)) for j in range(b + 1)]


# A column is a sparse vector over K[u]: {(ambient index, power of u): coefficient}.
Column = dict


@dataclass(frozen=True)
class ParamSubspace:
    """Columns over K[u] spanning a family of subspaces of R/m^N."""

    ambient: tuple[Monomial, ...]
    vectors: tuple[Column, ...]

    def at_zero(self, col: Column) -> dict[int, Fraction]:
        return {i: c for (i, p), c in col.items() if p == 0}

    def degree_in_u(self) -> int:
        return max((p for col in self.vectors for (_, p) in col), default=0)


def ambient_basis(N: int) -> tuple[Monomial, ...]:
    """Monomials of degree < N, ordered by degree then x-exponent."""
    return tuple(Monomial(a, d - a) for d in range(N) for a in range(d + 1))


def _u_normalize(col: Column) -> Column:
    low = min(p for (_, p) in col)
    return {(i, p - low): c for (i, p), c in col.items()} if low else col


def substitute(I: MonomialIdeal, direction: DegenerationDirection, N: int | None = None,
               weight: int | None = None) -> ParamSubspace:
    """Image of I in R/m^N under the direction's substitution, written in u = 1/t.

    With ``weight`` given only the columns of that weighted degree are built.
    """
    if N is None:
        N = truncation_order(I)
    ambient = ambient_basis(N)
    index = {m: i for i, m in enumerate(ambient)}
    cols = []
    for m in ambient:
        if m not in I or (weight is not None and direction.weight(m) != weight):
            continue
        top = m.a if direction is DegenerationDirection.X_BY_Y2 else m.b
        col = {}
        for j, mono, c in direction.image_terms(m):
            if mono.degree < N:
                col[(index[mono], top - j)] = Fraction(c)
        cols.append(_u_normalize(col))
    return ParamSubspace(ambient, tuple(cols))


def _reduce(vec: dict[int, Fraction], j: int, basis: dict) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
    """Reduce ``vec`` (the value of column j) against an echelon basis, tracking the combination used."""
    vec = dict(vec)
    combo = {j: Fraction(1)}
    while vec:
        pivot = min(vec)
        if pivot not in basis:
            break
        bvec, bcombo = basis[pivot]
        f = vec[pivot]
        for k, c in bvec.items():
            nv = vec.get(k, 0) - f * c
            if nv:
                vec[k] = nv
            else:
                vec.pop(k, None)
        for k, c in bcombo.items():
            nc = combo.get(k, 0) - f * c
            if nc:
                combo[k] = nc
            else:
                combo.pop(k, None)
    return vec, combo


def _row_exponents(cols) -> dict[int, int] | None:
    """Exponents e_i with every column of the form u^s * sum c_i u^(e_i) (one shift s per column), if they exist.

    Both substitutions produce such columns: the power of u attached to an
    image monomial is its x-exponent (x -> x + t y^2) or its y-exponent
    (y -> y + t x), up to a shift.
    """
    by_row: dict[int, list[Column]] = {}
    for col in cols:
        for (i, _) in col:
            by_row.setdefault(i, []).append(col)
    e: dict[int, int] = {}
    for start in by_row:
        if start in e:
            continue
        e[start] = 0
        todo = [start]
        while todo:
            i = todo.pop()
            for col in by_row[i]:
                shift = e[i] - next(p for (k, p) in col if k == i)
                for (k, p) in col:
                    if k not in e:
                        e[k] = p + shift
                        todo.append(k)
                    elif e[k] != p + shift:
                        return None
    return e


def _saturate_diagonal(S: ParamSubspace, e: dict[int, int]) -> ParamSubspace:
    """Saturation when the family is a diagonal scaling of a constant subspace.

    Eliminating with pivots ordered by (e_i, i) leaves vectors whose lowest
    u-power parts are triangular, hence independent at u = 0.
    """
    order = lambda i: (e[i], i)
    basis: dict[int, dict[int, Fraction]] = {}
    for col in S.vectors:
        vec = {i: Fraction(c) for (i, _), c in col.items()}
        while vec:
            lead = min(vec, key=order)
            if lead not in basis:
                break
            f = vec[lead]
            for k, c in basis[lead].items():
                nv = vec.get(k, 0) - f * c
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        if not vec:
            raise ArithmeticError("columns are dependent over K(u)")
        lead = min(vec, key=order)
        f = vec[lead]
        basis[lead] = {k: c / f for k, c in vec.items()}
    cols = tuple({(i, e[i] - e[lead]): c for i, c in vec.items()} for lead, vec in basis.items())
    return ParamSubspace(S.ambient, cols)


def saturate(S: ParamSubspace) -> ParamSubspace:
    """Column operations over K[u] until the values at u = 0 are independent.

    Columns are processed left to right.  When the value of column j at u = 0
    depends on the earlier ones, the corresponding combination of columns is
    divisible by u and replaces column j after division; the earlier columns
    stay independent, so their echelon basis is kept.
    """
    e = _row_exponents(S.vectors)
    if e is not None:
        return _saturate_diagonal(S, e)
    cols = [dict(c) for c in S.vectors]
    basis: dict[int, tuple[dict[int, Fraction], dict[int, Fraction]]] = {}
    j = 0
    while j < len(cols):
        vec, combo = _reduce(S.at_zero(cols[j]), j, basis)
        if vec:
            pivot = min(vec)
            f = vec[pivot]
            basis[pivot] = ({k: c / f for k, c in vec.items()}, {k: c / f for k, c in combo.items()})
            j += 1
            continue
        new: Column = {}
        for i, f in combo.items():
            for key, c in cols[i].items():
                v = new.get(key, 0) + f * c
                if v:
                    new[key] = v
                else:
                    new.pop(key, None)
        if not new:
            raise ArithmeticError("columns are dependent over K(u)")
        cols[j] = {(i, p - 1): c for (i, p), c in new.items()}
    return ParamSubspace(S.ambient, tuple(cols))


def limit_at_infinity(S: ParamSubspace) -> list[dict[Monomial, Fraction]]:
    """Basis of the limit subspace (as sparse vectors over the ambient monomials)."""
    sat = saturate(S)
    return [{S.ambient[i]: c for i, c in sat.at_zero(col).items()} for col in sat.vectors]


def _rref(vectors: list[dict[Monomial, Fraction]]) -> list[dict[Monomial, Fraction]]:
    rows: list[dict[Monomial, Fraction]] = []
    for v in vectors:
        vec = dict(v)
        for r in rows:
            p = min(r)
            if p in vec:
                f = vec[p]
                for k, c in r.items():
                    nv = vec.get(k, 0) - f * c
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
        if vec:
            p = min(vec)
            f = vec[p]
            vec = {k: c / f for k, c in vec.items()}
            for r in rows:
                if p in r:
                    g = r[p]
                    for k, c in vec.items():
                        nv = r.get(k, 0) - g * c
                        if nv:
                            r[k] = nv
                        else:
                            r.pop(k, None)
            rows.append(vec)
    return rows


def degeneration_ideal(I: MonomialIdeal, direction: DegenerationDirection,
                       N: int | None = None) -> MonomialIdeal:
    """The flat limit of g(t)(I) as t -> infinity, as a monomial ideal.

    The computation is split by the weighted degree in which the substitution
    is homogeneous, so each block is small.
    """
    if N is None:
        N = truncation_order(I)
    weights = sorted({direction.weight(m) for m in ambient_basis(N) if m in I})
    kept: list[Monomial] = []
    for w in weights:
        block = substitute(I, direction, N, weight=w)
        for row in _rref(limit_at_infinity(block)):
            if len(row) != 1:
                raise NonMonomialLimitError(
                    f"limit of {I} is not monomial in weight {w}: "
                    + " + ".join(f"{c}*{m}" for m, c in sorted(row.items()))
                )
            kept.extend(row)
    high = [(a, N - a) for a in range(N + 1)]
    return MonomialIdeal([tuple(m) for m in kept] + high)


def quotient_monomial(I: MonomialIdeal, J: MonomialIdeal) -> Monomial:
    """The unique monomial spanning I/J when J is a colength-one subideal of I."""
    return I.quotient_monomial(J)


def applicable_directions(I: MonomialIdeal) -> list[DegenerationDirection]:
    """Directions whose measuring-sequence hypothesis holds for I.

    x -> x + t y^2 applies when kx <= 3; y -> y + t x when kx <= 2 and ky <= 2.
    """
    ms = measuring_sequence(I)
    out = []
    if ms.kx <= 3:
        out.append(DegenerationDirection.X_BY_Y2)
    if ms.kx <= 2 and ms.ky <= 2:
        out.append(DegenerationDirection.Y_BY_X)
    return out


def preserves(J: MonomialIdeal, direction: DegenerationDirection, N: int | None = None) -> bool:
    """True when the direction's substitution (formal coefficient) maps J into itself mod m^N."""
    if N is None:
        N = truncation_order(J)
    for g in J.gens:
        for _, mono, c in direction.image_terms(g):
            if c and mono.degree < N and mono not in J:
                return False
    return True
