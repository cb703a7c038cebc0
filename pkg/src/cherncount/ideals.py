"""Finite-colength monomial ideals in K[[x, y]].

A monomial ideal is stored by its minimal generators, sorted by increasing
x-exponent (and therefore strictly decreasing y-exponent).  Finite colength
means the first generator is a pure power of y and the last a pure power of x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator

from ._lexer import TokenStream
from .errors import (
    FiltrationError,
    InfiniteColengthError,
    NotAQuotientStepError,
    ParseError,
)


@dataclass(frozen=True, order=True)
class Monomial:
    """The monomial x^a y^b."""

    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise TypeError("monomial exponents must be integers")
        if self.a < 0 or self.b < 0:
            raise ValueError(f"negative exponent in x^{self.a} y^{self.b}")

    def __iter__(self) -> Iterator[int]:
        yield self.a
        yield self.b

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.a + other.a, self.b + other.b)

    def divides(self, other: "Monomial") -> bool:
        return self.a <= other.a and self.b <= other.b

    @property
    def degree(self) -> int:
        return self.a + self.b

    def render(self) -> str:
        parts = []
        for var, e in (("x", self.a), ("y", self.b)):
            if e == 1:
                parts.append(var)
            elif e > 1:
                parts.append(f"{var}^{e}")
        return "*".join(parts) or "1"

    def __str__(self) -> str:
        return self.render()


def _minimalize(gens: Iterable) -> tuple[Monomial, ...]:
    """Minimal generators of the monomial ideal generated by ``gens``, by increasing a."""
    best: dict[int, int] = {}
    for g in gens:
        a, b = g
        if a not in best or b < best[a]:
            best[a] = b
    out = []
    for a in sorted(best):
        b = best[a]
        if not out or b < out[-1].b:
            out.append(Monomial(a, b))
    return tuple(out)


def _gens_product(g1, g2) -> tuple[Monomial, ...]:
    return _minimalize((p.a + q.a, p.b + q.b) for p in g1 for q in g2)


class MonomialIdeal:
    """A finite-colength monomial ideal, canonical and immutable."""

    __slots__ = ("gens",)

    def __init__(self, gens: Iterable):
        gens = _minimalize(gens)
        if not gens or gens[0].a != 0 or gens[-1].b != 0:
            raise InfiniteColengthError(
                "ideal generated by "
                + ", ".join(g.render() for g in gens)
                + " has infinite colength (needs pure powers of x and y)"
            )
        object.__setattr__(self, "gens", gens)

    def __setattr__(self, name, value):
        raise AttributeError("MonomialIdeal is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialIdeal) and self.gens == other.gens

    def __hash__(self) -> int:
        return hash(self.gens)

    def __repr__(self) -> str:
        return f"MonomialIdeal({self.render()!r})"

    def __str__(self) -> str:
        return self.render()

    # -- basic invariants ------------------------------------------------

    @property
    def x_power(self) -> int:
        return self.gens[-1].a

    @property
    def y_power(self) -> int:
        return self.gens[0].b

    @property
    def is_unit(self) -> bool:
        return self.gens == (Monomial(0, 0),)

    def column_heights(self) -> list[int]:
        """For each a < x_power, the least b with x^a y^b in the ideal."""
        heights = []
        j = 0
        for a in range(self.x_power):
            while j + 1 < len(self.gens) and self.gens[j + 1].a <= a:
                j += 1
            heights.append(self.gens[j].b)
        return heights

    def colength(self) -> int:
        return sum(self.column_heights())

    def staircase(self) -> list[Monomial]:
        """Monomials outside the ideal, ordered by (a, b)."""
        return [Monomial(a, b) for a, h in enumerate(self.column_heights()) for b in range(h)]

    def order(self) -> int:
        """Least total degree of a generator."""
        return min(g.degree for g in self.gens)

    def __contains__(self, m) -> bool:
        a, b = m
        return any(g.a <= a and g.b <= b for g in self.gens)

    def issubset(self, other: "MonomialIdeal") -> bool:
        return all(g in other for g in self.gens)

    __le__ = issubset

    def __lt__(self, other: "MonomialIdeal") -> bool:
        return self.issubset(other) and self != other

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal(self.gens + other.gens)

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal(_gens_product(self.gens, other.gens))

    def __pow__(self, n: int) -> "MonomialIdeal":
        if n < 0:
            raise ValueError("negative ideal power")
        return reduce(lambda acc, _: acc * self, range(n), UNIT)

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        """Generators by decreasing x-exponent, e.g. ``x^2 + x*y^4 + y^7``."""
        return " + ".join(g.render() for g in reversed(self.gens))

    def to_json(self) -> dict:
        return {"gens": [[g.a, g.b] for g in reversed(self.gens)]}

    @classmethod
    def from_json(cls, data: dict) -> "MonomialIdeal":
        return cls(tuple(g) for g in data["gens"])

    def quotient_monomial(self, smaller: "MonomialIdeal") -> Monomial:
        """The unique monomial spanning self/smaller when that quotient is one-dimensional."""
        if not smaller.issubset(self):
            raise NotAQuotientStepError(f"{smaller} is not contained in {self}")
        extra = [m for m in smaller.staircase() if m in self]
        if len(extra) != 1:
            raise NotAQuotientStepError(
                f"quotient ({self})/({smaller}) has dimension {len(extra)}, not 1"
            )
        return extra[0]


def ideal(*gens) -> MonomialIdeal:
    """Convenience constructor: ``ideal((2, 0), (1, 2), (0, 3))``."""
    return MonomialIdeal(gens)


UNIT = MonomialIdeal([(0, 0)])
MAXIMAL = MonomialIdeal([(1, 0), (0, 1)])


def curvilinear(k: int) -> MonomialIdeal:
    """The ideal (x, y^k)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return MonomialIdeal([(1, 0), (0, k)])


def staircase_ideal(*ns: int) -> MonomialIdeal:
    """(x^r, x^(r-1) y^n1, x^(r-2) y^(n1+n2), ..., y^(n1+...+nr))."""
    r = len(ns)
    if r == 0:
        return UNIT
    if any(n < 0 for n in ns):
        raise ValueError("staircase steps must be nonnegative")
    gens = [(r, 0)]
    total = 0
    for j, n in enumerate(ns, start=1):
        total += n
        gens.append((r - j, total))
    return MonomialIdeal(gens)


def make_B(i: int) -> MonomialIdeal:
    """The A_(i-1) ideal (x^2, x y^ceil(i/2), y^i)."""
    if i < 2:
        raise ValueError(f"B_i needs i >= 2, got {i}")
    return MonomialIdeal([(2, 0), (1, -(-i // 2)), (0, i)])


def colength(I: MonomialIdeal) -> int:
    return I.colength()


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    return I + J


def ideal_product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    return I * J


# ---------------------------------------------------------------------------
# Blow-up and closure


def quadratic_transform(I: MonomialIdeal) -> MonomialIdeal:
    """Monomial quadratic transform: x^a y^b -> x^a y^(a+b-order).

    The minimal-degree generator maps to a pure power of x, so the result
    always has finite colength.  Powers of the maximal ideal go to the unit
    ideal.
    """
    m = I.order()
    return MonomialIdeal((g.a, g.a + g.b - m) for g in I.gens)


def _lower_hull(points: list[Monomial]) -> list[Monomial]:
    # Lower-left hull of points + first quadrant: convex chain of decreasing slope.
    pts = sorted(set(points))
    hull: list[Monomial] = []
    for p in pts:
        if hull and p.b >= hull[-1].b:
            continue
        while len(hull) >= 2:
            o, q = hull[-2], hull[-1]
            cross = (q.a - o.a) * (p.b - o.b) - (q.b - o.b) * (p.a - o.a)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def integral_closure(I: MonomialIdeal) -> MonomialIdeal:
    """Monomials lying in the Newton polyhedron of I."""
    hull = _lower_hull(list(I.gens))
    gens = []
    for p, q in zip(hull, hull[1:]):
        for a in range(p.a, q.a):
            height = p.b + Fraction((q.b - p.b) * (a - p.a), q.a - p.a)
            gens.append((a, math.ceil(height)))
    gens.append(tuple(hull[-1]))
    return MonomialIdeal(gens)


# ---------------------------------------------------------------------------
# Measuring sequence


@dataclass(frozen=True)
class MeasuringSequence:
    """Least k with x -> x + y^k (kx), resp. y -> y + x^k (ky), preserving the ideal."""

    kx: int
    ky: int

    @property
    def A1(self) -> MonomialIdeal:
        return MonomialIdeal([(1, 0), (0, self.kx)])

    @property
    def A2(self) -> MonomialIdeal:
        return MonomialIdeal([(0, 1), (self.ky, 0)])


def truncation_order(I: MonomialIdeal, margin: int | None = None) -> int:
    """N such that m^N lies in I; colength + margin (margin defaults to 2)."""
    if margin is None:
        from .config import truncation_margin

        margin = truncation_margin()
    return I.colength() + margin


def _preserved(I: MonomialIdeal, k: int, swap: bool, N: int) -> bool:
    # Image of x^a y^b under x -> x + t y^k is sum_j C(a,j) t^j x^(a-j) y^(b+jk).
    # All binomial coefficients are nonzero in characteristic 0, so membership is
    # termwise and a single formal t decides it.
    for g in I.gens:
        a, b = (g.b, g.a) if swap else (g.a, g.b)
        for j in range(1, a + 1):
            na, nb = a - j, b + j * k
            if na + nb >= N:
                continue
            mono = (nb, na) if swap else (na, nb)
            if mono not in I:
                return False
    return True


def measuring_sequence(I: MonomialIdeal) -> MeasuringSequence:
    N = truncation_order(I)
    kx = next(k for k in range(1, N + 1) if _preserved(I, k, False, N))
    ky = next(k for k in range(1, N + 1) if _preserved(I, k, True, N))
    return MeasuringSequence(kx, ky)


# ---------------------------------------------------------------------------
# Filtrations


@dataclass(frozen=True)
class Filtration:
    """R = chain[0] > chain[1] > ... > chain[-1], each step of colength one."""

    chain: tuple[MonomialIdeal, ...]

    def __post_init__(self):
        if not self.chain or not self.chain[0].is_unit:
            raise FiltrationError("a filtration starts at the unit ideal")
        for big, small in zip(self.chain, self.chain[1:]):
            if not (small < big) or small.colength() != big.colength() + 1:
                raise FiltrationError(f"{small} is not a colength-one step below {big}")

    @property
    def target(self) -> MonomialIdeal:
        return self.chain[-1]

    @property
    def steps(self) -> list[tuple[MonomialIdeal, MonomialIdeal]]:
        return list(zip(self.chain, self.chain[1:]))

    def quotient_monomials(self) -> list[Monomial]:
        return [big.quotient_monomial(small) for big, small in self.steps]

    def __len__(self) -> int:
        return len(self.chain)


def _reference_chain() -> tuple[MonomialIdeal, ...]:
    I1, I2, I3, I4 = (curvilinear(k) for k in (1, 2, 3, 4))
    return (
        UNIT,
        I1,
        I2,
        I1**2,
        I1 * I2,
        I2**2 + I1**3,
        I2**2,
        I2 * I3,
        I3**2 + I1**5,
        I3**2,
        I3 * I4,
        I4**2 + I1**7,
        I4**2,
    )


REFERENCE_CHAIN = _reference_chain()


def filtration(target: MonomialIdeal) -> Filtration:
    """A colength-one chain from the unit ideal down to ``target``.

    Targets on the reference chain through the B_i ideals get the truncated
    reference chain.  Any other target gets the chain that removes staircase
    monomials by increasing degree, higher powers of y first.
    """
    if target in REFERENCE_CHAIN:
        return Filtration(REFERENCE_CHAIN[: REFERENCE_CHAIN.index(target) + 1])
    order = sorted(target.staircase(), key=lambda m: (m.degree, m.a))
    chain = [_ideal_outside(set(order[:k]), target) for k in range(len(order) + 1)]
    if chain[-1] != target:
        raise FiltrationError(f"could not reach {target}")
    return Filtration(tuple(chain))


def _ideal_outside(complement: set, target: MonomialIdeal) -> MonomialIdeal:
    # The ideal containing target whose complement is the down-closed set ``complement``.
    return MonomialIdeal(list(target.gens) + [m for m in target.staircase() if m not in complement])


# ---------------------------------------------------------------------------
# Parsing


def parse_ideal(text: str) -> MonomialIdeal:
    """Parse an ideal expression.

    Grammar: comma or ``+`` separated sums, ``*`` products and ``^`` powers of
    ``x``, ``y``, ``1``, ``m``, ``Ik`` (the ideal (x, y^k)), ``I(n1,...,nr)``,
    ``B(i)`` and parenthesised subexpressions.
    """
    ts = TokenStream(text)
    gens = _parse_sum(ts)
    ts.expect_end()
    return MonomialIdeal(gens)


def _parse_sum(ts: TokenStream) -> tuple[Monomial, ...]:
    gens = _parse_product(ts)
    while ts.accept("+") or ts.accept(","):
        gens = _minimalize(gens + _parse_product(ts))
    return gens


def _parse_product(ts: TokenStream) -> tuple[Monomial, ...]:
    gens = _parse_power(ts)
    while ts.accept("*"):
        gens = _gens_product(gens, _parse_power(ts))
    return gens


def _parse_power(ts: TokenStream) -> tuple[Monomial, ...]:
    base = _parse_atom(ts)
    if ts.accept("^"):
        n = ts.expect_int()
        out = (Monomial(0, 0),)
        for _ in range(n):
            out = _gens_product(out, base)
        return out
    return base


def _parse_atom(ts: TokenStream) -> tuple[Monomial, ...]:
    tok = ts.peek
    if ts.accept("("):
        gens = _parse_sum(ts)
        ts.expect(")")
        return gens
    if tok.kind == "int":
        if tok.text != "1":
            raise ParseError(f"only the unit ideal 1 may appear as a number, got {tok.text}", tok.pos)
        ts.next()
        return (Monomial(0, 0),)
    if tok.kind != "name":
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)
    ts.next()
    name = tok.text
    if name == "x":
        return (Monomial(1, 0),)
    if name == "y":
        return (Monomial(0, 1),)
    if name in ("m", "R"):
        return MAXIMAL.gens if name == "m" else UNIT.gens
    if name == "I" and ts.peek.text == "(":
        ts.expect("(")
        ns = [ts.expect_int()]
        while ts.accept(","):
            ns.append(ts.expect_int())
        ts.expect(")")
        return staircase_ideal(*ns).gens
    if name == "B" and ts.peek.text == "(":
        ts.expect("(")
        i = ts.expect_int()
        ts.expect(")")
        try:
            return make_B(i).gens
        except ValueError as exc:
            raise ParseError(str(exc), tok.pos) from None
    if name.startswith("I") and name[1:].isdigit():
        k = int(name[1:])
        if k < 1:
            raise ParseError("I_k needs k >= 1", tok.pos)
        return curvilinear(k).gens
    raise ParseError(f"unknown symbol {name!r}", tok.pos)
