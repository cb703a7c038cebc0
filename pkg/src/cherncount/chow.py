"""Graded quotient rings with exact normal forms.

Five rings are supported.  All of them contain the surface classes D, c1
(degree 1) and c2 (degree 2); any product of surface classes of degree above
two vanishes.

    S      surface classes only, top degree 2
    B      S[h2] / (h2^2 + c1 h2 + c2), top degree 3
    C23    B[h3] / ((h3 + 2 h2 + 2 c1)(h3 - h2)), top degree 4
    C22P   B[h3p] / (h3p^2 + c1 h3p + c2), top degree 4
    Y      B[D1..Dr] / boundary relations of a standard fan, top degree 5

Normal forms are computed once per ring by row reducing, degree by degree,
the span of all relation multiples (a Macaulay matrix) against a monomial
order that eliminates fiber squares first.  Every monomial up to the top
degree gets a precomputed normal form, so reduction is a table lookup.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from ._lexer import TokenStream
from .errors import ParseError, RingError
from .fan import Fan2D, Ray, adjacent_intersection, reference_fan, self_intersection


class RingKind(enum.Enum):
    S = "S"
    B = "B"
    C23 = "C23"
    C22P = "C22P"
    Y = "Y"

    @classmethod
    def parse(cls, text) -> "RingKind":
        if isinstance(text, RingKind):
            return text
        try:
            return cls(str(text).upper().replace("'", "P"))
        except ValueError:
            raise RingError(f"unknown ring kind {text!r}") from None


SURFACE_NAMES = ("D", "c1", "c2")
SURFACE_DEGREES = (1, 1, 2)


# ---------------------------------------------------------------------------
# Surface polynomials


_SURFACE_KEYS = ("D2", "Dc1", "c1sq", "c2")
_SURFACE_EXPONENTS = {(2, 0, 0): "D2", (1, 1, 0): "Dc1", (0, 2, 0): "c1sq", (0, 0, 1): "c2"}
_SURFACE_SYMBOLS = {"D2": "D^2", "Dc1": "Dc1", "c1sq": "c1^2", "c2": "c2"}


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class SurfacePoly:
    """An exact combination of D^2, D c1, c1^2 and c2."""

    D2: Fraction = Fraction(0)
    Dc1: Fraction = Fraction(0)
    c1sq: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)

    def __post_init__(self):
        for k in _SURFACE_KEYS:
            object.__setattr__(self, k, Fraction(getattr(self, k)))

    @classmethod
    def of(cls, D2=0, Dc1=0, c1sq=0, c2=0) -> "SurfacePoly":
        return cls(Fraction(D2), Fraction(Dc1), Fraction(c1sq), Fraction(c2))

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(getattr(self, k) for k in _SURFACE_KEYS)

    def __add__(self, other: "SurfacePoly") -> "SurfacePoly":
        return SurfacePoly(*(a + b for a, b in zip(self.coefficients(), other.coefficients())))

    def __sub__(self, other: "SurfacePoly") -> "SurfacePoly":
        return SurfacePoly(*(a - b for a, b in zip(self.coefficients(), other.coefficients())))

    def __neg__(self) -> "SurfacePoly":
        return SurfacePoly(*(-a for a in self.coefficients()))

    def scale(self, c) -> "SurfacePoly":
        return SurfacePoly(*(Fraction(c) * a for a in self.coefficients()))

    def __bool__(self) -> bool:
        return any(self.coefficients())

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coefficients())

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        """Substitute numbers for the four intersection numbers."""
        return sum((getattr(self, k) * Fraction(values[k]) for k in _SURFACE_KEYS), Fraction(0))

    def render(self) -> str:
        parts = []
        for k in _SURFACE_KEYS:
            c = getattr(self, k)
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = format_rational(abs(c))
            body = _SURFACE_SYMBOLS[k] if mag == "1" else f"{mag}{_SURFACE_SYMBOLS[k]}"
            parts.append((sign, body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = render

    def to_json(self) -> dict:
        return {k: format_rational(getattr(self, k)) for k in _SURFACE_KEYS}


# ---------------------------------------------------------------------------
# Rings


Mono = tuple  # exponent vector over the ring's generators


class RingSpec:
    """A presented graded ring with precomputed normal forms.

    Build instances through :func:`make_ring`, which caches them.
    """

    def __init__(self, kind: RingKind, fan: Fan2D | None = None, relations: str = "full"):
        self.kind = kind
        self.fan = fan
        self.relation_set = relations
        names = list(SURFACE_NAMES)
        degrees = list(SURFACE_DEGREES)
        if kind is not RingKind.S:
            names.append("h2")
            degrees.append(1)
        if kind is RingKind.C23:
            names.append("h3")
            degrees.append(1)
        elif kind is RingKind.C22P:
            names.append("h3p")
            degrees.append(1)
        self.ray_ab: tuple[tuple[int, int], ...] = ()
        self.self_int: tuple[Fraction | None, ...] = ()
        if kind is RingKind.Y:
            if fan is None:
                raise RingError("the Y ring needs a standard fan")
            if fan.cyclic or fan.case is None:
                raise RingError("the Y ring needs a standard (non-cyclic) fan")
            from .fan import validate_standard_fan

            diag = validate_standard_fan(fan)
            if not diag.valid or not diag.unimodular:
                raise RingError("the Y ring needs a valid standard fan with unimodular cones")
            r = len(fan.rays) - 2
            if r < 2:
                raise RingError("the Y ring needs at least two interior rays")
            names += [f"D{k}" for k in range(1, r + 1)]
            degrees += [1] * r
            self.ray_ab = tuple(fan.ray_data(v) for v in fan.rays)
            self.self_int = (None,) + tuple(self_intersection(fan, k) for k in range(1, r + 1)) + (None,)
        elif fan is not None:
            raise RingError(f"ring {kind.value} takes no fan")
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.n = len(names)
        self.top = {RingKind.S: 2, RingKind.B: 3, RingKind.C23: 4, RingKind.C22P: 4, RingKind.Y: 5}[kind]
        self._index = {nm: i for i, nm in enumerate(names)}
        self._first_boundary = 4 if kind is RingKind.Y else self.n
        self._nf: dict[Mono, tuple[tuple[Mono, Fraction], ...]] = {}
        self._build()

    # -- monomials ---------------------------------------------------------

    @property
    def rank_boundary(self) -> int:
        return self.n - self._first_boundary

    def degree(self, m: Mono) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def surface_degree(self, m: Mono) -> int:
        return m[0] + m[1] + 2 * m[2]

    def is_zero_monomial(self, m: Mono) -> bool:
        if self.surface_degree(m) > 2 or self.degree(m) > self.top:
            return True
        if self.kind is RingKind.Y:
            support = [k for k, e in enumerate(m[self._first_boundary:]) if e]
            if support and support[-1] - support[0] >= 2:
                return True
        return False

    def monomials(self, d: int) -> list[Mono]:
        """Nonzero monomials of degree d."""
        cache = self.__dict__.setdefault("_mono_cache", {})
        if d not in cache:
            cache[d] = [m for m in _exponents(self.degrees, d) if not self.is_zero_monomial(m)]
        return cache[d]

    def _order_key(self, m: Mono):
        fiber = m[3:]
        return (sum(max(0, e - 1) for e in fiber), fiber, m[:3])

    # -- raw polynomial arithmetic (no reduction) --------------------------

    def _mul_raw(self, p: dict, q: dict) -> dict:
        out: dict = {}
        for a, x in p.items():
            for b, y in q.items():
                m = tuple(i + j for i, j in zip(a, b))
                if self.is_zero_monomial(m):
                    continue
                v = out.get(m, 0) + x * y
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def _var(self, name: str) -> dict:
        e = [0] * self.n
        e[self._index[name]] = 1
        return {tuple(e): Fraction(1)}

    def _relations(self) -> list[dict]:
        var = self._var

        def lin(*pairs) -> dict:
            out: dict = {}
            for c, p in pairs:
                for m, v in p.items():
                    out[m] = out.get(m, 0) + c * v
            return {m: v for m, v in out.items() if v}

        rels = []
        if self.kind is RingKind.S:
            return rels
        c1, c2, h2 = var("c1"), var("c2"), var("h2")
        mul = self._mul_raw
        rels.append(lin((1, mul(h2, h2)), (1, mul(c1, h2)), (1, c2)))
        if self.kind is RingKind.C23:
            h3 = var("h3")
            rels.append(lin((1, mul(h3, h3)), (1, mul(h2, h3)), (2, mul(c1, h3)),
                            (-2, mul(h2, h2)), (-2, mul(c1, h2))))
        elif self.kind is RingKind.C22P:
            h3p = var("h3p")
            rels.append(lin((1, mul(h3p, h3p)), (1, mul(c1, h3p)), (1, c2)))
        elif self.kind is RingKind.Y:
            r = self.rank_boundary
            Dk = [None] + [var(f"D{k}") for k in range(1, r + 1)]

            def eta(k):
                a, b = self.ray_ab[k]
                return lin((a, h2), (b, c1), (b, h2))

            s = self.self_int
            # D_k^2 = s_k D_k D_{k-1} + D_k eta(k+1)            (1 < k <= r)
            # D_k^2 = s_k D_k D_{k+1} - D_k eta(k-1)            (1 <= k < r)
            low = range(2, r + 1)
            high = range(1, r) if self.relation_set == "full" else range(1, min(2, r))
            for k in low:
                rels.append(lin((1, mul(Dk[k], Dk[k])), (-s[k], mul(Dk[k], Dk[k - 1])),
                                (-1, mul(Dk[k], eta(k + 1)))))
            for k in high:
                rels.append(lin((1, mul(Dk[k], Dk[k])), (-s[k], mul(Dk[k], Dk[k + 1])),
                                (1, mul(Dk[k], eta(k - 1)))))
        return rels

    def _build(self) -> None:
        rels = self._relations()
        for d in range(self.top + 1):
            cols = sorted(self.monomials(d), key=self._order_key, reverse=True)
            idx = {m: i for i, m in enumerate(cols)}
            pivots: dict[int, dict[int, Fraction]] = {}
            for rel in rels:
                rd = self.degree(next(iter(rel)))
                if rd > d:
                    continue
                for m in self.monomials(d - rd):
                    row_poly = self._mul_raw({m: Fraction(1)}, rel)
                    if not row_poly:
                        continue
                    row = {idx[k]: v for k, v in row_poly.items()}
                    # forward elimination on leading entries only
                    while row:
                        lead = min(row)
                        piv = pivots.get(lead)
                        if piv is None:
                            f = row[lead]
                            pivots[lead] = {k: v / f for k, v in row.items()}
                            break
                        f = row[lead]
                        for k, v in piv.items():
                            nv = row.get(k, 0) - f * v
                            if nv:
                                row[k] = nv
                            else:
                                row.pop(k, None)
            # back substitution, latest pivots first
            for lead in sorted(pivots, reverse=True):
                row = pivots[lead]
                for c in sorted(k for k in row if k != lead and k in pivots):
                    if c not in row:
                        continue
                    f = row[c]
                    for k, v in pivots[c].items():
                        nv = row.get(k, 0) - f * v
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
            for i, m in enumerate(cols):
                if i in pivots:
                    self._nf[m] = tuple((cols[k], -v) for k, v in sorted(pivots[i].items()) if k != i)
                else:
                    self._nf[m] = ((m, Fraction(1)),)

    # -- public helpers -------------------------------------------------------

    def normal_form(self, poly: Mapping[Mono, Fraction]) -> dict:
        out: dict = {}
        for m, c in poly.items():
            if not c or self.is_zero_monomial(m):
                continue
            for mm, v in self._nf[m]:
                nv = out.get(mm, 0) + c * v
                if nv:
                    out[mm] = nv
                else:
                    out.pop(mm, None)
        return out

    def standard_monomials(self, d: int) -> list[Mono]:
        return [m for m in self.monomials(d) if self._nf[m] == ((m, Fraction(1)),)]

    def gen(self, name: str) -> "ChowClass":
        if name not in self._index:
            raise RingError(f"ring {self.kind.value} has no generator {name!r}")
        return ChowClass(self, self._var(name))

    def boundary(self, k: int) -> "ChowClass":
        """The boundary divisor D_k (1-based, interior rays of the fan)."""
        return self.gen(f"D{k}")

    def ray_divisor(self, ray) -> "ChowClass":
        """The boundary divisor of an interior ray of the fan."""
        if self.fan is None:
            raise RingError("ray divisors only exist in the Y ring")
        i = self.fan.index(Ray.of(ray))
        if not 1 <= i <= self.rank_boundary:
            raise RingError(f"{Ray.of(ray)} is not an interior ray")
        return self.boundary(i)

    @property
    def one(self) -> "ChowClass":
        return ChowClass(self, {(0,) * self.n: Fraction(1)})

    @property
    def zero(self) -> "ChowClass":
        return ChowClass(self, {})

    def scalar(self, c) -> "ChowClass":
        return self.one * Fraction(c)

    def __repr__(self) -> str:
        extra = f", fan={self.fan}" if self.fan is not None else ""
        return f"RingSpec({self.kind.value}{extra})"


def _exponents(degrees: tuple, d: int):
    """Exponent vectors of weighted degree exactly d."""
    if len(degrees) == 1:
        if d % degrees[0] == 0:
            yield (d // degrees[0],)
        return
    for e in range(d // degrees[0] + 1):
        for rest in _exponents(degrees[1:], d - e * degrees[0]):
            yield (e,) + rest


@lru_cache(maxsize=None)
def make_ring(kind, fan: Fan2D | None = None, relations: str = "full") -> RingSpec:
    """Cached ring constructor.

    ``relations="oriented"`` installs only one boundary relation per D_k
    (the k >= 2 form, plus the other form for k = 1); it exists to study the
    smaller presentation and is not used by the counts.
    """
    kind = RingKind.parse(kind)
    if kind is RingKind.Y and fan is None:
        fan = reference_fan()
    if relations not in ("full", "oriented"):
        raise RingError(f"unknown relation set {relations!r}")
    return RingSpec(kind, fan, relations)


# ---------------------------------------------------------------------------
# Elements


class ChowClass:
    """An immutable ring element kept in normal form."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: RingSpec, terms: Mapping[Mono, Fraction] = (), _reduced: bool = False):
        object.__setattr__(self, "ring", ring)
        terms = dict(terms)
        object.__setattr__(self, "_terms", terms if _reduced else ring.normal_form(terms))

    def __setattr__(self, name, value):
        raise AttributeError("ChowClass is immutable")

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def _coerce(self, other) -> "ChowClass":
        if isinstance(other, ChowClass):
            if other.ring is not self.ring:
                raise RingError("classes live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return ChowClass(self.ring, out, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.ring, {m: -c for m, c in self._terms.items()}, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero
            return ChowClass(self.ring, {m: c * other for m, c in self._terms.items()}, _reduced=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ChowClass(self.ring, self.ring._mul_raw(self._terms, other._terms))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise RingError("negative power")
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        return isinstance(other, ChowClass) and other.ring is self.ring and other._terms == self._terms

    def __hash__(self) -> int:
        return hash((id(self.ring), frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def part(self, d: int) -> "ChowClass":
        """The homogeneous component of degree d."""
        return ChowClass(self.ring, {m: c for m, c in self._terms.items() if self.ring.degree(m) == d},
                         _reduced=True)

    def degrees(self) -> set[int]:
        return {self.ring.degree(m) for m in self._terms}

    def is_homogeneous(self, d: int | None = None) -> bool:
        ds = self.degrees()
        return not ds or (len(ds) == 1 and (d is None or ds == {d}))

    def coefficient(self, name_exponents: Mapping[str, int]) -> Fraction:
        e = [0] * self.ring.n
        for nm, k in name_exponents.items():
            e[self.ring._index[nm]] = k
        return self._terms.get(tuple(e), Fraction(0))

    def render(self) -> str:
        if not self._terms:
            return "0"
        ring = self.ring
        items = sorted(self._terms.items(),
                       key=lambda t: (-ring.degree(t[0]), tuple(-e for e in t[0][3:]), tuple(-e for e in t[0][:3])))
        out = ""
        for i, (m, c) in enumerate(items):
            factors = []
            for nm, e in zip(ring.names, m):
                if e == 1:
                    factors.append(nm)
                elif e > 1:
                    factors.append(f"{nm}^{e}")
            mag = abs(c)
            body = "*".join(factors)
            if not body:
                text = format_rational(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{format_rational(mag)}*{body}"
            if i == 0:
                out = ("-" if c < 0 else "") + text
            else:
                out += (" - " if c < 0 else " + ") + text
        return out

    __str__ = render

    def __repr__(self) -> str:
        return f"ChowClass({self.ring.kind.value}: {self.render()})"


def substitute_generators(x: ChowClass, target: RingSpec, images: Mapping[str, ChowClass] | None = None) -> ChowClass:
    """Ring map sending each generator of x's ring to a class of ``target``.

    Generators not named in ``images`` go to the generator of the same name.
    """
    images = dict(images or {})
    gens = []
    for nm in x.ring.names:
        gens.append(images[nm] if nm in images else target.gen(nm))
    out = target.zero
    for m, c in x._terms.items():
        term = target.scalar(c)
        for g, e in zip(gens, m):
            if e:
                term = term * g**e
        out = out + term
    return out


# ---------------------------------------------------------------------------
# Integration


def integrate(x: ChowClass) -> SurfacePoly:
    """Push a top-degree class down to the surface and read off intersection numbers."""
    ring = x.ring
    if not x.is_homogeneous(ring.top):
        raise RingError(f"integrate needs a class homogeneous of degree {ring.top}, got degrees {sorted(x.degrees())}")
    acc = {k: Fraction(0) for k in _SURFACE_KEYS}
    for m, c in x._terms.items():
        surface, fiber = m[:3], m[3:]
        weight = _fiber_weight(ring, fiber)
        acc[_SURFACE_EXPONENTS[surface]] += weight * c
    return SurfacePoly(**acc)


def _fiber_weight(ring: RingSpec, fiber: tuple) -> Fraction:
    kind = ring.kind
    if kind is RingKind.S:
        if fiber:
            raise RingError("unexpected fiber class over S")
        return Fraction(1)
    if kind is RingKind.B:
        if fiber == (1,):
            return Fraction(1)
    elif kind in (RingKind.C23, RingKind.C22P):
        if fiber == (1, 1):
            return Fraction(1)
    else:
        h2, ds = fiber[0], fiber[1:]
        support = [k for k, e in enumerate(ds) if e]
        if h2 == 1 and len(support) == 2 and all(ds[k] == 1 for k in support) \
                and support[1] == support[0] + 1:
            k = support[0] + 1  # fan index of D_k
            return adjacent_intersection(ring.fan, k, k + 1)
    raise RingError(f"top-degree normal form contains unexpected fiber monomial {fiber} in {kind.value}")


# ---------------------------------------------------------------------------
# Parsing


def parse_class(text: str, ring: RingSpec) -> ChowClass:
    """Parse a class expression such as ``h3^2 + 2*h3*h2 - 1/2*c1*D(1,4)``.

    Symbols are the ring's generator names; ``h3'`` is accepted for ``h3p``
    and ``D(p,q)`` names the boundary divisor of an interior ray.
    """
    ts = TokenStream(text)
    out = _parse_expr(ts, ring)
    ts.expect_end()
    return out


def _parse_expr(ts: TokenStream, ring: RingSpec) -> ChowClass:
    ts.accept("+")
    out = _parse_term(ts, ring)
    while True:
        if ts.accept("+"):
            out = out + _parse_term(ts, ring)
        elif ts.accept("-"):
            out = out - _parse_term(ts, ring)
        else:
            return out


def _parse_term(ts: TokenStream, ring: RingSpec) -> ChowClass:
    out = _parse_factor(ts, ring)
    while True:
        if ts.accept("*"):
            out = out * _parse_factor(ts, ring)
        elif ts.accept("/"):
            tok = ts.peek
            d = ts.expect_int()
            if d == 0:
                raise ParseError("division by zero", tok.pos)
            out = out * Fraction(1, d)
        else:
            return out


def _parse_factor(ts: TokenStream, ring: RingSpec) -> ChowClass:
    base = _parse_atom(ts, ring)
    if ts.accept("^"):
        return base ** ts.expect_int()
    return base


def _parse_atom(ts: TokenStream, ring: RingSpec) -> ChowClass:
    tok = ts.peek
    if ts.accept("("):
        out = _parse_expr(ts, ring)
        ts.expect(")")
        return out
    if ts.accept("-"):
        return -_parse_factor(ts, ring)
    if tok.kind == "int":
        ts.next()
        return ring.scalar(int(tok.text))
    if tok.kind != "name":
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)
    ts.next()
    name = tok.text.replace("'", "p")
    if name == "D" and ts.peek.text == "(" and ts.peek_at(1).kind in ("int", "op") and ring.kind is RingKind.Y:
        ts.expect("(")
        neg_p = ts.accept("-")
        p = ts.expect_int() * (-1 if neg_p else 1)
        ts.expect(",")
        neg_q = ts.accept("-")
        q = ts.expect_int() * (-1 if neg_q else 1)
        ts.expect(")")
        try:
            return ring.ray_divisor((p, q))
        except Exception as exc:
            raise ParseError(str(exc), tok.pos) from None
    if name not in ring.names:
        raise ParseError(f"ring {ring.kind.value} has no generator {tok.text!r}", tok.pos)
    return ring.gen(name)
