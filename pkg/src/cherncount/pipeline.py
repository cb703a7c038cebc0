"""End-to-end counts N_i of curves with an x^2 + y^i singularity.

N_i is the degree of a Chern class of V(B_i) twisted by the line bundle L
with c1(L) = D, taken over the space on which the condition has the expected
dimension:

    i = 2       the surface S
    i = 3, 4    the projectivised tangent bundle B
    i = 5, 6    the space C23 over B
    i = 7, 8    the toric compactification Y over B
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .chern import ChernPoly, step_provider, twist, chern_of_filtration, whitney
from .chow import ChowClass, RingKind, SurfacePoly, integrate, make_ring
from .errors import ChernError, CherncountError
from .fan import FanCase
from .ideals import filtration, make_B

PUBLISHED_VALUES: dict[int, SurfacePoly] = {
    2: SurfacePoly.of(6, 4, 0, 2),
    3: SurfacePoly.of(12, 12, 2, 2),
    4: SurfacePoly.of(50, 64, 17, 5),
    5: SurfacePoly.of(180, 280, 100, 0),
    6: SurfacePoly.of(630, 1140, 498, -60),
    7: SurfacePoly.of(2128, 4368, 2232, -424),
    8: SurfacePoly.of(7272, 16544, 9548, -2148),
}

DEFAULT_AMBIENT = {2: RingKind.S, 3: RingKind.B, 4: RingKind.B, 5: RingKind.C23,
                   6: RingKind.C23, 7: RingKind.Y, 8: RingKind.Y}
CONDITION_DEGREE = {RingKind.S: 2, RingKind.B: 3, RingKind.C23: 4, RingKind.Y: 5}
ALLOWED_AMBIENTS = {2: (RingKind.S,), 3: (RingKind.B, RingKind.C23), 4: (RingKind.B, RingKind.C23),
                    5: (RingKind.C23,), 6: (RingKind.C23,), 7: (RingKind.Y,), 8: (RingKind.Y,)}


class MatchStatus(enum.Enum):
    MATCH = "match"
    DISCREPANCY = "discrepancy"
    UNVERIFIED = "unverified"


@dataclass(frozen=True)
class CountReport:
    i: int
    ambient: RingKind
    rank: int
    chern_top: ChowClass
    result: SurfacePoly
    published_value: SurfacePoly | None
    match: MatchStatus

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "ambient": self.ambient.value,
            "rank": self.rank,
            "result": self.result.to_json(),
            "published": self.published_value.to_json() if self.published_value is not None else None,
            "match": self.match is MatchStatus.MATCH,
            "status": self.match.value,
        }

    def render(self) -> str:
        line = f"N{self.i} = {self.result.render()}  [{self.ambient.value}, rank {self.rank}] {self.match.value}"
        if self.match is MatchStatus.DISCREPANCY:
            line += f" (published: {self.published_value.render()})"
        return line


def _natural_kind(i: int) -> RingKind:
    return DEFAULT_AMBIENT[i]


def count(i: int, ambient=None, table: Mapping | None = None) -> CountReport:
    """Compute N_i.

    ``ambient`` may override the ring for i = 3, 4 (B or C23).  A replacement
    ``table`` of first Chern classes changes the classes used for i = 7, 8;
    such reports are marked unverified.
    """
    if i not in DEFAULT_AMBIENT:
        raise CherncountError(f"N_i is available for i = 2..8, not {i}")
    kind = _natural_kind(i) if ambient is None else RingKind.parse(ambient)
    if kind not in ALLOWED_AMBIENTS[i]:
        allowed = ", ".join(k.value for k in ALLOWED_AMBIENTS[i])
        raise CherncountError(f"N_{i} cannot be computed over {kind.value} (use {allowed})")
    ring = make_ring(kind)
    target = make_B(i)
    rank = target.colength()
    D = ring.gen("D")
    try:
        if i == 2:
            # R/I1 is trivial and I1/I1^2 is the cotangent bundle, of total class 1 + c1 + c2.
            cot = ChernPoly.from_total(2, ring.one + ring.gen("c1") + ring.gen("c2"))
            chern = whitney(ChernPoly.trivial(ring, 1), cot)
        else:
            chern = chern_of_filtration(filtration(target), step_provider(ring, FanCase.M41, table), ring)
    except CherncountError as exc:
        raise type(exc)(f"while computing N_{i}: {exc}") from exc
    if chern.rank != rank:
        raise ChernError(f"rank {chern.rank} differs from colength {rank}")
    twisted = twist(chern, D)
    natural = CONDITION_DEGREE[_natural_kind(i)]
    top = twisted.c(natural)
    if natural < ring.top:
        # pull the class back along the P^1-bundle C23 -> B and cap with the fiber class
        top = top * ring.gen("h3")
    result = integrate(top)
    published = PUBLISHED_VALUES.get(i) if table is None else None
    if published is None:
        status = MatchStatus.UNVERIFIED
    else:
        status = MatchStatus.MATCH if published == result else MatchStatus.DISCREPANCY
    return CountReport(i, kind, rank, top, result, PUBLISHED_VALUES.get(i), status)


def report_all(table: Mapping | None = None) -> list[CountReport]:
    return [count(i, table=table) for i in range(2, 9)]


def surface_numbers(surface: str, d: int | None = None) -> dict[str, Fraction]:
    """Intersection numbers of a concrete surface with L of degree d."""
    if surface.lower() in ("p2", "projective_plane"):
        if d is None:
            raise CherncountError("the plane needs a curve degree d")
        return {"D2": Fraction(d * d), "Dc1": Fraction(-3 * d), "c1sq": Fraction(9), "c2": Fraction(3)}
    raise CherncountError(f"unknown surface {surface!r}")


def specialize(p: SurfacePoly, surface="P2", d: int | None = None) -> Fraction:
    """Evaluate ``p`` on a surface, given by name ("P2", with degree d) or by a mapping of numbers."""
    if isinstance(surface, Mapping):
        return p.evaluate(surface)
    return p.evaluate(surface_numbers(surface, d))
