"""Two-dimensional fans: intersection numbers of boundary divisors and pullbacks.

Rays are listed clockwise.  A *standard* fan starts at (-1, 0) and ends at
(0, -1) without wrapping around; a *complete* fan is cyclic.  For a ray with
neighbours v' (before) and v'' (after) the self-intersection of its divisor is

    (v' ^ v'') / ((v' ^ v) (v ^ v''))

which is +1 on every line of the projective plane.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FanError


def wedge(v: Sequence[int], w: Sequence[int]) -> int:
    return v[0] * w[1] - v[1] * w[0]


@dataclass(frozen=True, order=True)
class Ray:
    """A primitive integer vector (p, q)."""

    p: int
    q: int

    def __post_init__(self):
        if (self.p, self.q) == (0, 0) or math.gcd(self.p, self.q) != 1:
            raise FanError(f"({self.p},{self.q}) is not a primitive vector")

    def __iter__(self):
        yield self.p
        yield self.q

    def __getitem__(self, i):
        return (self.p, self.q)[i]

    def __str__(self) -> str:
        return f"({self.p},{self.q})"

    @classmethod
    def of(cls, v) -> "Ray":
        return v if isinstance(v, Ray) else cls(*v)


class FanCase(enum.Enum):
    """Which substitution bounds the standard fan at (0, -1)."""

    M41 = "M41"
    M32 = "M32"


def ray_data(ray, case: FanCase = FanCase.M41) -> tuple[int, int]:
    """The pair (a, b) attached to a boundary divisor, from its primitive point (n, m)."""
    n, m = Ray.of(ray)
    if case is FanCase.M41:
        return m - n, 2 * m - 3 * n
    return m + n, 2 * m + n


@dataclass(frozen=True)
class FanDiagnostics:
    valid: bool
    errors: tuple[str, ...] = ()
    bounding_rays: tuple[Ray, ...] = ()
    unimodular: bool = False
    singular_cones: tuple[tuple[Ray, Ray], ...] = ()

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "errors": list(self.errors),
            "bounding_rays": [list(r) for r in self.bounding_rays],
            "unimodular": self.unimodular,
            "singular_cones": [[list(a), list(b)] for a, b in self.singular_cones],
        }


BOUNDING = (Ray(0, 1), Ray(1, 2))
START, END = Ray(-1, 0), Ray(0, -1)


def _angle(v) -> float:
    return math.atan2(v[1], v[0])


def validate_standard_fan(rays) -> FanDiagnostics:
    """Check the shape of a standard fan and report bounding rays and unimodularity."""
    if isinstance(rays, Fan2D):
        rays = rays.rays
    errors = []
    try:
        rs = [Ray.of(r) for r in rays]
    except FanError as exc:
        return FanDiagnostics(False, (str(exc),))
    if len(rs) < 2:
        errors.append("a standard fan needs at least the two terminal rays")
    else:
        if rs[0] != START:
            errors.append(f"first ray must be (-1,0), got {rs[0]}")
        if rs[-1] != END:
            errors.append(f"last ray must be (0,-1), got {rs[-1]}")
    if len(set(rs)) != len(rs):
        errors.append("duplicate rays")
    # Clockwise angle swept from (-1,0); the standard range ends at (0,-1).
    keys = [math.pi - _angle(r) for r in rs]
    if any(k > 1.5 * math.pi + 1e-12 for k in keys):
        errors.append("a ray lies outside the sweep from (-1,0) clockwise to (0,-1)")
    if any(k2 <= k1 for k1, k2 in zip(keys, keys[1:])):
        errors.append("rays are not in strict clockwise order")
    for r1, r2 in zip(rs, rs[1:]):
        if wedge(r1, r2) >= 0:
            errors.append(f"cone {r1},{r2} is not a strictly convex clockwise cone")
            break
    singular = tuple((r1, r2) for r1, r2 in zip(rs, rs[1:]) if abs(wedge(r1, r2)) != 1)
    bounding = tuple(r for r in BOUNDING if r in rs)
    return FanDiagnostics(not errors, tuple(errors), bounding, not singular, singular)


@dataclass(frozen=True)
class Fan2D:
    """An ordered list of rays, either a standard fan or a complete cyclic fan."""

    rays: tuple[Ray, ...]
    case: FanCase | None = FanCase.M41
    cyclic: bool = False
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        rays = tuple(Ray.of(r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        if self.cyclic:
            if len(rays) < 3 or len(set(rays)) != len(rays):
                raise FanError("a complete fan needs at least three distinct rays")
            for i in range(len(rays)):
                w = wedge(rays[i], rays[(i + 1) % len(rays)])
                if w >= 0:
                    raise FanError(f"cone {rays[i]},{rays[(i + 1) % len(rays)]} is not clockwise and convex")
        else:
            diag = validate_standard_fan(rays)
            if not diag.valid:
                raise FanError("; ".join(diag.errors))
        object.__setattr__(self, "_index", {r: i for i, r in enumerate(rays)})

    @classmethod
    def standard(cls, rays: Iterable, case: FanCase = FanCase.M41) -> "Fan2D":
        return cls(tuple(rays), case, False)

    @classmethod
    def complete(cls, rays: Iterable) -> "Fan2D":
        """A complete fan; the rays are sorted clockwise automatically."""
        rs = sorted({Ray.of(r) for r in rays}, key=lambda r: -_angle(r))
        return cls(tuple(rs), None, True)

    def __len__(self) -> int:
        return len(self.rays)

    def index(self, ray) -> int:
        try:
            return self._index[Ray.of(ray)]
        except KeyError:
            raise FanError(f"{Ray.of(ray)} is not a ray of this fan") from None

    def neighbor(self, i: int, step: int) -> int | None:
        j = i + step
        if self.cyclic:
            return j % len(self.rays)
        return j if 0 <= j < len(self.rays) else None

    @property
    def interior(self) -> tuple[Ray, ...]:
        return self.rays if self.cyclic else self.rays[1:-1]

    def ray_data(self, ray) -> tuple[int, int]:
        if self.case is None:
            raise FanError("ray data needs a standard fan with a case")
        return ray_data(ray, self.case)

    def __str__(self) -> str:
        return ";".join(str(r) for r in self.rays)


def parse_rays(text: str) -> list[Ray]:
    """Parse "(-1,0);(0,1);..." into rays."""
    out = []
    for chunk in text.replace(" ", "").split(";"):
        if not chunk:
            continue
        body = chunk.strip("()")
        try:
            p, q = (int(t) for t in body.split(","))
        except ValueError:
            raise FanError(f"cannot read ray {chunk!r}") from None
        out.append(Ray(p, q))
    return out


def adjacent_intersection(f: Fan2D, i: int, j: int | None = None) -> Fraction:
    """Intersection number of the divisors of adjacent rays i and i+1."""
    if j is None:
        j = f.neighbor(i, 1)
    if j is None or j not in (f.neighbor(i, 1), f.neighbor(i, -1)) or i == j:
        raise FanError(f"rays {i} and {j} are not adjacent")
    return Fraction(1, abs(wedge(f.rays[i], f.rays[j])))


def self_intersection(f: Fan2D, i: int) -> Fraction:
    prev, nxt = f.neighbor(i, -1), f.neighbor(i, 1)
    if prev is None or nxt is None:
        raise FanError(f"ray {f.rays[i]} does not have neighbours on both sides")
    u, v, w = f.rays[prev], f.rays[i], f.rays[nxt]
    return Fraction(wedge(u, w), wedge(u, v) * wedge(v, w))


def intersection_number(f: Fan2D, i: int, j: int) -> Fraction | None:
    """D_i . D_j, or None for the self-intersection of a terminal ray of a standard fan."""
    if i == j:
        if f.neighbor(i, -1) is None or f.neighbor(i, 1) is None:
            return None
        return self_intersection(f, i)
    if j in (f.neighbor(i, 1), f.neighbor(i, -1)):
        return adjacent_intersection(f, i, j)
    return Fraction(0)


def intersection_matrix(f: Fan2D) -> list[list[Fraction | None]]:
    n = len(f.rays)
    return [[intersection_number(f, i, j) for j in range(n)] for i in range(n)]


def divisor_square(f: Fan2D, coeffs: dict) -> Fraction:
    """Self-intersection of sum coeffs[ray] * D(ray)."""
    items = [(f.index(r), Fraction(c)) for r, c in coeffs.items() if c]
    total = Fraction(0)
    for i, a in items:
        for j, b in items:
            x = intersection_number(f, i, j)
            if x is None:
                raise FanError("square involves a terminal ray of a standard fan")
            total += a * b * x
    return total


def pullback_divisor(coarse: Fan2D, fine: Fan2D, ray) -> list[tuple[Ray, Fraction]]:
    """Pull back the divisor of ``ray`` from ``coarse`` to the subdivision ``fine``.

    A fine ray v strictly between ray r1 and a coarse neighbour r2 gets the
    coefficient l1 where v = l1 v(r1) + l2 v(r2).  The ray itself gets 1 and
    every other ray 0.
    """
    r1 = Ray.of(ray)
    ci = coarse.index(r1)
    positions = []
    for r in coarse.rays:
        if r not in fine._index:
            raise FanError(f"fine fan does not refine the coarse fan (missing {r})")
        positions.append(fine.index(r))
    n = len(fine.rays)
    order = [(p - positions[0]) % n for p in positions] if fine.cyclic else positions
    if order != sorted(order) or len(set(order)) != len(order):
        raise FanError("fine fan lists the coarse rays in a different order")
    coeff = {r: Fraction(0) for r in fine.rays}
    coeff[r1] = Fraction(1)
    for step in (-1, 1):
        cj = coarse.neighbor(ci, step)
        if cj is None:
            continue
        r2 = coarse.rays[cj]
        det = wedge(r1, r2)
        k = fine.index(r1)
        while True:
            k = fine.neighbor(k, step)
            if k is None or fine.rays[k] == r2:
                break
            v = fine.rays[k]
            if v in coarse._index:
                raise FanError("fine fan does not refine the coarse fan")
            coeff[v] = Fraction(wedge(v, r2), det)
    return [(r, coeff[r]) for r in fine.rays]


REFERENCE_FAN_RAYS = ((-1, 0), (0, 1), (1, 4), (1, 3), (2, 5), (1, 2), (0, -1))


def reference_fan() -> Fan2D:
    """The standard fan through (0,1), (1,4), (1,3), (2,5) and (1,2)."""
    return Fan2D.standard(REFERENCE_FAN_RAYS, FanCase.M41)
