"""Exact Chern-class counts of plane curves with x^2 + y^i singularities.

The package is layered: monomial ideals (``ideals``), their flat limits
(``limits``), toric fans (``fan``), Chow rings (``chow``), Chern classes
(``chern``) and the end-to-end counts (``pipeline``).
"""

from .chern import (
    TABLE3,
    ChernPoly,
    MultiplicityConstraint,
    build_constraints,
    c1_quotient,
    chern_of_filtration,
    solve_multiplicities,
    table3_c1,
    twist,
    whitney,
)
from .chow import ChowClass, RingKind, RingSpec, SurfacePoly, integrate, make_ring, parse_class
from .errors import CherncountError
from .fan import (
    Fan2D,
    FanCase,
    Ray,
    adjacent_intersection,
    pullback_divisor,
    reference_fan,
    self_intersection,
    validate_standard_fan,
    wedge,
)
from .ideals import (
    Filtration,
    MeasuringSequence,
    Monomial,
    MonomialIdeal,
    colength,
    filtration,
    integral_closure,
    make_B,
    measuring_sequence,
    parse_ideal,
    quadratic_transform,
    staircase_ideal,
)
from .limits import DegenerationDirection, degeneration_ideal, limit_at_infinity, quotient_monomial, substitute
from .pipeline import PUBLISHED_VALUES, CountReport, MatchStatus, count, report_all, specialize

__version__ = "0.1.0"
