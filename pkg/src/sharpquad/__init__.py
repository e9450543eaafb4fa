"""Exact node-and-weight rules for rational functions on circles, the real line and [-1, 1]."""

__version__ = "0.1.0"

from .blaschke import (  # noqa: E402
    CircleBlaschke,
    CirclePoleConfig,
    HalfPlaneBlaschke,
    HalfPlanePoleConfig,
    NodeSet,
    SegmentPoleConfig,
    blaschke_system,
    segment_pullback,
    solve_nodes,
)
from .oracle import OracleResult, integrate_circle, integrate_real_line, integrate_segment_weighted, lp_norm  # noqa: E402
from .quadrature import (  # noqa: E402
    QuadratureRule,
    check_admissible,
    circle_integral,
    circle_l2,
    circle_l2m,
    halfplane_l2,
    segment_integral,
    segment_l2,
    spf_l2_identities,
)
from .rational import INFINITY, RationalFunction, SimplePartialFraction, Term, evaluate  # noqa: E402
from .sharp import InequalityReport, extremal_circle, mu_l2_closed, spf_l2_closed  # noqa: E402
