"""Exact arithmetic and SAGBI bases in skew PBW extensions."""

from .algebra import Algebra, MonomialOrder, Presentation, StdPoly, validate
from .coefficients import CoefficientRing, Scalar, ScalarField, SigmaAction
from .compose import (Composition, check_admissible, check_commutation,
                      check_nonequality_compatible, check_order_compatible, substitute)
from .errors import SPBWError
from .io import FIXTURES, load_algebra, load_fixture
from .sagbi import (Caps, FSet, candidates, critical_pairs, height, membership, reduces,
                    sagbi_build, sagbi_test, snf, span_membership, t_polynomial)

__all__ = [
    "Algebra", "MonomialOrder", "Presentation", "StdPoly", "validate",
    "CoefficientRing", "Scalar", "ScalarField", "SigmaAction",
    "Composition", "check_admissible", "check_commutation",
    "check_nonequality_compatible", "check_order_compatible", "substitute",
    "SPBWError", "FIXTURES", "load_algebra", "load_fixture",
    "Caps", "FSet", "candidates", "critical_pairs", "height", "membership", "reduces",
    "sagbi_build", "sagbi_test", "snf", "span_membership", "t_polynomial",
]
