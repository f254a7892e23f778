"""Exact privileged coordinates and nilpotent approximations of polynomial frames."""

__version__ = "0.1.0"

from .errors import (AlgebraError, BracketConditionError, CarnotError, DimensionError, FlowDomainError,
                     FrameError, ParseError, PreconditionError)
from .poly import Poly, WeightSequence
from .vf import VectorField, lie_bracket
from .frames import Frame, StructureConstants, structure_constants_at_base, validate_frame
from .privileged import (CoordinateChange, is_privileged, model_fields, privilege, psi_hat, pushforward,
                         weights_ok)
from .nilpotent import (CanonicalBasis, GradedLieAlgebra, NilpotentGroupLaw, class_membership, dynkin,
                        group_law, heisenberg_family, phi_Y)
from .numeric import FlowConfig, first_kind_rate_test, second_kind_rate_test
from .dsl import parse_field, parse_frame_doc

__all__ = [
    "__version__",
    "AlgebraError", "BracketConditionError", "CarnotError", "DimensionError", "FlowDomainError", "FrameError",
    "ParseError", "PreconditionError",
    "Poly", "WeightSequence", "VectorField", "lie_bracket",
    "Frame", "StructureConstants", "structure_constants_at_base", "validate_frame",
    "CoordinateChange", "is_privileged", "model_fields", "privilege", "psi_hat", "pushforward", "weights_ok",
    "CanonicalBasis", "GradedLieAlgebra", "NilpotentGroupLaw", "class_membership", "dynkin", "group_law",
    "heisenberg_family", "phi_Y",
    "FlowConfig", "first_kind_rate_test", "second_kind_rate_test",
    "parse_field", "parse_frame_doc",
    "PrivilegedCoordinates", "NilpotentApproximation", "CanonicalCoordinates",
]

_ESTIMATORS = ("PrivilegedCoordinates", "NilpotentApproximation", "CanonicalCoordinates")


def __getattr__(name):
    # scikit-learn is only imported when an estimator is asked for, which keeps the CLI start fast
    if name in _ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
