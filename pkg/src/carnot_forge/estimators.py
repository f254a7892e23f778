"""scikit-learn style wrappers.

``fit`` takes a :class:`~carnot_forge.frames.Frame` (or a frame document) instead of a data matrix;
``transform`` then acts on arrays of points of shape ``(m, n)``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dsl import parse_frame_doc
from .errors import DimensionError, PreconditionError
from .frames import Frame, structure_constants_at_base, validate_frame
from .nilpotent import CanonicalBasis, GradedLieAlgebra, check_law, law_from_basis
from .numeric import CompiledMap, FlowConfig, exp_X, gamma_X, second_kind_map
from .privileged import is_privileged, model_fields, privilege


def _as_frame(frame) -> Frame:
    if isinstance(frame, Frame):
        return frame
    if isinstance(frame, (str, bytes, dict)):
        return parse_frame_doc(frame)[0]
    raise TypeError("expected a Frame or a frame document")


def _points(X, n: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != n:
        raise DimensionError(f"expected points of shape (m, {n})")
    return X


class PrivilegedCoordinates(TransformerMixin, BaseEstimator):
    """Fit ``psi = psi_hat o T`` to a frame; ``transform`` evaluates ``psi`` on points."""

    def __init__(self, jet_order=None, check_valid=True):
        self.jet_order = jet_order
        self.check_valid = check_valid

    def fit(self, frame, y=None):
        frame = _as_frame(frame)
        if self.check_valid:
            rep = validate_frame(frame, self.jet_order)
            if not rep.valid:
                raise PreconditionError(f"frame violates the bracket condition: {rep.violations[0]}")
        result = privilege(frame)
        self.result_ = result
        self.psi_ = result.psi
        self.frame_ = result.frame
        self.verdict_ = result.report.verdict
        self.n_features_in_ = frame.n
        self._fwd = CompiledMap(result.psi.forward)
        self._inv = CompiledMap(result.psi.inverse)
        return self

    def transform(self, X):
        check_is_fitted(self, "psi_")
        return self._fwd(_points(X, self.n_features_in_))

    def inverse_transform(self, X):
        check_is_fitted(self, "psi_")
        if not self.psi_.exact:
            raise PreconditionError("the inverse is only known as a jet")
        return self._inv(_points(X, self.n_features_in_))


class NilpotentApproximation(TransformerMixin, BaseEstimator):
    """Model fields, graded algebra and group law at the origin.

    ``transform`` maps points into the privileged chart where the model lives (identity when the
    frame is already privileged); :meth:`multiply` evaluates the group law.
    """

    def __init__(self, auto=True, assoc_budget=12, trials=1000, seed=0):
        self.auto = auto
        self.assoc_budget = assoc_budget
        self.trials = trials
        self.seed = seed

    def fit(self, frame, y=None):
        frame = _as_frame(frame)
        self.n_features_in_ = frame.n
        if is_privileged(frame).verdict:
            self.chart_ = None
            pframe = frame
        elif self.auto:
            res = privilege(frame)
            self.chart_ = res.psi
            pframe = res.frame
        else:
            raise PreconditionError("frame is not privileged; set auto=True")
        self.model_fields_ = model_fields(pframe)
        self.structure_constants_ = structure_constants_at_base(pframe)
        self.algebra_ = GradedLieAlgebra(pframe.weights, self.structure_constants_)
        self.basis_ = CanonicalBasis(self.model_fields_)
        self.law_ = law_from_basis(self.basis_)
        self.checks_ = check_law(self.law_, self.basis_, self.algebra_, self.assoc_budget, self.trials, self.seed)
        self._law = CompiledMap(self.law_.components)
        self._chart = CompiledMap(self.chart_.forward) if self.chart_ is not None else None
        return self

    def transform(self, X):
        check_is_fitted(self, "law_")
        X = _points(X, self.n_features_in_)
        return X.copy() if self._chart is None else self._chart(X)

    def multiply(self, X, Y):
        """Row-wise ``x . y`` in floating point."""
        check_is_fitted(self, "law_")
        n = self.n_features_in_
        return self._law(np.hstack([_points(X, n), _points(Y, n)]))


class CanonicalCoordinates(TransformerMixin, BaseEstimator):
    """Canonical coordinates of the first (``kind=1``) or second (``kind=2``) kind.

    ``transform`` sends canonical coordinates to chart points by integrating the frame's flows;
    ``model_transform`` does the same with the exact model exponential.
    """

    def __init__(self, kind=1, steps=256, guard=10.0):
        self.kind = kind
        self.steps = steps
        self.guard = guard

    def fit(self, frame, y=None):
        if self.kind not in (1, 2):
            raise ValueError("kind must be 1 or 2")
        frame = _as_frame(frame)
        if not is_privileged(frame).verdict:
            raise PreconditionError("canonical coordinates need a frame in privileged coordinates")
        self.frame_ = frame
        self.cfg_ = FlowConfig(self.steps, self.guard)
        self.basis_ = CanonicalBasis(model_fields(frame))
        if self.kind == 1:
            self._model = CompiledMap(self.basis_.exp_map())
        else:
            self._model = CompiledMap(second_kind_map(self.basis_))
        self.n_features_in_ = frame.n
        return self

    def transform(self, X):
        check_is_fitted(self, "frame_")
        X = _points(X, self.n_features_in_)
        fn = exp_X if self.kind == 1 else gamma_X
        return fn(self.frame_, X, self.cfg_)

    def model_transform(self, X):
        check_is_fitted(self, "frame_")
        return self._model(_points(X, self.n_features_in_))
