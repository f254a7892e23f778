import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from carnot_forge.dsl import frame_document
from carnot_forge.errors import PreconditionError
from carnot_forge.estimators import CanonicalCoordinates, NilpotentApproximation, PrivilegedCoordinates
from carnot_forge.fixtures import engel, engel_skewed, heisenberg_x1sq, violating_113


def test_privileged_coordinates_transform():
    est = PrivilegedCoordinates().fit(engel_skewed())
    X = np.array([[0.1, 0.2, 0.3, 0.4], [-0.5, 0.25, 0.0, 1.0]])
    Y = est.transform(X)
    assert np.allclose(Y[:, 3], X[:, 3] - X[:, 0] * X[:, 1] - X[:, 0] ** 2)
    assert np.allclose(est.inverse_transform(Y), X)
    assert est.verdict_


def test_params_and_clone():
    est = PrivilegedCoordinates(jet_order=9)
    assert est.get_params() == {"jet_order": 9, "check_valid": True}
    assert clone(est).get_params() == est.get_params()
    assert NilpotentApproximation(assoc_budget=6).set_params(trials=10).trials == 10


def test_not_fitted():
    with pytest.raises(NotFittedError):
        PrivilegedCoordinates().transform([[0, 0, 0, 0]])


def test_rejects_invalid_frame():
    with pytest.raises(PreconditionError):
        PrivilegedCoordinates().fit(violating_113())


def test_accepts_frame_documents():
    est = PrivilegedCoordinates().fit(frame_document(engel_skewed()))
    assert est.frame_ == engel()


def test_nilpotent_approximation():
    est = NilpotentApproximation().fit(engel_skewed())
    assert est.checks_.ok
    x = np.array([[0.1, 0.2, 0.3, 0.4]])
    assert np.allclose(est.multiply(x, np.zeros_like(x)), x)
    with pytest.raises(PreconditionError):
        NilpotentApproximation(auto=False).fit(engel_skewed())


def test_canonical_coordinates_close_to_model_near_origin():
    est = CanonicalCoordinates(kind=1).fit(heisenberg_x1sq())
    Z = np.array([[0.01, 0.02, 0.001]])
    assert np.allclose(est.transform(Z), est.model_transform(Z), atol=1e-5)
    exact = CanonicalCoordinates(kind=2).fit(engel())
    Z = np.array([[0.3, -0.2, 0.1, 0.05]])
    assert np.allclose(exact.transform(Z), exact.model_transform(Z), atol=1e-13)
    with pytest.raises(ValueError):
        CanonicalCoordinates(kind=3).fit(engel())
