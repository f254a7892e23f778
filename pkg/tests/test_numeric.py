import math

import numpy as np
import pytest

from carnot_forge.errors import FlowDomainError, PreconditionError
from carnot_forge.fixtures import (engel, engel_skewed, filiform_123, heisenberg_polarized, heisenberg_symmetric,
                                   heisenberg_x1sq)
from carnot_forge.frames import Frame
from carnot_forge.nilpotent import CanonicalBasis
from carnot_forge.numeric import (CompiledMap, FlowConfig, exp_X, first_kind_rate_test, flow, gamma_X, rk4,
                                  rk4_error, sample_box, second_kind_map, second_kind_rate_test, thread_count)
from carnot_forge.poly import Poly
from carnot_forge.vf import VectorField


def test_rk4_is_fourth_order_on_exponential_growth():
    # y' = y, y(0) = 1: error(h) / error(h/2) -> 16
    cfg16, cfg32 = FlowConfig(steps=16), FlowConfig(steps=32)
    e16 = abs(rk4(lambda y: y, np.array([1.0]), 1.0, cfg16)[0, 0] - math.e)
    e32 = abs(rk4(lambda y: y, np.array([1.0]), 1.0, cfg32)[0, 0] - math.e)
    assert 12 <= e16 / e32 <= 20


def test_flow_of_polynomial_field_matches_closed_form():
    # X = d1 + x1 d2 + x1^2 d3 from 0: (t, t^2/2, t^3/3)
    w = (1, 2, 3)
    x1 = Poly.var(0, w)
    X = VectorField([Poly.const(1, w), x1, x1 * x1])
    y = flow(X, [0.0, 0.0, 0.0], 0.7)
    assert np.allclose(y, [0.7, 0.7 ** 2 / 2, 0.7 ** 3 / 3], atol=1e-14)


@pytest.mark.parametrize("make", [heisenberg_symmetric, heisenberg_polarized, engel, filiform_123])
def test_homogeneous_exponentials_are_exact(make):
    f = make()
    basis = CanonicalBasis(f.fields)
    X = sample_box(f.n, 8, 0.5, seed=1)
    assert np.allclose(exp_X(f, X), CompiledMap(basis.exp_map())(X), atol=1e-13)
    assert np.allclose(gamma_X(f, X), CompiledMap(second_kind_map(basis))(X), atol=1e-13)
    assert rk4_error(f, X[0], 16) < 1e-13


def test_guard_radius():
    w = (1,)
    x = Poly.var(0, w)
    blowup = Frame(w, [VectorField([x * x + 1])])
    with pytest.raises(FlowDomainError):
        exp_X(blowup, [[2.0]], FlowConfig(guard=5.0))
    out = exp_X(blowup, [[2.0], [0.1]], FlowConfig(guard=5.0), strict=False)
    assert np.isnan(out[0]).all() and np.isfinite(out[1]).all()


def test_flow_config_validation():
    with pytest.raises(ValueError):
        FlowConfig(steps=8)
    with pytest.raises(ValueError):
        FlowConfig(guard=0)


def test_rate_tests_refuse_non_privileged():
    with pytest.raises(PreconditionError):
        first_kind_rate_test(engel_skewed(), sample_box(4, 2))


def test_homogeneous_rate_report_is_exact():
    rep = first_kind_rate_test(engel(), sample_box(4, 6, seed=2))
    assert rep.verdict == "exact" and rep.max_error <= 1e-9
    assert rep.to_json()["ok"] is True


def test_first_neglected_term_of_degree_zero_gives_slope_one():
    for test in (first_kind_rate_test, second_kind_rate_test):
        rep = test(heisenberg_x1sq(), sample_box(3, 8, seed=3))
        numeric = [s for s in rep.slopes if isinstance(s, float)]
        assert rep.verdict == "pass"
        assert all(0.9 <= s <= 1.2 for s in numeric)


def test_cubic_perturbation_decays_faster():
    # x1^3 d3 on X1 is two orders above the model, so the error is O(t^2)
    base = heisenberg_polarized()
    w = base.weights
    x1 = Poly.var(0, w)
    X1 = base[0] + VectorField([Poly.zero(w), Poly.zero(w), x1 * x1 * x1])
    rep = first_kind_rate_test(Frame(base.w, [X1, base[1], base[2]]), sample_box(3, 6, seed=4))
    assert all(1.8 <= s <= 2.3 for s in rep.slopes if isinstance(s, float))


def test_short_grid_is_inconclusive():
    rep = first_kind_rate_test(heisenberg_x1sq(), sample_box(3, 3, seed=5), grid=[0.5, 0.25, 0.125])
    assert rep.verdict == "inconclusive"


def test_thread_count_env(monkeypatch):
    monkeypatch.delenv("CARNOT_FORGE_THREADS", raising=False)
    assert thread_count() == 1
    monkeypatch.setenv("CARNOT_FORGE_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("CARNOT_FORGE_THREADS", "lots")
    assert thread_count() == 1


def test_results_do_not_depend_on_threads(monkeypatch):
    X = sample_box(3, 4, seed=6)
    monkeypatch.setenv("CARNOT_FORGE_THREADS", "1")
    a = second_kind_rate_test(heisenberg_x1sq(), X).errors
    monkeypatch.setenv("CARNOT_FORGE_THREADS", "4")
    b = second_kind_rate_test(heisenberg_x1sq(), X).errors
    assert a == b
