from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from carnot_forge.errors import DimensionError
from carnot_forge.poly import (Poly, WeightSequence, anisotropic_taylor_split, format_poly, identity_map,
                               multi_indices, pseudo_norm, weighted_degree)
from carnot_forge.dsl import parse_field

from strategies import WEIGHTS, polys, rationals

W = (1, 1, 2)
x1, x2, x3 = (Poly.var(i, W) for i in range(3))


def test_weight_sequence_from_type():
    assert WeightSequence.from_type([2, 3]).weights == (1, 1, 2)
    assert WeightSequence.from_type([2, 3, 5]).weights == (1, 1, 2, 3, 3)
    with pytest.raises(ValueError, match="strictly increasing"):
        WeightSequence.from_type([3, 2])


def test_arithmetic_basics():
    p = x1 * x2 + x3.scale(Fraction(1, 2))
    assert p.coefficient((1, 1, 0)) == 1
    assert p.coefficient((0, 0, 1)) == Fraction(1, 2)
    assert (p - p).is_zero()
    assert (x1 + 1) ** 2 == x1 * x1 + x1.scale(2) + 1
    assert p.is_homogeneous(2)
    assert x1.weight() == 1 and x3.weight() == 2


def test_weighted_degree_and_indices():
    assert weighted_degree((1, 2, 1), W) == 5
    idx = multi_indices(3, W, 2)
    assert idx[0] == (0, 0, 0)
    assert set(idx) == {(0, 0, 0), (1, 0, 0), (0, 1, 0), (2, 0, 0), (1, 1, 0), (0, 2, 0), (0, 0, 1)}


def test_evaluate_exact():
    p = x1 * x1 * x3 - x2.scale(Fraction(1, 3))
    assert p.evaluate([Fraction(1, 2), 3, 4]) == Fraction(1, 4) * 4 - 1


def test_compose_with_jet_order():
    p = x3 + x1 * x2
    q = p.compose([x1 + x1 * x1, x2, x3], order=3)
    assert q == x3 + x1 * x2
    with pytest.raises(DimensionError):
        p.compose([x1])


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    q = Poly(q.terms, p.weights) if q.weights == p.weights else Poly.zero(p.weights)
    r = Poly(r.terms, p.weights) if r.weights == p.weights else Poly.const(3, p.weights)
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p


@given(polys(), rationals)
def test_dilation_is_graded(p, t):
    expected = sum((part.scale(t ** d) for d, part in p.homogeneous_parts().items()), Poly.zero(p.weights))
    assert p.dilate(t) == expected
    assert sum(p.homogeneous_parts().values(), Poly.zero(p.weights)) == p


@given(polys(), st.integers(0, 8))
def test_taylor_split(p, order):
    low, rem = anisotropic_taylor_split(p, order)
    assert low + rem == p
    assert low.max_wdeg() < order
    assert rem.is_zero() or rem.weight() >= order


@given(polys())
def test_leibniz_rule(p):
    w = p.weights
    q = Poly.var(0, w) * Poly.var(len(w) - 1, w) + 1
    for i in range(len(w)):
        assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)


@given(polys())
def test_format_round_trips_through_parser(p):
    w = p.weights
    # format a polynomial, then read it back as the coefficient of d1
    text = format_poly(p)
    if p.is_zero():
        assert text == "0"
        return
    X = parse_field(f"({text})*d1", len(w), w)
    assert X[0] == p


@given(polys())
def test_json_round_trip(p):
    assert Poly.from_json(p.to_json(), p.weights) == p


@settings(max_examples=30)
@given(polys())
def test_compiled_evaluation_matches_exact(p):
    pts = [[Fraction(i + 1, 7) * (-1) ** i for i in range(len(p.weights))]]
    exact = float(p.evaluate(pts[0]))
    E, c = p.compile()
    X = np.array(pts, dtype=float)
    got = (np.prod(X[:, None, :] ** E[None, :, :], axis=2) @ c)[0] if len(c) else 0.0
    assert got == pytest.approx(exact, rel=1e-12, abs=1e-12)


def test_identity_map_and_pseudo_norm():
    assert identity_map(W) == [x1, x2, x3]
    assert pseudo_norm([0.5, -0.25, 0.25], W) == pytest.approx(0.5)
    t = 0.3
    x = [0.1, -0.2, 0.05]
    dx = [v * t ** wi for v, wi in zip(x, W)]
    assert pseudo_norm(dx, W) == pytest.approx(t * pseudo_norm(x, W))


def test_weights_in_strategies_are_nondecreasing():
    for w in WEIGHTS:
        assert list(w) == sorted(w)
