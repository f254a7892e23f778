import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from carnot_forge.fixtures import engel, heisenberg_symmetric
from carnot_forge.poly import Poly
from carnot_forge.vf import (DiffOperator, VectorField, apply, apply_word, compose_ops, format_field, lie_bracket,
                             operator_monomial, operator_parts, order_of, pullback_dilation,
                             pullback_dilation_op, pullback_dilation_parts, weight_of_vf)

from strategies import WEIGHTS, fields, operators, polys

nonzero_t = st.sampled_from([Fraction(1, 2), Fraction(-3, 2), Fraction(2), Fraction(1, 3)])


@st.composite
def same_ring(draw, *kinds):
    w = draw(st.sampled_from(WEIGHTS))
    return [draw(k(w)) for k in kinds]


@given(same_ring(fields, fields, polys))
def test_bracket_is_commutator(objs):
    X, Y, f = objs
    assert lie_bracket(X, Y)(f) == X(Y(f)) - Y(X(f))


@settings(max_examples=40)
@given(same_ring(fields, fields, fields))
def test_bracket_antisymmetry_and_jacobi(objs):
    X, Y, Z = objs
    assert lie_bracket(X, Y) == -lie_bracket(Y, X)
    jac = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
    assert jac.is_zero()


@given(same_ring(fields, polys), nonzero_t)
def test_field_pullback_matches_graded_parts(objs, t):
    X, f = objs
    w = X.weights
    expected = VectorField.zero(w)
    for d, part in pullback_dilation_parts(X).items():
        expected = expected + part.scale(Poly.const(t ** d, w))
    assert pullback_dilation(X, t) == expected
    # defining property: (delta_t^* X)(f o delta_t) = (X f) o delta_t
    assert pullback_dilation(X, t)(f.dilate(t)) == X(f).dilate(t)


@given(same_ring(operators, operators, polys))
def test_operator_composition(objs):
    P, Q, f = objs
    assert compose_ops(P, Q)(f) == P(Q(f))


@given(same_ring(operators, polys), nonzero_t)
def test_operator_pullback(objs, t):
    P, f = objs
    w = P.weights
    expected = DiffOperator({}, w)
    for d, part in operator_parts(P).items():
        expected = expected + part.scale(t ** d)
    assert pullback_dilation_op(P, t) == expected
    assert pullback_dilation_op(P, t)(f.dilate(t)) == P(f).dilate(t)


def test_apply_word_order():
    f = heisenberg_symmetric()
    w = f.weights
    x1 = Poly.var(0, w)
    x3 = Poly.var(2, w)
    # X1 X2 x3 = X1(1/2 x1) = 1/2; X2 X1 x3 = X2(-1/2 x2) = -1/2
    assert apply_word(f.fields, (1, 2), x3) == Poly.const(Fraction(1, 2), w)
    assert apply_word(f.fields, (2, 1), x3) == Poly.const(Fraction(-1, 2), w)
    assert operator_monomial(f.fields, (1, 1, 0))(x3) == Poly.const(Fraction(1, 2), w)  # X1 X2, X2 first
    with pytest.raises(IndexError):
        apply_word(f.fields, (4,), x1)


def test_orders_on_engel():
    f = engel()
    w = f.weights
    orders = [order_of(f.fields, w, Poly.var(k, w)) for k in range(4)]
    assert orders == [1, 1, 2, 3]
    assert order_of(f.fields, w, Poly.zero(w)) == ">=5"


def test_weights_and_format():
    f = engel()
    assert [weight_of_vf(X) for X in f.fields] == [-1, -1, -2, -3]
    assert format_field(f[1]) == "d2 + x1*d3 + 1/2*x1^2*d4"
    assert format_field(VectorField.zero(f.weights)) == "0"
    assert apply(f[2], Poly.var(3, f.weights)) == Poly.var(0, f.weights)


@given(same_ring(fields))
def test_field_json_round_trip(objs):
    (X,) = objs
    assert VectorField.from_json(json.loads(json.dumps(X.to_json())), X.weights) == X
