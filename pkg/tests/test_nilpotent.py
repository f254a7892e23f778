import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from carnot_forge.bch_oracle import bch_oracle
from carnot_forge.errors import AlgebraError, PreconditionError
from carnot_forge.fixtures import engel, filiform_123, heisenberg_polarized, heisenberg_symmetric
from carnot_forge.frames import structure_constants_at_base
from carnot_forge.nilpotent import (CanonicalBasis, GradedLieAlgebra, basis_from_algebra, check_law,
                                    class_membership, dynkin, engel_algebra, filiform4, free_step2_rank3,
                                    free_step3_rank2, group_law, heisenberg_algebra, heisenberg_basis,
                                    heisenberg_family, intertwines, inverse_map, law_from_basis, law_via_dynkin,
                                    phi_Y, pushes_basis, standard_levi)
from carnot_forge.poly import Poly
from carnot_forge.privileged import pushforward

ALGEBRAS = [free_step3_rank2, free_step2_rank3, engel_algebra, filiform4,
            lambda: heisenberg_algebra(standard_levi(2))]

rat = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3))


def test_algebra_validation():
    with pytest.raises(AlgebraError, match="antisymmetric"):
        GradedLieAlgebra((1, 1, 2), {(1, 2, 3): 1})
    with pytest.raises(AlgebraError, match="grading"):
        GradedLieAlgebra((1, 1, 2), {(1, 2, 2): 1, (2, 1, 2): -1})
    # graded and antisymmetric, but [[e1,e2],e3] = -e6 while the other cyclic terms vanish
    bad = {(1, 2, 4): 1, (2, 1, 4): -1, (1, 3, 5): 1, (3, 1, 5): -1, (2, 4, 6): 1, (4, 2, 6): -1,
           (3, 4, 6): 1, (4, 3, 6): -1, (1, 5, 6): 1, (5, 1, 6): -1}
    with pytest.raises(AlgebraError, match="Jacobi") as err:
        GradedLieAlgebra((1, 1, 1, 2, 2, 3), bad)
    assert err.value.witness is not None


def test_algebra_json_round_trip():
    g = free_step3_rank2()
    assert GradedLieAlgebra.from_json(g.to_json()) == g


@pytest.mark.parametrize("make", ALGEBRAS)
def test_dynkin_matches_series_oracle_on_basis(make):
    g = make()
    e = [[Fraction(int(i == j)) for i in range(g.n)] for j in range(g.n)]
    for a in e:
        for b in e:
            assert dynkin(g, a, b) == bch_oracle(g.bracket, a, b, g.r)


@settings(max_examples=25)
@given(st.sampled_from(ALGEBRAS), st.data())
def test_dynkin_matches_oracle_random(make, data):
    g = make()
    xi = data.draw(st.lists(rat, min_size=g.n, max_size=g.n))
    eta = data.draw(st.lists(rat, min_size=g.n, max_size=g.n))
    assert dynkin(g, xi, eta) == bch_oracle(g.bracket, xi, eta, g.r)


def test_dynkin_low_order_terms():
    g = heisenberg_algebra(standard_levi(2))
    assert dynkin(g, [1, 0, 0], [0, 1, 0]) == [1, 1, Fraction(1, 2)]
    assert dynkin(g, [1, 2, 3], [0, 0, 0]) == [1, 2, 3]


@pytest.mark.parametrize("make", [heisenberg_symmetric, heisenberg_polarized, engel, filiform_123])
def test_law_from_model_fields(make):
    f = make()
    basis = CanonicalBasis(f.fields)
    g = GradedLieAlgebra(f.weights, structure_constants_at_base(f))
    law = group_law(basis, g)
    checks = check_law(law, basis, g)
    assert checks.ok and checks.associativity == "symbolic" and checks.bch_consistent
    # basis fields generate left translations
    assert law.translation_generators() == list(basis.fields)


def test_heisenberg_g0_law():
    basis, law = heisenberg_family(standard_levi(2), [[0, 0], [0, 0]])
    w = (1, 1, 2) * 2
    x = [Poly.var(i, w) for i in range(3)]
    y = [Poly.var(3 + i, w) for i in range(3)]
    half = Fraction(1, 2)
    # L_12 = 1: x3 + y3 + 1/2 (L_21 x1 y2 + L_12 x2 y1)
    assert law.components[2] == x[2] + y[2] + (x[1] * y[0]).scale(half) - (x[0] * y[1]).scale(half)
    assert law.components[0] == x[0] + y[0]


def test_heisenberg_family_symmetry():
    levi = standard_levi(2)
    heisenberg_family(levi, [[1, 2], [2, -1]])
    with pytest.raises(AlgebraError):
        heisenberg_family(levi, [[0, 1], [0, 0]])
    rep = class_membership(heisenberg_basis(levi, [[0, 1], [0, 0]]), heisenberg_algebra(levi))
    assert not rep.verdict and rep.witness["i"] == 1


def test_two_routes_agree_on_larger_algebras():
    for make in (free_step3_rank2, filiform4):
        g = make()
        basis = basis_from_algebra(g)
        assert law_from_basis(basis) == law_via_dynkin(basis, g)


def test_randomized_associativity_mode():
    g = free_step2_rank3()
    basis = basis_from_algebra(g)
    law = law_from_basis(basis)
    checks = check_law(law, basis, g, assoc_budget=12, trials=50)
    assert checks.associativity == "randomized" and checks.ok


def test_non_associative_law_is_caught():
    w = (1, 1, 2)
    ring = w * 2
    x = [Poly.var(i, ring) for i in range(3)]
    y = [Poly.var(3 + i, ring) for i in range(3)]
    from carnot_forge.nilpotent import NilpotentGroupLaw
    law = NilpotentGroupLaw(w, [x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * x[0] * y[1]])
    assert not law.check_associative()
    assert law.associativity_randomized(trials=20) is not None
    assert not law.check_dilation()


def test_inverse_is_negated_log():
    basis = CanonicalBasis(engel().fields)
    law = law_from_basis(basis)
    assert law.check_inverse(inverse_map(basis))


def test_canonical_basis_checks():
    f = engel()
    with pytest.raises(PreconditionError):
        CanonicalBasis([f[1], f[0], f[2], f[3]])


def test_phi_y_pushes_and_intertwines():
    rng = random.Random(4)
    levi = standard_levi(2)
    g = heisenberg_algebra(levi)

    def sym():
        a, b, c = (Fraction(rng.randint(-4, 4), 2) for _ in range(3))
        return [[a, b], [b, c]]

    X = CanonicalBasis(heisenberg_basis(levi, sym()))
    Y = CanonicalBasis(heisenberg_basis(levi, sym()))
    phi = phi_Y(X, Y)
    assert pushes_basis(phi, X, Y)
    assert pushforward(X.as_frame(), phi).fields == Y.fields
    assert intertwines(phi, group_law(X, g), group_law(Y, g))
    assert phi_Y(X, X).is_identity()
