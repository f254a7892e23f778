"""Reference frames and random frame generators used by tests, the CLI and the estimators."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from . import linalg
from .frames import Frame, coordinate_frame, weights_from_type
from .poly import Poly, WeightSequence, multi_indices
from .privileged import CoordinateChange, invert_triangular, pushforward
from .vf import VectorField

HALF = Fraction(1, 2)


def _field(w, comps: dict) -> VectorField:
    """Build ``sum_k comps[k] d_{k+1}`` from a sparse dict of polynomials."""
    return VectorField([comps.get(k, Poly.zero(w)) for k in range(len(w))])


def heisenberg_symmetric() -> Frame:
    """``d1 - 1/2 x2 d3``, ``d2 + 1/2 x1 d3``, ``d3``."""
    w = (1, 1, 2)
    x = lambda i: Poly.var(i, w)
    one = Poly.const(1, w)
    return Frame(w, [
        _field(w, {0: one, 2: x(1).scale(-HALF)}),
        _field(w, {1: one, 2: x(0).scale(HALF)}),
        _field(w, {2: one}),
    ])


def heisenberg_polarized() -> Frame:
    """``d1``, ``d2 + x1 d3``, ``d3``."""
    w = (1, 1, 2)
    x = lambda i: Poly.var(i, w)
    one = Poly.const(1, w)
    return Frame(w, [_field(w, {0: one}), _field(w, {1: one, 2: x(0)}), _field(w, {2: one})])


def engel() -> Frame:
    """Homogeneous Engel frame of type (2,3,4): ``d1``, ``d2 + x1 d3 + 1/2 x1^2 d4``, ``d3 + x1 d4``, ``d4``."""
    w = (1, 1, 2, 3)
    x = lambda i: Poly.var(i, w)
    one = Poly.const(1, w)
    return Frame(w, [
        _field(w, {0: one}),
        _field(w, {1: one, 2: x(0), 3: (x(0) * x(0)).scale(HALF)}),
        _field(w, {2: one, 3: x(0)}),
        _field(w, {3: one}),
    ])


def engel_skewed() -> Frame:
    """The Engel frame in the coordinates ``y4 = x4 + x1^2 + x1 x2``: linearly adapted, not privileged."""
    base = engel()
    w = base.weights
    x = lambda i: Poly.var(i, w)
    fwd = [x(0), x(1), x(2), x(3) + x(0) * x(0) + x(0) * x(1)]
    return pushforward(base, invert_triangular(fwd))


def filiform_123() -> Frame:
    """Homogeneous frame of type (1,2,3): ``d1``, ``d2 + x1 d3``, ``d3``."""
    w = (1, 2, 3)
    x = lambda i: Poly.var(i, w)
    one = Poly.const(1, w)
    return Frame(w, [_field(w, {0: one}), _field(w, {1: one, 2: x(0)}), _field(w, {2: one})])


def violating_113() -> Frame:
    """Weights (1,1,3) with ``[X1, X2] = X3`` escaping ``H_2``."""
    w = (1, 1, 3)
    x = lambda i: Poly.var(i, w)
    one = Poly.const(1, w)
    return Frame(w, [_field(w, {0: one}), _field(w, {1: one, 2: x(0)}), _field(w, {2: one})])


def scaled_line() -> Frame:
    return Frame((1,), [VectorField([Poly.const(2, (1,))])])


HOMOGENEOUS = {
    (2, 3): heisenberg_symmetric,
    (2, 3, 4): engel,
    (1, 2, 3): filiform_123,
}


# random corpus ----------------------------------------------------------------

def random_rational(rng: random.Random, bound: int = 2, den: int = 2, nonzero: bool = False) -> Fraction:
    while True:
        v = Fraction(rng.randint(-bound * den, bound * den), den)
        if v or not nonzero:
            return v


def random_poly(rng: random.Random, w, max_degree: int = 3, n_terms: int = 2, min_total: int = 0,
                max_wdeg: int | None = None) -> Poly:
    """Sparse random polynomial with total degree ``<= max_degree`` and coefficients in ``[-2, 2]``."""
    w = tuple(w)
    bound = max_wdeg if max_wdeg is not None else max_degree * max(w)
    pool = [a for a in multi_indices(len(w), w, bound, min_total) if sum(a) <= max_degree]
    if not pool:
        return Poly.zero(w)
    terms = {}
    for _ in range(n_terms):
        terms[rng.choice(pool)] = random_rational(rng, nonzero=True)
    return Poly(terms, w)


def recombine(frame: Frame, rng: random.Random, max_degree: int = 3) -> Frame:
    """``X_j' = c_j X_j + sum_{w_k <= w_j, k != j} p_jk X_k``; stays an H-frame of the same filtration.

    ``p_jk`` may have a constant term only when ``w_k < w_j``, which keeps ``B(0)`` invertible.
    """
    w = frame.weights
    n = frame.n
    fields = []
    for j in range(n):
        Xj = frame[j].scale(Poly.const(random_rational(rng, nonzero=True), w))
        for k in range(n):
            if k == j or w[k] > w[j] or rng.random() < 0.5:
                continue
            p = random_poly(rng, w, max_degree, n_terms=1, min_total=0 if w[k] < w[j] else 1)
            if not p.is_zero():
                Xj = Xj + frame[k].scale(p)
        fields.append(Xj)
    return Frame(frame.w, fields)


def random_triangular_change(w, rng: random.Random, max_degree: int = 3) -> CoordinateChange:
    """``y_k = x_k + q_k(x_1, ..., x_{k-1})`` with an exact polynomial inverse."""
    w = tuple(w)
    n = len(w)
    comps = []
    for k in range(n):
        pk = Poly.var(k, w)
        if k and rng.random() < 0.7:
            pool = [a for a in multi_indices(n, w, w[k], min_total=2)
                    if sum(a) <= max_degree and not any(a[k:])]
            if pool:
                pk = pk + Poly.monomial(rng.choice(pool), w, random_rational(rng, nonzero=True))
        comps.append(pk)
    return invert_triangular(comps)


def random_linear_change(n: int, rng: random.Random, weights, extra: int = 2) -> CoordinateChange:
    """Diagonal scaling plus ``extra`` random off-diagonal entries (kept sparse so coefficients stay small)."""
    while True:
        A = [[random_rational(rng, nonzero=True) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        for _ in range(extra):
            i, j = rng.randrange(n), rng.randrange(n)
            if i != j:
                A[i][j] = random_rational(rng)
        if linalg.rank(A) == n:
            return CoordinateChange.linear(A, weights)


def random_frame(ranks: Sequence[int], rng: random.Random, max_degree: int = 3) -> Frame:
    """A valid, generally non-homogeneous and non-adapted frame of the given type."""
    base = HOMOGENEOUS[tuple(ranks)]()
    # the nonlinear change acts on the homogeneous frame first, so coefficient degrees stay small
    f = pushforward(base, random_triangular_change(base.weights, rng, 2))
    f = recombine(f, rng, max_degree)
    return pushforward(f, random_linear_change(f.n, rng, f.weights))


def corpus(per_type: int = 50, seed: int = 0, types=((2, 3), (2, 3, 4), (1, 2, 3))) -> list:
    rng = random.Random(seed)
    return [(t, random_frame(t, rng)) for t in types for _ in range(per_type)]


def spoil_privileged(frame: Frame, rng: random.Random) -> Frame:
    """Push a privileged frame through ``y_k = x_k + a x^alpha`` with ``<alpha> < w_k``, ``|alpha| >= 2``."""
    w = frame.weights
    n = frame.n
    ks = [k for k in range(n) if multi_indices(n, w, w[k] - 1, min_total=2)]
    if not ks:
        raise ValueError("every frame of step <= 2 is privileged once linearly adapted")
    k = rng.choice(ks)
    alpha = rng.choice(multi_indices(n, w, w[k] - 1, min_total=2))
    comps = [Poly.var(i, w) for i in range(n)]
    comps[k] = comps[k] + Poly.monomial(alpha, w, random_rational(rng, nonzero=True))
    return pushforward(frame, invert_triangular(comps))


def perturb_homogeneous(frame: Frame, rng: random.Random | None = None, terms=None) -> Frame:
    """Add higher-degree pieces ``p_jk X_k`` to ``X_j`` (``w_k <= w_j``, ``p_jk`` of degree ``w_k - w_j + 1``).

    The result stays privileged and keeps the same model fields, with a first neglected term of
    degree ``-w_j + 1``.
    """
    w = frame.weights
    n = frame.n
    fields = list(frame.fields)
    if terms is None:
        terms = []
        for j in range(1, n):
            for k in range(n):
                if w[k] > w[j]:
                    continue
                deg = max(1, w[k] - w[j] + 1)
                pool = [a for a in multi_indices(n, w, deg) if sum(a) >= 1 and sum(x * y for x, y in zip(a, w)) == deg]
                if pool and rng.random() < 0.6:
                    terms.append((j, k, pool[rng.randrange(len(pool))], random_rational(rng, nonzero=True)))
        # one guaranteed term of degree 1 - w_1 on X_1, so the first neglected part is O(t)
        i0 = rng.choice([i for i in range(n) if w[i] == 1])
        alpha = tuple(int(i == i0) for i in range(n))
        k = rng.choice([k for k in range(n) if w[k] == 1])
        terms.append((0, k, alpha, random_rational(rng, nonzero=True)))
    for j, k, alpha, c in terms:
        fields[j] = fields[j] + frame[k].scale(Poly.monomial(alpha, w, c))
    return Frame(frame.w, fields)


def perturbed_fixtures(count: int = 10, seed: int = 1) -> list:
    rng = random.Random(seed)
    bases = [heisenberg_symmetric, heisenberg_polarized, engel, filiform_123]
    return [perturb_homogeneous(bases[i % len(bases)](), rng) for i in range(count)]


def heisenberg_x1sq() -> Frame:
    """Polarized Heisenberg with ``x1^2 d3`` added to ``X1`` (first neglected term of degree 0)."""
    base = heisenberg_polarized()
    w = base.weights
    X1 = base[0] + _field(w, {2: Poly.var(0, w) * Poly.var(0, w)})
    return Frame(base.w, [X1, base[1], base[2]])


__all__ = [
    "heisenberg_symmetric", "heisenberg_polarized", "engel", "engel_skewed", "filiform_123",
    "violating_113", "scaled_line", "coordinate_frame", "random_frame", "corpus", "spoil_privileged",
    "perturb_homogeneous", "perturbed_fixtures", "heisenberg_x1sq", "weights_from_type", "WeightSequence",
]
