"""Polynomial vector fields and differential operators.

A vector field ``X = sum_k b_k d_k`` is stored as the tuple of its coefficient
polynomials.  A term ``c x**beta d_k`` is homogeneous of degree
``<beta> - w_k`` for the dilations, which is what :func:`pullback_dilation_parts`
groups by.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import DimensionError
from .poly import INF, Poly, factorial_multi, multi_indices


class VectorField:
    __slots__ = ("coeffs", "weights")

    def __init__(self, coeffs: Sequence[Poly]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise DimensionError("a vector field needs at least one coefficient")
        w = coeffs[0].weights
        if len(w) != len(coeffs) or any(c.weights != w for c in coeffs):
            raise DimensionError("coefficients must live in the n-variable ring of the field")
        self.coeffs = coeffs
        self.weights = w

    @classmethod
    def zero(cls, weights) -> "VectorField":
        w = tuple(weights)
        return cls([Poly.zero(w)] * len(w))

    @classmethod
    def coordinate(cls, j: int, weights) -> "VectorField":
        """``d_{j+1}``."""
        w = tuple(weights)
        return cls([Poly.const(1 if k == j else 0, w) for k in range(len(w))])

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k) -> Poly:
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return VectorField([-a for a in self.coeffs])

    def scale(self, f) -> "VectorField":
        """Multiply by a rational constant or a polynomial function."""
        return VectorField([f * a if isinstance(f, Poly) else a.scale(f) for a in self.coeffs])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def at_origin(self) -> tuple:
        return tuple(c.constant_term() for c in self.coeffs)

    def truncate(self, order: int) -> "VectorField":
        return VectorField([c.truncate(order) for c in self.coeffs])

    def __call__(self, f: Poly) -> Poly:
        return apply(self, f)

    def __repr__(self):
        return f"VectorField({format_field(self)})"

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, data, weights) -> "VectorField":
        return cls([Poly.from_json(c, weights) for c in data])


def format_field(X: VectorField) -> str:
    """Pretty-print in the DSL syntax, e.g. ``d1 - 1/2*x2*d3``."""
    pieces = []
    for k, b in enumerate(X.coeffs):
        for alpha, c in b.sorted_terms():
            mono = "*".join(f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(alpha) if e)
            mag = abs(c)
            factors = []
            if mag != 1:
                factors.append(str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}")
            if mono:
                factors.append(mono)
            factors.append(f"d{k + 1}")
            pieces.append(("-" if c < 0 else "+", "*".join(factors)))
    if not pieces:
        return "0"
    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def apply(X: VectorField, f: Poly) -> Poly:
    if f.weights != X.weights:
        raise DimensionError("field and function live in different rings")
    out = Poly.zero(f.weights)
    for k, b in enumerate(X.coeffs):
        if b.is_zero():
            continue
        df = f.diff(k)
        if not df.is_zero():
            out = out + b * df
    return out


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    if X.weights != Y.weights:
        raise DimensionError("fields live in different rings")
    return VectorField([apply(X, b) - apply(Y, a) for a, b in zip(X.coeffs, Y.coeffs)])


def pullback_dilation_parts(X: VectorField) -> dict:
    """Graded parts of ``X``: term ``x**beta d_k`` goes to degree ``<beta> - w_k``."""
    w = X.weights
    parts: dict = {}
    for k, b in enumerate(X.coeffs):
        for alpha, c in b.terms.items():
            d = b.wdeg(alpha) - w[k]
            parts.setdefault(d, [dict() for _ in w])[k][alpha] = c
    return {d: VectorField([Poly(t, w) for t in comps]) for d, comps in sorted(parts.items())}


def homogeneous_part_vf(X: VectorField, degree: int) -> VectorField:
    return pullback_dilation_parts(X).get(degree, VectorField.zero(X.weights))


def weight_of_vf(X: VectorField):
    return min(pullback_dilation_parts(X), default=INF)


def is_homogeneous_vf(X: VectorField, degree: int) -> bool:
    return set(pullback_dilation_parts(X)) <= {degree}


def pullback_dilation(X: VectorField, t) -> VectorField:
    """``delta_t^* X`` computed directly: ``sum_k t**(-w_k) b_k(t.x) d_k``."""
    t = Fraction(t)
    return VectorField([b.dilate(t).scale(t ** (-wk)) for b, wk in zip(X.coeffs, X.weights)])


# frame words -------------------------------------------------------------------

def word_weight(indices: Sequence[int], w) -> int:
    """``<I>`` for a 1-based word ``I``."""
    return sum(w[i - 1] for i in indices)


def apply_word(fields: Sequence[VectorField], indices: Sequence[int], f: Poly) -> Poly:
    """``X_I f = X_{i_1}(X_{i_2}(... X_{i_k} f))`` for a 1-based word ``I``."""
    n = len(fields)
    for i in indices:
        if not 1 <= i <= n:
            raise IndexError(f"word index {i} out of range 1..{n}")
    out = f
    for i in reversed(indices):
        out = apply(fields[i - 1], out)
    return out


def monomial_word(alpha: Sequence[int]) -> tuple:
    """Non-decreasing word with ``X_I = X^alpha``."""
    return tuple(i + 1 for i, a in enumerate(alpha) for _ in range(a))


class _OrderedMonomials:
    """Values ``X^alpha f (0)`` with intermediate results shared between multi-indices.

    ``X^alpha f = X_1^{a_1}(X_2^{a_2}(... X_n^{a_n} f))``: the rightmost factors act first, so
    results are cached by the suffix ``(a_j, ..., a_n)``.  Only the terms of total degree
    ``<= |remaining word|`` can contribute to the value at 0, which bounds the growth.
    """

    def __init__(self, fields: Sequence[VectorField], f: Poly):
        self.fields = fields
        self.f = f
        self.n = len(fields)
        self.cache = {}

    def _suffix(self, alpha: tuple, j: int, budget: int) -> Poly:
        # X_j^{a_j} ... X_n^{a_n} f truncated to total degree <= budget
        key = (alpha[j:], budget)
        if key in self.cache:
            return self.cache[key]
        if j == self.n:
            out = self.f.truncate_total(budget)
        elif alpha[j] == 0:
            out = self._suffix(alpha, j + 1, budget)
        else:
            reduced = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1:]
            inner = self._suffix(reduced, j, budget + 1)
            out = apply(self.fields[j], inner).truncate_total(budget)
        self.cache[key] = out
        return out

    def value_at_zero(self, alpha: Sequence[int]) -> Fraction:
        return self._suffix(tuple(alpha), 0, 0).constant_term()


def ordered_monomial_values(fields: Sequence[VectorField], f: Poly, alphas) -> dict:
    ev = _OrderedMonomials(fields, f)
    return {tuple(a): ev.value_at_zero(a) for a in alphas}


def order_of(fields: Sequence[VectorField], w, f: Poly, cap: int | None = None):
    """Order of ``f`` at the origin w.r.t. the frame, by enumeration of ``X^alpha`` with ``<alpha> < cap``.

    Returns an int, or the string ``">=cap"`` when every enumerated value vanishes.
    """
    w = tuple(w)
    if cap is None:
        cap = max(w) + 2
    if cap < 1:
        raise ValueError("cap must be >= 1")
    ev = _OrderedMonomials(fields, f)
    for alpha in multi_indices(len(w), w, cap - 1):
        if ev.value_at_zero(alpha) != 0:
            return sum(a * b for a, b in zip(alpha, w))
    return f">={cap}"


# differential operators ----------------------------------------------------------

class DiffOperator:
    """``P = sum_alpha a_alpha(x) d^alpha`` with polynomial coefficients."""

    __slots__ = ("terms", "weights")

    def __init__(self, terms: dict, weights):
        self.weights = tuple(weights)
        self.terms = {tuple(a): c for a, c in terms.items() if not c.is_zero()}

    @classmethod
    def from_field(cls, X: VectorField) -> "DiffOperator":
        n = X.n
        return cls({tuple(1 if i == k else 0 for i in range(n)): b for k, b in enumerate(X.coeffs)}, X.weights)

    @classmethod
    def identity(cls, weights) -> "DiffOperator":
        w = tuple(weights)
        return cls({(0,) * len(w): Poly.const(1, w)}, w)

    @property
    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, DiffOperator) and self.weights == other.weights and self.terms == other.terms

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out[a] + c if a in out else c
        return DiffOperator(out, self.weights)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "DiffOperator":
        return DiffOperator({a: p.scale(c) for a, p in self.terms.items()}, self.weights)

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, f: Poly) -> Poly:
        out = Poly.zero(self.weights)
        for a, c in self.terms.items():
            out = out + c * f.diff_multi(a)
        return out

    def __matmul__(self, other: "DiffOperator") -> "DiffOperator":
        return compose_ops(self, other)

    def to_json(self) -> list:
        return [{"d": list(a), "coeff": self.terms[a].to_json()} for a in sorted(self.terms)]


def compose_ops(P: DiffOperator, Q: DiffOperator) -> DiffOperator:
    """``P o Q`` via Leibniz: ``a d^alpha (b d^gamma) = sum_delta C(alpha,delta) a (d^delta b) d^(alpha-delta+gamma)``."""
    out: dict = {}
    for alpha, a in P.terms.items():
        for gamma, b in Q.terms.items():
            for delta in product(*(range(k + 1) for k in alpha)):
                coeff = 1
                for ak, dk in zip(alpha, delta):
                    coeff *= math.comb(ak, dk)
                db = b.diff_multi(delta)
                if db.is_zero():
                    continue
                key = tuple(ak - dk + gk for ak, dk, gk in zip(alpha, delta, gamma))
                term = (a * db).scale(coeff)
                out[key] = out[key] + term if key in out else term
    return DiffOperator(out, P.weights)


def operator_monomial(fields: Sequence[VectorField], alpha: Sequence[int]) -> DiffOperator:
    """``X^alpha = X_1^{a_1} ... X_n^{a_n}`` as a composed operator."""
    w = fields[0].weights
    op = DiffOperator.identity(w)
    for j, a in enumerate(alpha):
        Xj = DiffOperator.from_field(fields[j])
        for _ in range(a):
            op = op @ Xj
    return op


def operator_parts(P: DiffOperator) -> dict:
    """Graded parts: ``x**beta d**alpha`` is homogeneous of degree ``<beta> - <alpha>``."""
    w = P.weights
    parts: dict = {}
    for alpha, a in P.terms.items():
        da = sum(x * y for x, y in zip(alpha, w))
        for beta, c in a.terms.items():
            d = a.wdeg(beta) - da
            parts.setdefault(d, {}).setdefault(alpha, {})[beta] = c
    return {d: DiffOperator({al: Poly(t, w) for al, t in v.items()}, w) for d, v in sorted(parts.items())}


def weight_of_op(P: DiffOperator):
    return min(operator_parts(P), default=INF)


def pullback_dilation_op(P: DiffOperator, t) -> DiffOperator:
    """``delta_t^* P = sum a_alpha(t.x) t**(-<alpha>) d^alpha``."""
    t = Fraction(t)
    w = P.weights
    return DiffOperator(
        {a: c.dilate(t).scale(t ** (-sum(x * y for x, y in zip(a, w)))) for a, c in P.terms.items()}, w)


def taylor_coefficient_value(f: Poly, alpha: Sequence[int]) -> Fraction:
    """``d^alpha f(0) / alpha!``, i.e. the coefficient of ``x**alpha``."""
    return f.coefficient(alpha)


def derivative_at_zero(f: Poly, alpha: Sequence[int]) -> Fraction:
    return f.coefficient(alpha) * factorial_multi(alpha)
