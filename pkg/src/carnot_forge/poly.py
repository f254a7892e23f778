"""Exact sparse multivariate polynomials with an anisotropic grading.

A polynomial stores a map ``exponent tuple -> Fraction`` together with the
weight attached to each variable.  The weighted degree of a monomial
``x**alpha`` is ``<alpha> = sum(w_i * alpha_i)``; everything in this module
(dilations, homogeneous parts, weight, Taylor splitting, jet truncation) is
graded by that number rather than by the total degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionError

INF = math.inf

Monomial = tuple


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class WeightSequence:
    """Non-decreasing weights ``(w_1, ..., w_n)`` with ``w_1 = 1``; ``step = w_n``."""

    weights: tuple

    def __post_init__(self):
        w = tuple(int(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise ValueError("weight sequence must be non-empty")
        if w[0] != 1:
            raise ValueError("weight sequence must start at 1")
        if any(b < a for a, b in zip(w, w[1:])):
            raise ValueError("weight sequence must be non-decreasing")

    @classmethod
    def from_type(cls, ranks: Sequence[int]) -> "WeightSequence":
        ranks = [int(m) for m in ranks]
        if not ranks or ranks[0] < 1:
            raise ValueError("ranks must be positive")
        if any(b <= a for a, b in zip(ranks, ranks[1:])):
            raise ValueError("ranks must be strictly increasing")
        n = ranks[-1]
        return cls(tuple(min(w for w, m in enumerate(ranks, 1) if j <= m) for j in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def step(self) -> int:
        return self.weights[-1]

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]


def _weights_tuple(w) -> tuple:
    if isinstance(w, WeightSequence):
        return w.weights
    return tuple(int(v) for v in w)


def weighted_degree(alpha: Sequence[int], w) -> int:
    w = _weights_tuple(w)
    if len(alpha) != len(w):
        raise DimensionError(f"multi-index of length {len(alpha)} against {len(w)} weights")
    return sum(a * b for a, b in zip(alpha, w))


def factorial_multi(alpha: Sequence[int]) -> int:
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


class Poly:
    """Sparse polynomial over the rationals in ``len(weights)`` variables.

    Instances are treated as immutable; every operation returns a new object.
    """

    __slots__ = ("terms", "weights", "_hash")

    def __init__(self, terms: Mapping | None = None, weights=(1,)):
        self.weights = _weights_tuple(weights)
        n = len(self.weights)
        clean = {}
        if terms:
            for alpha, c in terms.items():
                alpha = tuple(alpha)
                if len(alpha) != n:
                    raise DimensionError(f"exponent {alpha} does not have {n} entries")
                c = as_fraction(c)
                if c:
                    clean[alpha] = clean.get(alpha, 0) + c
            clean = {a: c for a, c in clean.items() if c}
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, weights: tuple) -> "Poly":
        # trusted constructor: keys are tuples of the right length, values nonzero Fractions
        p = cls.__new__(cls)
        p.terms = terms
        p.weights = weights
        p._hash = None
        return p

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, weights) -> "Poly":
        return cls._raw({}, _weights_tuple(weights))

    @classmethod
    def const(cls, c, weights) -> "Poly":
        w = _weights_tuple(weights)
        c = as_fraction(c)
        return cls._raw({(0,) * len(w): c} if c else {}, w)

    @classmethod
    def var(cls, i: int, weights) -> "Poly":
        """The coordinate function ``x_{i+1}`` (0-based ``i``)."""
        w = _weights_tuple(weights)
        if not 0 <= i < len(w):
            raise DimensionError(f"variable index {i} out of range for {len(w)} variables")
        alpha = [0] * len(w)
        alpha[i] = 1
        return cls._raw({tuple(alpha): Fraction(1)}, w)

    @classmethod
    def monomial(cls, alpha: Sequence[int], weights, c=1) -> "Poly":
        return cls({tuple(alpha): c}, weights)

    # basic protocol -------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.weights)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.weights == other.weights and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self == Poly.const(other, self.weights)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.weights, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({self}, weights={self.weights})"

    def __str__(self):
        return format_poly(self)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.weights != self.weights:
                raise DimensionError(f"weight mismatch {self.weights} vs {other.weights}")
            return other
        return Poly.const(other, self.weights)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            v = out.get(a)
            if v is None:
                out[a] = c
            else:
                v += c
                if v:
                    out[a] = v
                else:
                    del out[a]
        return Poly._raw(out, self.weights)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({a: -c for a, c in self.terms.items()}, self.weights)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = as_fraction(c)
        if not c:
            return Poly.zero(self.weights)
        return Poly._raw({a: v * c for a, v in self.terms.items()}, self.weights)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other: "Poly", order: int | None = None) -> "Poly":
        """Product, optionally dropping every term of weighted degree >= ``order``."""
        out: dict = {}
        w = self.weights
        if order is not None:
            left = [(a, c, _wdeg(a, w)) for a, c in self.terms.items()]
            right = [(b, d, _wdeg(b, w)) for b, d in other.terms.items()]
            for a, c, da in left:
                if da >= order:
                    continue
                for b, d, db in right:
                    if da + db >= order:
                        continue
                    key = tuple(x + y for x, y in zip(a, b))
                    out[key] = out.get(key, 0) + c * d
        else:
            for a, c in self.terms.items():
                for b, d in other.terms.items():
                    key = tuple(x + y for x, y in zip(a, b))
                    out[key] = out.get(key, 0) + c * d
        return Poly._raw({k: v for k, v in out.items() if v}, w)

    def __truediv__(self, other):
        return self.scale(1 / as_fraction(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Poly.const(1, self.weights)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # calculus -------------------------------------------------------------
    def diff(self, i: int) -> "Poly":
        out = {}
        for a, c in self.terms.items():
            e = a[i]
            if e:
                b = a[:i] + (e - 1,) + a[i + 1:]
                out[b] = c * e
        return Poly._raw(out, self.weights)

    def diff_multi(self, beta: Sequence[int]) -> "Poly":
        p = self
        for i, k in enumerate(beta):
            for _ in range(k):
                p = p.diff(i)
        return p

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, alpha: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(alpha), Fraction(0))

    # grading --------------------------------------------------------------
    def wdeg(self, alpha) -> int:
        return _wdeg(alpha, self.weights)

    def total_degree(self) -> int:
        return max((sum(a) for a in self.terms), default=-1)

    def max_wdeg(self) -> int:
        return max((self.wdeg(a) for a in self.terms), default=-1)

    def truncate(self, order: int) -> "Poly":
        """Drop terms of weighted degree ``>= order``."""
        return Poly._raw({a: c for a, c in self.terms.items() if self.wdeg(a) < order}, self.weights)

    def truncate_total(self, degree: int) -> "Poly":
        """Keep only terms of total degree ``<= degree``."""
        return Poly._raw({a: c for a, c in self.terms.items() if sum(a) <= degree}, self.weights)

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        for a, c in self.terms.items():
            parts.setdefault(self.wdeg(a), {})[a] = c
        return {d: Poly._raw(t, self.weights) for d, t in sorted(parts.items())}

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly._raw({a: c for a, c in self.terms.items() if self.wdeg(a) == degree}, self.weights)

    def weight(self):
        return min((self.wdeg(a) for a in self.terms), default=INF)

    def is_homogeneous(self, degree: int) -> bool:
        return all(self.wdeg(a) == degree for a in self.terms)

    def dilate(self, t) -> "Poly":
        t = as_fraction(t)
        return Poly._raw(
            {a: c * t ** self.wdeg(a) for a, c in self.terms.items() if t or not self.wdeg(a)},
            self.weights,
        )

    # substitution ---------------------------------------------------------
    def compose(self, subs: Sequence["Poly"], order: int | None = None) -> "Poly":
        """Substitute ``x_i -> subs[i]``; with ``order`` the result is a jet of that weighted order."""
        if len(subs) != self.nvars:
            raise DimensionError(f"{len(subs)} substitutions for {self.nvars} variables")
        if not subs:
            return Poly.const(self.constant_term(), ())
        target = subs[0].weights
        powers = [_PowerCache(s, order) for s in subs]
        out = Poly.zero(target)
        for a, c in sorted(self.terms.items()):
            term = Poly.const(c, target)
            for i, e in enumerate(a):
                if e:
                    term = term.mul(powers[i].get(e), order) if order is not None else term * powers[i].get(e)
                    if term.is_zero():
                        break
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.nvars:
            raise DimensionError(f"point of length {len(point)} for {self.nvars} variables")
        pt = [as_fraction(v) for v in point]
        total = Fraction(0)
        for a, c in self.terms.items():
            v = c
            for x, e in zip(pt, a):
                if e:
                    v *= x ** e
            total += v
        return total

    def embed(self, weights, positions: Sequence[int]) -> "Poly":
        """Re-home the variables into a larger ring; variable ``i`` goes to slot ``positions[i]``."""
        w = _weights_tuple(weights)
        m = len(w)
        out = {}
        for a, c in self.terms.items():
            b = [0] * m
            for i, e in enumerate(a):
                b[positions[i]] += e
            out[tuple(b)] = c
        return Poly._raw(out, w)

    # ordering / serialization ---------------------------------------------
    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (self.wdeg(kv[0]), kv[0]))

    def to_json(self) -> list:
        return [
            {"exponents": list(a), "num": str(c.numerator), "den": str(c.denominator)}
            for a, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping], weights) -> "Poly":
        return cls({tuple(t["exponents"]): Fraction(int(t["num"]), int(t["den"])) for t in data}, weights)

    def compile(self):
        """Exponent matrix and float coefficients, for vectorized numeric evaluation."""
        if not self.terms:
            return np.zeros((0, self.nvars), dtype=np.int64), np.zeros(0)
        items = self.sorted_terms()
        exps = np.array([a for a, _ in items], dtype=np.int64).reshape(len(items), self.nvars)
        coeffs = np.array([float(c) for _, c in items])
        return exps, coeffs


def _wdeg(alpha, w) -> int:
    return sum(a * b for a, b in zip(alpha, w))


class _PowerCache:
    def __init__(self, base: Poly, order):
        self.base = base
        self.order = order
        self.cache = {0: Poly.const(1, base.weights), 1: base if order is None else base.truncate(order)}

    def get(self, k: int) -> Poly:
        if k not in self.cache:
            half = self.get(k // 2)
            sq = half.mul(half, self.order) if self.order is not None else half * half
            self.cache[k] = sq if k % 2 == 0 else (
                sq.mul(self.cache[1], self.order) if self.order is not None else sq * self.cache[1])
        return self.cache[k]


def format_poly(p: Poly, names: Sequence[str] | None = None) -> str:
    """Render in the expression syntax accepted by the parser (``1/2*x1*x2^2``)."""
    if names is None:
        names = [f"x{i + 1}" for i in range(p.nvars)]
    if not p.terms:
        return "0"
    pieces = []
    for a, c in p.sorted_terms():
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, a) if e)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{_fmt_rational(mag)}*{mono}"
        else:
            body = _fmt_rational(mag)
        pieces.append(("-" if c < 0 else "+", body))
    first_sign, first = pieces[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# module-level operations ------------------------------------------------------

def dilate(p: Poly, t) -> Poly:
    return p.dilate(t)


def homogeneous_parts(p: Poly) -> dict:
    return p.homogeneous_parts()


def weight_of(p: Poly):
    return p.weight()


def anisotropic_taylor_split(p: Poly, order: int) -> tuple:
    """Split ``p`` into terms of weighted degree ``< order`` and a remainder of weight ``>= order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    low = p.truncate(order)
    return low, p - low


def pseudo_norm(x: Sequence[float], w) -> float:
    """``max_i |x_i|**(1/w_i)``, homogeneous of degree one under the dilations."""
    w = _weights_tuple(w)
    if len(x) != len(w):
        raise DimensionError(f"vector of length {len(x)} against {len(w)} weights")
    return max((abs(float(v)) ** (1.0 / wi) for v, wi in zip(x, w)), default=0.0)


def pseudo_norm_sum(x: Sequence[float], w) -> float:
    """``sum_i |x_i|**(1/w_i)``; equivalent to :func:`pseudo_norm` within a factor ``n``."""
    w = _weights_tuple(w)
    if len(x) != len(w):
        raise DimensionError(f"vector of length {len(x)} against {len(w)} weights")
    return sum(abs(float(v)) ** (1.0 / wi) for v, wi in zip(x, w))


def dilate_point(x: Sequence, t, w) -> list:
    w = _weights_tuple(w)
    return [v * t ** wi for v, wi in zip(x, w)]


def identity_map(weights) -> list:
    return [Poly.var(i, weights) for i in range(len(_weights_tuple(weights)))]


def compose_maps(outer: Sequence[Poly], inner: Sequence[Poly], order: int | None = None) -> list:
    """Components of ``outer o inner``."""
    return [p.compose(inner, order) for p in outer]


def multi_indices(n: int, w, max_wdeg: int, min_total: int = 0):
    """All exponent tuples with weighted degree ``<= max_wdeg``, graded by (wdeg, lex)."""
    w = _weights_tuple(w)
    out = []

    def rec(i, prefix, deg):
        if i == n:
            if sum(prefix) >= min_total:
                out.append(tuple(prefix))
            return
        e = 0
        while deg + e * w[i] <= max_wdeg:
            rec(i + 1, prefix + [e], deg + e * w[i])
            e += 1

    rec(0, [], 0)
    out.sort(key=lambda a: (_wdeg(a, w), a))
    return out


@dataclass(frozen=True)
class Jet:
    """A polynomial germ known only below weighted order ``order``."""

    poly: Poly
    order: int

    def __post_init__(self):
        object.__setattr__(self, "poly", self.poly.truncate(self.order))

    def __add__(self, other: "Jet") -> "Jet":
        return Jet(self.poly + other.poly, min(self.order, other.order))

    def __sub__(self, other: "Jet") -> "Jet":
        return Jet(self.poly - other.poly, min(self.order, other.order))

    def __mul__(self, other: "Jet") -> "Jet":
        order = min(self.order, other.order)
        return Jet(self.poly.mul(other.poly, order), order)

    def is_zero(self) -> bool:
        return self.poly.is_zero()
