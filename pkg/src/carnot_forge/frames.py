"""Carnot charts: weight sequences, H-frames, the bracket condition and structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import DimensionError, FrameError
from .poly import Poly, WeightSequence
from .vf import VectorField, format_field, lie_bracket


def weights_from_type(ranks: Sequence[int]) -> WeightSequence:
    """``w_j = min{w : j <= m_w}`` for a type ``(m_1 < ... < m_r)``."""
    return WeightSequence.from_type(ranks)


def default_jet_order(w: WeightSequence) -> int:
    return 2 * w.step + 1


class Frame:
    """An ordered H-frame ``(X_1, ..., X_n)`` around the chart origin."""

    def __init__(self, weights, fields: Sequence[VectorField], jet_order: int | None = None):
        # jet_order is None for exact polynomial frames, else the weighted truncation order
        self.jet_order = jet_order
        if not isinstance(weights, WeightSequence):
            weights = WeightSequence(tuple(weights))
        self.w = weights
        self.fields = tuple(fields)
        if len(self.fields) != weights.n:
            raise DimensionError(f"{len(self.fields)} fields for {weights.n} weights")
        for X in self.fields:
            if X.weights != weights.weights:
                raise DimensionError("field coefficients must use the frame's weights")

    @property
    def n(self) -> int:
        return self.w.n

    @property
    def r(self) -> int:
        return self.w.step

    @property
    def weights(self) -> tuple:
        return self.w.weights

    def __getitem__(self, j) -> VectorField:
        return self.fields[j]

    def __iter__(self):
        return iter(self.fields)

    def __eq__(self, other):
        return isinstance(other, Frame) and self.w == other.w and self.fields == other.fields

    def matrix(self) -> list:
        """``B(x)`` with rows indexed by fields: ``B[j][k] = b_{jk}``."""
        return [list(X.coeffs) for X in self.fields]

    def matrix_at_origin(self) -> list:
        return [list(X.at_origin()) for X in self.fields]

    def is_linearly_adapted(self) -> bool:
        return self.matrix_at_origin() == linalg.identity(self.n)

    def __repr__(self):
        return f"Frame(w={self.weights}, [{'; '.join(format_field(X) for X in self.fields)}])"

    def to_json(self) -> dict:
        return {"weights": list(self.weights), "fields": [format_field(X) for X in self.fields]}


@dataclass(frozen=True)
class StructureConstants:
    """``L_ij^k`` at the base point for ``w_k = w_i + w_j`` (1-based indices, zeros omitted)."""

    weights: tuple
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "data", {k: Fraction(v) for k, v in self.data.items() if v})

    def __getitem__(self, key) -> Fraction:
        return self.data.get(tuple(key), Fraction(0))

    def is_antisymmetric(self) -> bool:
        return all(self[(j, i, k)] == -v for (i, j, k), v in self.data.items())

    def to_json(self) -> list:
        return [[i, j, k, str(v)] for (i, j, k), v in sorted(self.data.items())]

    @classmethod
    def from_json(cls, weights, quads) -> "StructureConstants":
        return cls(tuple(weights), {(int(i), int(j), int(k)): Fraction(v) for i, j, k, v in quads})


@dataclass
class BracketExpansion:
    i: int
    j: int
    coefficients: list  # jets c_k with [X_i, X_j] = sum_k c_k X_k
    allowed: int  # components with w_k > allowed must vanish


@dataclass
class ValidationReport:
    valid: bool
    jet_order: int
    frame_invertible: bool
    violations: list = field(default_factory=list)
    expansions: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "jet_order": self.jet_order,
            "frame_invertible": self.frame_invertible,
            "violations": self.violations,
            "expansions": [
                {"i": e.i, "j": e.j, "coefficients": [c.to_json() for c in e.coefficients]}
                for e in self.expansions
            ],
        }


def transpose_inverse_jet(frame: Frame, order: int) -> list:
    """Jet of ``(B(x)^T)^{-1}`` to weighted order ``order`` by Neumann iteration."""
    n = frame.n
    w = frame.weights
    Bt = linalg.transpose(frame.matrix())
    try:
        M0_inv = linalg.inverse([[p.constant_term() for p in row] for row in Bt])
    except FrameError:
        raise FrameError("the frame is not a basis at the origin: B(0) is singular") from None
    E = [[p - p.constant_term() for p in row] for row in Bt]
    # -M0^{-1} E as a polynomial matrix
    K = [[sum((E[l][c].scale(-M0_inv[r][l]) for l in range(n)), Poly.zero(w)) for c in range(n)] for r in range(n)]
    const = [[Poly.const(v, w) for v in row] for row in M0_inv]
    total = [row[:] for row in const]
    term = const
    for _ in range(order + 1):
        term = [[
            sum((K[r][l].mul(term[l][c], order) for l in range(n)), Poly.zero(w))
            for c in range(n)] for r in range(n)]
        if all(p.is_zero() for row in term for p in row):
            break
        total = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(total, term)]
    return [[p.truncate(order) for p in row] for row in total]


def expand_in_frame(frame: Frame, Z: VectorField, order: int, inv=None) -> list:
    """Jets ``c_k`` with ``Z = sum_k c_k X_k`` (solves ``B^T c = Z``)."""
    if inv is None:
        inv = transpose_inverse_jet(frame, order)
    n = frame.n
    return [
        sum((inv[k][l].mul(Z.coeffs[l], order) for l in range(n)), Poly.zero(frame.weights))
        for k in range(n)
    ]


def validate_frame(frame: Frame, order: int | None = None) -> ValidationReport:
    """Check invertibility at the origin and ``[H_w, H_w'] in H_{w+w'}`` to weighted jet order ``order``."""
    if order is None:
        order = default_jet_order(frame.w)
    inv = transpose_inverse_jet(frame, order)  # FrameError when B(0) is singular
    w, r, n = frame.weights, frame.r, frame.n
    violations, expansions = [], []
    for i in range(n):
        for j in range(i + 1, n):
            bracket = lie_bracket(frame[i], frame[j])
            coeffs = expand_in_frame(frame, bracket, order, inv)
            allowed = min(w[i] + w[j], r)
            expansions.append(BracketExpansion(i + 1, j + 1, coeffs, allowed))
            for k in range(n):
                if w[k] > allowed and not coeffs[k].is_zero():
                    alpha, c = coeffs[k].sorted_terms()[0]
                    violations.append({
                        "i": i + 1, "j": j + 1, "k": k + 1,
                        "term": {"exponents": list(alpha), "coefficient": str(c)},
                    })
    return ValidationReport(not violations, order, True, violations, expansions)


def structure_constants_at_base(frame: Frame) -> StructureConstants:
    """Solve ``B(0)^T L = [X_i, X_j](0)`` and keep the entries with ``w_k = w_i + w_j``."""
    n, w = frame.n, frame.weights
    inv = linalg.inverse(linalg.transpose(frame.matrix_at_origin()))
    data = {}
    for i in range(n):
        for j in range(i + 1, n):
            if w[i] + w[j] > frame.r:
                continue
            v = lie_bracket(frame[i], frame[j]).at_origin()
            L = linalg.matvec(inv, v)
            for k in range(n):
                if w[k] == w[i] + w[j] and L[k]:
                    data[(i + 1, j + 1, k + 1)] = L[k]
                    data[(j + 1, i + 1, k + 1)] = -L[k]
    return StructureConstants(w, data)


def coordinate_frame(weights) -> Frame:
    w = WeightSequence(tuple(weights)) if not isinstance(weights, WeightSequence) else weights
    return Frame(w, [VectorField.coordinate(j, w.weights) for j in range(w.n)])
