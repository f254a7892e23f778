"""Linearly adapted and privileged coordinates, frame pushforward and the privilegedness checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .errors import FrameError, PreconditionError
from .frames import Frame, default_jet_order
from .poly import Poly, format_poly, identity_map, multi_indices, weighted_degree, factorial_multi
from .vf import (
    VectorField, apply, homogeneous_part_vf, operator_monomial, operator_parts,
    ordered_monomial_values, order_of, weight_of_vf, _OrderedMonomials,
)


@dataclass
class CoordinateChange:
    """A polynomial germ ``y = phi(x)`` fixing 0, with its inverse.

    ``inverse`` is exact when ``exact`` is true; otherwise it is a jet of weighted order ``order``.
    """

    forward: list
    inverse: list
    order: int
    exact: bool = True

    @property
    def weights(self) -> tuple:
        return self.forward[0].weights

    @property
    def n(self) -> int:
        return len(self.forward)

    @classmethod
    def identity(cls, weights) -> "CoordinateChange":
        w = tuple(weights)
        return cls(identity_map(w), identity_map(w), 2 * max(w) + 1, True)

    @classmethod
    def linear(cls, A, weights) -> "CoordinateChange":
        """``y = A x`` for an invertible rational matrix ``A``."""
        w = tuple(weights)
        Ainv = linalg.inverse(A)
        return cls(_linear_map(A, w), _linear_map(Ainv, w), 2 * max(w) + 1, True)

    def is_identity(self) -> bool:
        return self.forward == identity_map(self.weights)

    def jacobian_at_origin(self) -> list:
        n = self.n
        return [[p.coefficient(tuple(int(i == j) for i in range(n))) for j in range(n)] for p in self.forward]

    def __call__(self, point: Sequence) -> list:
        return [p.evaluate(point) for p in self.forward]

    def then(self, other: "CoordinateChange") -> "CoordinateChange":
        """``other o self``: apply ``self`` first."""
        fwd = [p.compose(self.forward) for p in other.forward]
        exact = self.exact and other.exact
        order = min(self.order, other.order)
        inv = [p.compose(other.inverse, None if exact else order) for p in self.inverse]
        if not exact:
            inv = [p.truncate(order) for p in inv]
        return CoordinateChange(fwd, inv, order, exact)

    def to_json(self) -> dict:
        return {
            "forward": [format_poly(p) for p in self.forward],
            "inverse": [format_poly(p) for p in self.inverse],
            "jet_order": self.order,
            "exact_inverse": self.exact,
        }


def _linear_map(A, w) -> list:
    n = len(w)
    return [sum((Poly.var(j, w).scale(A[k][j]) for j in range(n) if A[k][j]), Poly.zero(w)) for k in range(n)]


def _linear_part(components: Sequence[Poly]) -> list:
    n = len(components)
    return [[p.coefficient(tuple(int(i == j) for i in range(n))) for j in range(n)] for p in components]


def invert_map(forward: Sequence[Poly], order: int | None = None) -> tuple:
    """Inverse of a polynomial germ fixing 0, as ``(components, exact)``.

    Fixed-point iteration ``G = L^{-1}(y - Q(G))`` on jets of weighted order ``order``, where ``L`` is
    the linear part and ``Q`` the rest.  The result is reported exact when the truncated inverse
    composes to the identity without truncation, which is the case for weight-triangular maps.
    """
    forward = list(forward)
    w = forward[0].weights
    if order is None:
        order = 2 * max(w) + 1
    if any(p.constant_term() for p in forward):
        raise PreconditionError("coordinate change must fix the origin")
    L = _linear_part(forward)
    try:
        Linv = linalg.inverse(L)
    except FrameError as exc:
        raise FrameError("coordinate change has a non-invertible linear part") from exc
    Q = [p - q for p, q in zip(forward, _linear_map(L, w))]
    y = identity_map(w)
    G = _linear_map(Linv, w)
    for _ in range(4 * order + 4):
        QG = [q.compose(G, order) for q in Q]
        rhs = [a - b for a, b in zip(y, QG)]
        new = [sum((rhs[j].scale(Linv[k][j]) for j in range(len(w)) if Linv[k][j]), Poly.zero(w)).truncate(order)
               for k in range(len(w))]
        if new == G:
            break
        G = new
    exact = [p.compose(G) for p in forward] == y
    return G, exact


def invert_triangular(change: CoordinateChange | Sequence[Poly], order: int | None = None) -> CoordinateChange:
    """Invert a change whose graded leading part is triangular; exact when the inverse is polynomial."""
    forward = change.forward if isinstance(change, CoordinateChange) else list(change)
    w = forward[0].weights
    order = order or (change.order if isinstance(change, CoordinateChange) else 2 * max(w) + 1)
    inv, exact = invert_map(forward, order)
    return CoordinateChange(list(forward), inv, order, exact)


def pushforward(frame: Frame, change: CoordinateChange) -> Frame:
    """``phi_* X (y) = phi'(phi^{-1}(y)) X(phi^{-1}(y))`` for every field of the frame."""
    order = None if change.exact else change.order
    fields = []
    for X in frame.fields:
        comps = []
        for phi_k in change.forward:
            c = apply(X, phi_k).compose(change.inverse, order)
            comps.append(c if order is None else c.truncate(order))
        fields.append(VectorField(comps))
    jet = frame.jet_order
    if order is not None:
        jet = order if jet is None else min(jet, order)
    return Frame(frame.w, fields, jet)


def linear_adaptation(frame: Frame) -> CoordinateChange:
    """``T(x) = (B(0)^T)^{-1} x``."""
    A = linalg.inverse(linalg.transpose(frame.matrix_at_origin()))
    return CoordinateChange.linear(A, frame.weights)


def linearly_adapt(frame: Frame) -> tuple:
    """``(T, T_* X)`` with ``(T_* X_j)(0) = d_j``."""
    T = linear_adaptation(frame)
    return T, pushforward(frame, T)


def _admissible(alphas: list) -> bool:
    seen_max = 0
    for a in alphas:
        s = sum(a)
        if s < seen_max:
            return False
        seen_max = s
    return True


def psi_hat_coefficients(frame: Frame, order_key: Callable | None = None) -> dict:
    """Coefficients ``a_{k alpha}`` of the privileging polynomial change, keyed by ``(k, alpha)`` (0-based ``k``).

    Solves ``alpha! a_{k alpha} = -X^alpha(x_k)(0) - sum_{|beta| < |alpha|} a_{k beta} X^alpha(x^beta)(0)``
    in increasing ``|alpha|``.  ``order_key`` may reorder the multi-indices as long as ``|alpha|``
    stays non-decreasing (used to test that the result does not depend on the enumeration).
    """
    if not frame.is_linearly_adapted():
        raise PreconditionError("psi_hat needs a linearly adapted frame")
    w = frame.weights
    n = frame.n
    out = {}
    mono_eval = {}

    def monomial_values(beta):
        if beta not in mono_eval:
            mono_eval[beta] = _OrderedMonomials(frame.fields, Poly.monomial(beta, w))
        return mono_eval[beta]

    for k in range(n):
        alphas = [a for a in multi_indices(n, w, w[k] - 1, min_total=2)]
        alphas.sort(key=lambda a: (sum(a), weighted_degree(a, w), a))
        if order_key is not None:
            alphas = sorted(alphas, key=order_key)
            if not _admissible(alphas):
                raise ValueError("enumeration order must keep |alpha| non-decreasing")
        done = {}
        xk = monomial_values(tuple(int(i == k) for i in range(n)))
        for alpha in alphas:
            rhs = -xk.value_at_zero(alpha)
            for beta, a_beta in done.items():
                if sum(beta) < sum(alpha):
                    rhs -= a_beta * monomial_values(beta).value_at_zero(alpha)
            a = rhs / factorial_multi(alpha)
            done[alpha] = a
        for alpha, a in done.items():
            if a:
                out[(k, alpha)] = a
    return out


def psi_hat(frame: Frame, order_key: Callable | None = None) -> CoordinateChange:
    """``psi_hat_k(x) = x_k + sum a_{k alpha} x^alpha`` over ``<alpha> < w_k``, ``|alpha| >= 2``."""
    w = frame.weights
    coeffs = psi_hat_coefficients(frame, order_key)
    comps = []
    for k in range(frame.n):
        terms = {tuple(int(i == k) for i in range(frame.n)): Fraction(1)}
        terms.update({alpha: a for (kk, alpha), a in coeffs.items() if kk == k})
        comps.append(Poly(terms, w))
    return invert_triangular(comps, default_jet_order(frame.w))


@dataclass
class PrivilegeResult:
    T: CoordinateChange
    psi_hat: CoordinateChange
    psi: CoordinateChange
    frame: Frame
    report: "PrivilegedReport"

    def to_json(self) -> dict:
        return {
            "linear_adaptation": self.T.to_json(),
            "psi_hat": self.psi_hat.to_json(),
            "psi": self.psi.to_json(),
            "frame": self.frame.to_json(),
            "report": self.report.to_json(),
        }


def privilege(frame: Frame, order_key: Callable | None = None) -> PrivilegeResult:
    """``psi = psi_hat o T`` and the privileged frame ``psi_* X``."""
    T, adapted = linearly_adapt(frame)
    ph = psi_hat(adapted, order_key)
    pushed = pushforward(adapted, ph)
    return PrivilegeResult(T, ph, T.then(ph), pushed, is_privileged(pushed))


@dataclass
class PrivilegedReport:
    verdict: bool
    linearly_adapted: bool
    coordinates: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "linearly_adapted": self.linearly_adapted, "coordinates": self.coordinates}


def is_privileged(frame: Frame) -> PrivilegedReport:
    """Order-based check: linear adaptation and ``X^alpha(x_k)(0) = 0`` for ``<alpha> < w_k``, ``X_k x_k (0) = 1``."""
    w = frame.weights
    n = frame.n
    adapted = frame.is_linearly_adapted()
    coords = []
    ok_all = adapted
    for k in range(n):
        xk = Poly.var(k, w)
        alphas = multi_indices(n, w, w[k] - 1)
        vals = ordered_monomial_values(frame.fields, xk, alphas + [tuple(int(i == k) for i in range(n))])
        bad = [a for a in alphas if vals[a] != 0]
        unit = vals[tuple(int(i == k) for i in range(n))]
        ok = not bad and unit == 1
        ok_all = ok_all and ok
        entry = {"k": k + 1, "weight": w[k], "ok": ok, "diagonal": str(unit)}
        if bad:
            entry["witness"] = {"alpha": list(bad[0]), "value": str(vals[bad[0]])}
        coords.append(entry)
    return PrivilegedReport(ok_all, adapted, coords)


def coordinate_orders(frame: Frame, cap: int | None = None) -> list:
    return [order_of(frame.fields, frame.weights, Poly.var(k, frame.weights), cap) for k in range(frame.n)]


@dataclass
class WeightReport:
    verdict: bool
    field_weights: list
    operator_check: bool | None = None
    operator_witness: dict | None = None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "field_weights": [str(v) for v in self.field_weights]}
        if self.operator_check is not None:
            out["operator_check"] = self.operator_check
            out["operator_witness"] = self.operator_witness
        return out


def weights_ok(frame: Frame, operators: bool = False) -> WeightReport:
    """Weight-based check: every ``X_j`` has weight ``-w_j``.

    With ``operators=True`` it also checks that every ``X^alpha`` with ``<alpha> <= r`` has weight
    ``-<alpha>`` and folds that into the verdict.
    """
    if not frame.is_linearly_adapted():
        raise PreconditionError("weights_ok needs a linearly adapted frame")
    w = frame.weights
    ws = [weight_of_vf(X) for X in frame.fields]
    verdict = all(v == -wj for v, wj in zip(ws, w))
    if not operators:
        return WeightReport(verdict, ws)
    op_ok, witness = operator_weights_ok(frame)
    return WeightReport(verdict and op_ok, ws, op_ok, witness)


def operator_weights_ok(frame: Frame, max_weight: int | None = None) -> tuple:
    """Check ``weight(X^alpha) = -<alpha>`` for ``1 <= <alpha> <= max_weight`` (default ``r``)."""
    w = frame.weights
    if max_weight is None:
        max_weight = frame.r
    for alpha in multi_indices(frame.n, w, max_weight, min_total=1):
        parts = operator_parts(operator_monomial(frame.fields, alpha))
        got = min(parts, default=None)
        if got != -weighted_degree(alpha, w):
            return False, {"alpha": list(alpha), "weight": got}
    return True, None


def model_fields(frame: Frame) -> list:
    """``X_j^{(a)}``: the homogeneous part of ``X_j`` of degree ``-w_j``."""
    report = weights_ok(frame)
    if not report.verdict:
        raise PreconditionError("model fields need every X_j to have weight -w_j")
    return [homogeneous_part_vf(X, -wj) for X, wj in zip(frame.fields, frame.weights)]


@dataclass
class PreservingReport:
    verdict: bool
    low_degree_terms: list
    phi_hat: list | None
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "low_degree_terms": self.low_degree_terms,
            "phi_hat": None if self.phi_hat is None else [format_poly(p) for p in self.phi_hat],
        }


def change_is_privileged_preserving(change: CoordinateChange | Sequence[Poly], frame: Frame | None = None) -> PreservingReport:
    """A change keeps privileged coordinates privileged iff ``phi = phi_hat + higher`` with ``phi_hat`` homogeneous, ``phi_hat'(0) = id``."""
    if frame is not None and not is_privileged(frame).verdict:
        raise PreconditionError("the frame must be privileged")
    forward = change.forward if isinstance(change, CoordinateChange) else list(change)
    w = forward[0].weights
    low = []
    hat = []
    for k, p in enumerate(forward):
        for d, part in p.homogeneous_parts().items():
            if d < w[k]:
                low.append({"k": k + 1, "degree": d, "part": format_poly(part)})
        hat.append(p.homogeneous_part(w[k]))
    if low:
        return PreservingReport(False, low, None, "terms of weighted degree below w_k")
    if _linear_part(hat) != linalg.identity(len(w)):
        return PreservingReport(False, low, hat, "leading part does not have identity linear part")
    return PreservingReport(True, low, hat)
