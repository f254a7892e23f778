"""Graded nilpotent Lie algebras, the Dynkin product, exponential maps and polynomial group laws.

Group-law convention: ``x.y`` is the time-1 flow of ``sum_j (log x)_j Y_j`` started at ``y``.  With
this convention the basis fields ``Y_j`` are the generators of left translations,
``d/ds (exp(s e_j) . y)|_{s=0} = Y_j(y)``, and in exponential coordinates ``x.y = dynkin(y, x)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .errors import AlgebraError, DimensionError, PreconditionError
from .frames import Frame, StructureConstants
from .poly import Poly, WeightSequence, format_poly, identity_map
from .privileged import CoordinateChange, invert_map, pushforward
from .vf import VectorField, format_field, is_homogeneous_vf, lie_bracket


# Lie algebras ------------------------------------------------------------------

class GradedLieAlgebra:
    """Structure constants ``c_ij^k`` (1-based keys) on a basis ``e_1, ..., e_n`` of weights ``w``."""

    def __init__(self, weights, constants: dict | StructureConstants, validate: bool = True):
        if not isinstance(weights, WeightSequence):
            weights = WeightSequence(tuple(weights))
        self.w = weights
        data = constants.data if isinstance(constants, StructureConstants) else constants
        self.c = {tuple(int(v) for v in k): Fraction(v) for k, v in data.items() if Fraction(v)}
        self._table = {}
        for (i, j, k), v in self.c.items():
            self._table.setdefault((i - 1, j - 1), []).append((k - 1, v))
        if validate:
            self.validate()

    @property
    def n(self) -> int:
        return self.w.n

    @property
    def r(self) -> int:
        return self.w.step

    @property
    def weights(self) -> tuple:
        return self.w.weights

    def __getitem__(self, key) -> Fraction:
        return self.c.get(tuple(key), Fraction(0))

    def validate(self) -> None:
        n, w = self.n, self.weights
        for (i, j, k), v in self.c.items():
            if not (1 <= i <= n and 1 <= j <= n and 1 <= k <= n):
                raise AlgebraError(f"index out of range in c_{i}{j}^{k}", {"i": i, "j": j, "k": k})
            if self[(j, i, k)] != -v:
                raise AlgebraError(f"c_{i}{j}^{k} is not antisymmetric", {"i": i, "j": j, "k": k})
            if w[k - 1] != w[i - 1] + w[j - 1]:
                raise AlgebraError(f"c_{i}{j}^{k} breaks the grading", {"i": i, "j": j, "k": k})
        witness = self.jacobi_witness()
        if witness is not None:
            raise AlgebraError("Jacobi identity fails", witness)

    def jacobi_witness(self):
        """First ``(i, j, k, l)`` where ``sum_m c_ij^m c_mk^l + cyclic`` is nonzero, else ``None``."""
        n = self.n
        basis = [[Fraction(int(a == b)) for a in range(n)] for b in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    ei, ej, ek = basis[i], basis[j], basis[k]
                    s = [a + b + c for a, b, c in zip(
                        self.bracket(self.bracket(ei, ej), ek),
                        self.bracket(self.bracket(ej, ek), ei),
                        self.bracket(self.bracket(ek, ei), ej))]
                    for l, v in enumerate(s):
                        if v:
                            return {"i": i + 1, "j": j + 1, "k": k + 1, "l": l + 1, "value": str(v)}
        return None

    def bracket(self, u: Sequence, v: Sequence) -> list:
        """``[u, v]`` for coefficient vectors over any commutative ring containing the rationals."""
        out = [x * 0 for x in u]
        for (i, j), entries in self._table.items():
            if not u[i] or not v[j]:
                continue
            prod = u[i] * v[j]
            for k, c in entries:
                out[k] = out[k] + c * prod
        return out

    def is_abelian(self) -> bool:
        return not self.c

    def to_json(self) -> dict:
        return {
            "weights": list(self.weights),
            "constants": [[i, j, k, str(v)] for (i, j, k), v in sorted(self.c.items())],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GradedLieAlgebra":
        return cls(doc["weights"], {(int(i), int(j), int(k)): Fraction(str(v)) for i, j, k, v in doc["constants"]})

    def __eq__(self, other):
        return isinstance(other, GradedLieAlgebra) and self.w == other.w and self.c == other.c


def algebra_from_constants(L: StructureConstants | dict, weights) -> GradedLieAlgebra:
    return GradedLieAlgebra(weights, L)


# Dynkin product ------------------------------------------------------------------

def _block_sequences(depth: int):
    """All ``((a_1, b_1), ..., (a_k, b_k))`` with ``a_i + b_i >= 1`` and total length ``<= depth``."""
    def rec(remaining):
        yield ()
        for a in range(remaining + 1):
            for b in range(remaining + 1 - a):
                if a + b == 0:
                    continue
                for rest in rec(remaining - a - b):
                    yield ((a, b),) + rest
    for seq in rec(depth):
        if seq:
            yield seq


@lru_cache(maxsize=None)
def dynkin_words(depth: int) -> tuple:
    """Words in ``X``/``Y`` with their coefficients in the Dynkin double sum.

    The block sequence ``(a_1, b_1, ..., a_k, b_k)`` contributes
    ``(-1)^{k+1}/k * 1/(|a|+|b|) * 1/prod(a_i! b_i!)`` times the right-nested bracket of
    ``X^{a_1} Y^{b_1} ... X^{a_k} Y^{b_k}``; a word ending in ``XX`` or ``YY`` gives zero.
    """
    coeffs: dict = {}
    for seq in _block_sequences(depth):
        k = len(seq)
        m = sum(a + b for a, b in seq)
        denom = 1
        word = ()
        for a, b in seq:
            denom *= factorial(a) * factorial(b)
            word += ("X",) * a + ("Y",) * b
        if m >= 2 and word[-1] == word[-2]:
            continue
        c = Fraction((-1) ** (k + 1), k * m * denom)
        coeffs[word] = coeffs.get(word, 0) + c
    return tuple(sorted((w, c) for w, c in coeffs.items() if c))


def dynkin(g: GradedLieAlgebra, xi: Sequence, eta: Sequence) -> list:
    """``xi . eta = xi + eta + 1/2 [xi, eta] + ...`` truncated at bracket length ``r``.

    Works over any coefficient ring (rationals or polynomials).
    """
    if len(xi) != g.n or len(eta) != g.n:
        raise DimensionError("vectors must have the algebra's dimension")
    letters = {"X": list(xi), "Y": list(eta)}
    memo: dict = {}

    def nested(word):
        if word in memo:
            return memo[word]
        if len(word) == 1:
            out = letters[word[0]]
        else:
            out = g.bracket(letters[word[0]], nested(word[1:]))
        memo[word] = out
        return out

    total = [x * 0 for x in xi]
    for word, c in dynkin_words(g.r):
        v = nested(word)
        total = [t + c * x if x else t for t, x in zip(total, v)]
    return total


# canonical bases, exponential maps -----------------------------------------------

def _flow_ring(w: tuple) -> tuple:
    # variables: xi_1..xi_n, y_1..y_n, t
    return tuple(w) + tuple(w) + (1,)


def _integrate_t(p: Poly, t_index: int) -> Poly:
    out = {}
    for a, c in p.terms.items():
        e = a[t_index]
        b = a[:t_index] + (e + 1,) + a[t_index + 1:]
        out[b] = c / (e + 1)
    return Poly(out, p.weights)


class CanonicalBasis:
    """Vector fields ``Y_1, ..., Y_n`` with ``Y_j(0) = d_j`` and ``Y_j`` homogeneous of degree ``-w_j``."""

    def __init__(self, fields: Sequence[VectorField], check: bool = True):
        self.fields = tuple(fields)
        self.weights = self.fields[0].weights
        if check:
            problems = self.problems()
            if problems:
                raise PreconditionError("not a canonical basis: " + "; ".join(problems))
        self._flow = None
        self._exp = None
        self._log = None

    @classmethod
    def from_frame(cls, frame: Frame, check: bool = True) -> "CanonicalBasis":
        return cls(frame.fields, check)

    @property
    def n(self) -> int:
        return len(self.fields)

    def __getitem__(self, j):
        return self.fields[j]

    def __iter__(self):
        return iter(self.fields)

    def problems(self) -> list:
        out = []
        n = self.n
        for j, Y in enumerate(self.fields):
            if list(Y.at_origin()) != [Fraction(int(k == j)) for k in range(n)]:
                out.append(f"Y_{j + 1}(0) != d_{j + 1}")
            if not is_homogeneous_vf(Y, -self.weights[j]):
                out.append(f"Y_{j + 1} is not homogeneous of degree {-self.weights[j]}")
        return out

    def as_frame(self) -> Frame:
        return Frame(self.weights, self.fields)

    def flow_map(self) -> list:
        """Components of ``exp(sum xi_j Y_j)(y)`` as polynomials in ``(xi, y)`` (``2n`` variables)."""
        if self._flow is None:
            self._flow = _symbolic_flow(self.fields, self.weights)
        return self._flow

    def exp_map(self) -> list:
        if self._exp is None:
            n = self.n
            w = self.weights
            subs = identity_map(w) + [Poly.zero(w)] * n
            self._exp = [p.compose(subs) for p in self.flow_map()]
        return self._exp

    def log_map(self) -> list:
        if self._log is None:
            inv, exact = invert_map(self.exp_map(), 2 * max(self.weights) + 1)
            if not exact:
                raise AlgebraError("exponential map did not invert exactly")
            self._log = inv
        return self._log

    def to_json(self) -> list:
        return [format_field(Y) for Y in self.fields]


def _symbolic_flow(fields: Sequence[VectorField], w: tuple) -> list:
    """Exact flow of ``sum xi_j Y_j`` from ``y`` by integrating the weight-triangular system in ``t``."""
    n = len(w)
    ring = _flow_ring(w)
    t_index = 2 * n
    xi = [Poly.var(j, ring) for j in range(n)]
    y = [Poly.var(n + j, ring) for j in range(n)]
    x: list = [None] * n
    for k in sorted(range(n), key=lambda k: w[k]):
        subs = []
        for l in range(n):
            subs.append(x[l] if x[l] is not None else Poly.zero(ring))
        integrand = Poly.zero(ring)
        for j, Y in enumerate(fields):
            b = Y.coeffs[k]
            if b.is_zero():
                continue
            for alpha in b.terms:
                for l, e in enumerate(alpha):
                    if e and x[l] is None:
                        raise PreconditionError("basis is not triangular in the weights")
            integrand = integrand + xi[j] * b.compose(subs)
        x[k] = y[k] + _integrate_t(integrand, t_index)
    out_ring = tuple(w) + tuple(w)
    at_one = [Poly.var(i, out_ring) for i in range(2 * n)] + [Poly.const(1, out_ring)]
    return [p.compose(at_one) for p in x]


def exp_model(basis: CanonicalBasis, xi: Sequence) -> list:
    return [p.evaluate(xi) for p in basis.exp_map()]


def exp_map(basis: CanonicalBasis) -> list:
    return basis.exp_map()


def log_model(basis: CanonicalBasis) -> list:
    return basis.log_map()


def basis_from_algebra(g: GradedLieAlgebra) -> CanonicalBasis:
    """Generators of left translations in exponential coordinates: ``Y_j(x) = d/ds dynkin(x, s e_j)|_0``."""
    n = g.n
    w = g.weights
    ring = tuple(w) + (1,)  # x_1..x_n, s
    x = [Poly.var(i, ring) for i in range(n)]
    s = Poly.var(n, ring)
    fields = []
    back = [Poly.var(i, w) for i in range(n)] + [Poly.zero(w)]
    for j in range(n):
        e = [s if i == j else Poly.zero(ring) for i in range(n)]
        prod = dynkin(g, x, e)
        fields.append(VectorField([p.diff(n).compose(back) for p in prod]))
    return CanonicalBasis(fields)


# group laws ----------------------------------------------------------------------

class NilpotentGroupLaw:
    """Polynomial group law ``(x, y) -> x.y`` on ``R^n`` stored in ``2n`` variables ``(x, y)``."""

    def __init__(self, weights, components: Sequence[Poly]):
        self.weights = tuple(weights)
        self.components = list(components)
        n = len(self.weights)
        if len(self.components) != n or any(p.weights != self.weights * 2 for p in self.components):
            raise DimensionError("group law components must be polynomials in 2n variables")

    @property
    def n(self) -> int:
        return len(self.weights)

    def __call__(self, x: Sequence, y: Sequence) -> list:
        pt = list(x) + list(y)
        return [p.evaluate(pt) for p in self.components]

    def __eq__(self, other):
        return isinstance(other, NilpotentGroupLaw) and self.components == other.components

    def compose_with(self, left: Sequence[Poly], right: Sequence[Poly]) -> list:
        """``left . right`` for maps given as polynomials in a common ring."""
        return [p.compose(list(left) + list(right)) for p in self.components]

    def to_json(self) -> list:
        names = [f"x{i + 1}" for i in range(self.n)] + [f"y{i + 1}" for i in range(self.n)]
        return [format_poly(p, names) for p in self.components]

    def serialize(self) -> list:
        return [p.to_json() for p in self.components]

    # identities --------------------------------------------------------------
    def _slots(self, k: int, copies: int) -> list:
        ring = self.weights * copies
        return [Poly.var(k * self.n + i, ring) for i in range(self.n)]

    def check_unit(self) -> bool:
        x = identity_map(self.weights)
        zero = [Poly.zero(self.weights)] * self.n
        return self.compose_with(x, zero) == x and self.compose_with(zero, x) == x

    def check_associative(self) -> bool:
        x, y, z = (self._slots(k, 3) for k in range(3))
        return self.compose_with(self.compose_with(x, y), z) == self.compose_with(x, self.compose_with(y, z))

    def associativity_randomized(self, trials: int = 1000, seed: int = 0, bound: int = 3) -> dict | None:
        """Exact check on random rational triples; returns a witness or ``None``."""
        rng = random.Random(seed)
        pt = lambda: [Fraction(rng.randint(-bound * 4, bound * 4), rng.randint(1, 4)) for _ in range(self.n)]
        for _ in range(trials):
            a, b, c = pt(), pt(), pt()
            if self(self(a, b), c) != self(a, self(b, c)):
                return {"x": [str(v) for v in a], "y": [str(v) for v in b], "z": [str(v) for v in c]}
        return None

    def check_inverse(self, inverse: Sequence[Poly]) -> bool:
        x = identity_map(self.weights)
        zero = [Poly.zero(self.weights)] * self.n
        return self.compose_with(x, inverse) == zero and self.compose_with(inverse, x) == zero

    def check_dilation(self) -> bool:
        """``(t.x).(t.y) = t.(x.y)``: component ``k`` is homogeneous of degree ``w_k`` in ``(x, y)``."""
        return all(p.is_homogeneous(wk) for p, wk in zip(self.components, self.weights))

    def translation_generators(self) -> list:
        """``Y_j(y) = d/dx_j (x.y)|_{x=0}``."""
        n = self.n
        w = self.weights
        back = [Poly.zero(w)] * n + identity_map(w)
        return [VectorField([p.diff(j).compose(back) for p in self.components]) for j in range(n)]


def law_from_basis(basis: CanonicalBasis) -> NilpotentGroupLaw:
    """``x.y = exp(sum (log x)_j Y_j)(y)`` assembled from the symbolic flow."""
    n = basis.n
    w = basis.weights
    ring = tuple(w) * 2
    x = [Poly.var(i, ring) for i in range(n)]
    y = [Poly.var(n + i, ring) for i in range(n)]
    log_x = [p.compose(x) for p in basis.log_map()]
    return NilpotentGroupLaw(w, [p.compose(log_x + y) for p in basis.flow_map()])


def law_via_dynkin(basis: CanonicalBasis, g: GradedLieAlgebra) -> NilpotentGroupLaw:
    """``x.y = exp(dynkin(log y, log x))``, the second route to the same law."""
    n = basis.n
    w = basis.weights
    ring = tuple(w) * 2
    x = [Poly.var(i, ring) for i in range(n)]
    y = [Poly.var(n + i, ring) for i in range(n)]
    log_x = [p.compose(x) for p in basis.log_map()]
    log_y = [p.compose(y) for p in basis.log_map()]
    z = dynkin(g, log_y, log_x)
    return NilpotentGroupLaw(w, [p.compose(z) for p in basis.exp_map()])


@dataclass
class MembershipReport:
    verdict: bool
    problems: list = field(default_factory=list)
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "problems": self.problems, "witness": self.witness}


def class_membership(fields: Sequence[VectorField] | CanonicalBasis, L: StructureConstants | GradedLieAlgebra | dict) -> MembershipReport:
    """Does the basis realize the algebra: ``Y_j(0) = d_j``, homogeneity and ``[Y_i, Y_j] = sum L_ij^k Y_k``."""
    fields = list(fields.fields if isinstance(fields, CanonicalBasis) else fields)
    w = fields[0].weights
    n = len(fields)
    if isinstance(L, GradedLieAlgebra):
        consts = L.c
    elif isinstance(L, StructureConstants):
        consts = L.data
    else:
        consts = dict(L)
    problems = CanonicalBasis(fields, check=False).problems()
    witness = None
    for i in range(n):
        for j in range(i + 1, n):
            lhs = lie_bracket(fields[i], fields[j])
            rhs = VectorField.zero(w)
            for k in range(n):
                c = Fraction(consts.get((i + 1, j + 1, k + 1), 0))
                if c and w[k] == w[i] + w[j]:
                    rhs = rhs + fields[k].scale(Poly.const(c, w))
            if lhs != rhs:
                diff = lhs - rhs
                problems.append(f"[Y_{i + 1}, Y_{j + 1}] does not match the structure constants")
                if witness is None:
                    witness = {"i": i + 1, "j": j + 1, "difference": format_field(diff)}
    return MembershipReport(not problems, problems, witness)


@dataclass
class LawChecks:
    associativity: str  # "symbolic", "randomized" or "failed"
    associative: bool
    unit: bool
    inverse: bool
    dilation: bool
    bch_consistent: bool | None = None
    witness: dict | None = None

    @property
    def ok(self) -> bool:
        return self.associative and self.unit and self.inverse and self.dilation and self.bch_consistent is not False

    def to_json(self) -> dict:
        return {
            "associativity_mode": self.associativity, "associative": self.associative, "unit": self.unit,
            "inverse": self.inverse, "dilation": self.dilation, "bch_consistent": self.bch_consistent,
            "witness": self.witness,
        }


def inverse_map(basis: CanonicalBasis) -> list:
    """``x^{-1} = exp(-log x)``."""
    neg = [p.scale(-1) for p in basis.log_map()]
    return [p.compose(neg) for p in basis.exp_map()]


def check_law(law: NilpotentGroupLaw, basis: CanonicalBasis, g: GradedLieAlgebra | None = None,
              assoc_budget: int = 12, trials: int = 1000, seed: int = 0) -> LawChecks:
    """Unit, inverse, dilation and associativity; associativity is symbolic when ``3n <= assoc_budget``."""
    witness = None
    if 3 * law.n <= assoc_budget:
        mode = "symbolic"
        assoc = law.check_associative()
    else:
        mode = "randomized"
        witness = law.associativity_randomized(trials, seed)
        assoc = witness is None
    bch = None
    if g is not None:
        bch = law == law_via_dynkin(basis, g)
    return LawChecks(mode if assoc else "failed", assoc, law.check_unit(), law.check_inverse(inverse_map(basis)),
                     law.check_dilation(), bch, witness)


def group_law(basis: CanonicalBasis, g: GradedLieAlgebra) -> NilpotentGroupLaw:
    report = class_membership(basis, g)
    if not report.verdict:
        raise AlgebraError("basis does not realize the algebra", report.witness or report.problems)
    return law_from_basis(basis)


def phi_Y(basis_X: CanonicalBasis, basis_Y: CanonicalBasis) -> CoordinateChange:
    """``exp_Y o exp_X^{-1}``: carries ``X_j`` to ``Y_j`` and the law of ``X`` to the law of ``Y``."""
    fwd = [p.compose(basis_X.log_map()) for p in basis_Y.exp_map()]
    inv = [p.compose(basis_Y.log_map()) for p in basis_X.exp_map()]
    return CoordinateChange(fwd, inv, 2 * max(basis_X.weights) + 1, True)


def phi_Y_checked(basis_X: CanonicalBasis, basis_Y: CanonicalBasis, g: GradedLieAlgebra) -> CoordinateChange:
    for name, b in (("X", basis_X), ("Y", basis_Y)):
        rep = class_membership(b, g)
        if not rep.verdict:
            raise AlgebraError(f"basis {name} does not realize the algebra", rep.witness or rep.problems)
    return phi_Y(basis_X, basis_Y)


def pushes_basis(phi: CoordinateChange, basis_X: CanonicalBasis, basis_Y: CanonicalBasis) -> bool:
    return pushforward(basis_X.as_frame(), phi).fields == basis_Y.fields


def intertwines(phi: CoordinateChange, law_X: NilpotentGroupLaw, law_Y: NilpotentGroupLaw) -> bool:
    n = law_X.n
    w = law_X.weights
    ring = tuple(w) * 2
    x = [Poly.var(i, ring) for i in range(n)]
    y = [Poly.var(n + i, ring) for i in range(n)]
    phx = [p.compose(x) for p in phi.forward]
    phy = [p.compose(y) for p in phi.forward]
    lhs = law_Y.compose_with(phx, phy)
    rhs = [p.compose(law_X.components) for p in phi.forward]
    return lhs == rhs


# Heisenberg family ---------------------------------------------------------------

def _as_matrix(M, size: int) -> list:
    M = [[Fraction(v) for v in row] for row in M]
    if len(M) != size or any(len(row) != size for row in M):
        raise DimensionError(f"expected a {size}x{size} matrix")
    return M


def heisenberg_algebra(levi) -> GradedLieAlgebra:
    """``[e_i, e_j] = L_ij e_n`` on ``R^{n-1} + R`` with weights ``(1, ..., 1, 2)``."""
    m = len(levi)
    L = _as_matrix(levi, m)
    for i in range(m):
        for j in range(m):
            if L[i][j] != -L[j][i]:
                raise AlgebraError("Levi form must be antisymmetric", {"i": i + 1, "j": j + 1})
    n = m + 1
    data = {(i + 1, j + 1, n): L[i][j] for i in range(m) for j in range(m) if L[i][j]}
    return GradedLieAlgebra((1,) * m + (2,), data)


def heisenberg_basis(levi, b) -> list:
    """``Y_j = d_j + sum_k (1/2 L_kj + b_jk) x_k d_n`` for ``j < n`` and ``Y_n = d_n`` (no symmetry check)."""
    m = len(levi)
    L = _as_matrix(levi, m)
    B = _as_matrix(b, m)
    n = m + 1
    w = (1,) * m + (2,)
    fields = []
    for j in range(m):
        last = sum((Poly.var(k, w).scale(L[k][j] / 2 + B[j][k]) for k in range(m)), Poly.zero(w))
        comps = [Poly.const(int(i == j), w) for i in range(m)] + [last]
        fields.append(VectorField(comps))
    fields.append(VectorField.coordinate(n - 1, w))
    return fields


def heisenberg_family(levi, b) -> tuple:
    """Member of the class attached to the Heisenberg algebra with Levi form ``L`` and symmetric ``b``."""
    g = heisenberg_algebra(levi)
    m = len(levi)
    B = _as_matrix(b, m)
    for i in range(m):
        for j in range(m):
            if B[i][j] != B[j][i]:
                raise AlgebraError("b must be symmetric", {"i": i + 1, "j": j + 1})
    basis = CanonicalBasis(heisenberg_basis(levi, b))
    return basis, group_law(basis, g)


def heisenberg_expected_last(levi, b) -> Poly:
    """``x_n + y_n + 1/2 sum L_ji x_i y_j + sum b_ij x_i y_j``."""
    m = len(levi)
    L = _as_matrix(levi, m)
    B = _as_matrix(b, m)
    n = m + 1
    w = ((1,) * m + (2,)) * 2
    x = lambda i: Poly.var(i, w)
    y = lambda i: Poly.var(n + i, w)
    out = x(n - 1) + y(n - 1)
    for i in range(m):
        for j in range(m):
            c = L[j][i] / 2 + B[i][j]
            if c:
                out = out + (x(i) * y(j)).scale(c)
    return out


def standard_levi(m: int) -> list:
    """Block-diagonal symplectic form with ``L_{2i-1, 2i} = 1``; ``m`` must be even."""
    if m % 2:
        raise DimensionError("the standard Levi form needs an even dimension")
    L = [[Fraction(0)] * m for _ in range(m)]
    for i in range(0, m, 2):
        L[i][i + 1] = Fraction(1)
        L[i + 1][i] = Fraction(-1)
    return L


# named algebras used as fixtures ---------------------------------------------------

def free_step3_rank2() -> GradedLieAlgebra:
    """Type (2,3,5): ``[e1,e2]=e3``, ``[e1,e3]=e4``, ``[e2,e3]=e5``."""
    return GradedLieAlgebra((1, 1, 2, 3, 3), _antisym({(1, 2, 3): 1, (1, 3, 4): 1, (2, 3, 5): 1}))


def free_step2_rank3() -> GradedLieAlgebra:
    """Type (3,6): ``[e1,e2]=e4``, ``[e1,e3]=e5``, ``[e2,e3]=e6``."""
    return GradedLieAlgebra((1, 1, 1, 2, 2, 2), _antisym({(1, 2, 4): 1, (1, 3, 5): 1, (2, 3, 6): 1}))


def engel_algebra() -> GradedLieAlgebra:
    """Type (2,3,4): ``[e1,e2]=e3``, ``[e1,e3]=e4``."""
    return GradedLieAlgebra((1, 1, 2, 3), _antisym({(1, 2, 3): 1, (1, 3, 4): 1}))


def filiform4() -> GradedLieAlgebra:
    """Type (2,3,4,5): ``[e1,e2]=e3``, ``[e1,e3]=e4``, ``[e1,e4]=e5``."""
    return GradedLieAlgebra((1, 1, 2, 3, 4), _antisym({(1, 2, 3): 1, (1, 3, 4): 1, (1, 4, 5): 1}))


def _antisym(data: dict) -> dict:
    out = {}
    for (i, j, k), v in data.items():
        out[(i, j, k)] = Fraction(v)
        out[(j, i, k)] = -Fraction(v)
    return out
