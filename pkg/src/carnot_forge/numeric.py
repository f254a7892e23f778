"""Floating-point flows of frame fields and the rate tests for canonical coordinates.

Everything here is vectorized over a batch of sample points with numpy.  Exact polynomial
targets (the model exponential maps) are computed symbolically in :mod:`carnot_forge.nilpotent`
and only evaluated in floating point.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import FlowDomainError, PreconditionError
from .frames import Frame
from .nilpotent import CanonicalBasis
from .poly import Poly
from .privileged import is_privileged, model_fields
from .vf import VectorField, is_homogeneous_vf, pullback_dilation

EPS = float(np.finfo(float).eps)
THREADS_ENV = "CARNOT_FORGE_THREADS"


def thread_count() -> int:
    """Worker cap from ``CARNOT_FORGE_THREADS`` (default 1, i.e. serial)."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class FlowConfig:
    steps: int = 256  # RK4 steps per unit time
    guard: float = 10.0

    def __post_init__(self):
        if int(self.steps) < 16:
            raise ValueError("at least 16 steps per unit time are required")
        if not self.guard > 0:
            raise ValueError("guard radius must be positive")


# compiled polynomials -------------------------------------------------------------

class CompiledPoly:
    def __init__(self, p: Poly):
        self.exps, self.coeffs = p.compile()

    def __call__(self, Y: np.ndarray) -> np.ndarray:
        if not len(self.coeffs):
            return np.zeros(Y.shape[0])
        mons = np.prod(Y[:, None, :] ** self.exps[None, :, :], axis=2)
        return mons @ self.coeffs


class CompiledField:
    def __init__(self, X: VectorField):
        self.comps = [CompiledPoly(b) for b in X.coeffs]

    def __call__(self, Y: np.ndarray) -> np.ndarray:
        return np.stack([c(Y) for c in self.comps], axis=1)


class CompiledMap:
    def __init__(self, components: Sequence[Poly]):
        self.comps = [CompiledPoly(p) for p in components]

    def __call__(self, Y: np.ndarray) -> np.ndarray:
        return np.stack([c(Y) for c in self.comps], axis=1)


def _batch(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    return a[None, :] if a.ndim == 1 else a


# RK4 -----------------------------------------------------------------------------

def rk4(rhs, y0: np.ndarray, time: float, cfg: FlowConfig, strict: bool = True) -> np.ndarray:
    """Fixed-step RK4 for ``y' = rhs(y)`` on a batch; rows leaving the guard ball become NaN.

    With ``strict`` a single escaping row raises :class:`FlowDomainError`.
    """
    y = _batch(y0).copy()
    nsteps = max(1, int(math.ceil(cfg.steps * abs(time))))
    h = time / nsteps
    alive = np.ones(y.shape[0], dtype=bool)
    for _ in range(nsteps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out = ~(np.all(np.isfinite(y), axis=1) & (np.max(np.abs(y), axis=1) <= cfg.guard))
        if out.any():
            if strict:
                raise FlowDomainError("trajectory left the guard radius")
            alive &= ~out
            y[out] = 0.0  # park escaped rows; they are masked below
    y[~alive] = np.nan
    return y


def flow(X: VectorField, y0, time: float = 1.0, cfg: FlowConfig = FlowConfig()) -> np.ndarray:
    """``exp(time X)(y0)``; ``y0`` may be one point or a batch."""
    F = CompiledField(X)
    out = rk4(F, y0, time, cfg)
    return out[0] if np.asarray(y0).ndim == 1 else out


class _FrameFlows:
    def __init__(self, frame: Frame):
        self.fields = [CompiledField(X) for X in frame.fields]
        self.n = frame.n

    def combined(self, coeffs: np.ndarray):
        def rhs(Y):
            out = np.zeros_like(Y)
            for j, F in enumerate(self.fields):
                cj = coeffs[:, j]
                if np.any(cj):
                    out += cj[:, None] * F(Y)
            return out
        return rhs

    def single(self, j: int, cj: np.ndarray):
        F = self.fields[j]
        return lambda Y: cj[:, None] * F(Y)


def exp_X(frame: Frame, x, cfg: FlowConfig = FlowConfig(), strict: bool = True) -> np.ndarray:
    """``exp(x_1 X_1 + ... + x_n X_n)(0)`` for one point or a batch."""
    xb = _batch(x)
    ff = _FrameFlows(frame)
    out = rk4(ff.combined(xb), np.zeros_like(xb), 1.0, cfg, strict)
    return out[0] if np.asarray(x).ndim == 1 else out


def gamma_X(frame: Frame, x, cfg: FlowConfig = FlowConfig(), strict: bool = True) -> np.ndarray:
    """``exp(x_1 X_1) o ... o exp(x_n X_n)(0)``: the flow of ``X_n`` acts first."""
    xb = _batch(x)
    ff = _FrameFlows(frame)
    y = np.zeros_like(xb)
    for j in reversed(range(frame.n)):
        y = rk4(ff.single(j, xb[:, j]), y, 1.0, cfg, strict)
    return y[0] if np.asarray(x).ndim == 1 else y


# symbolic model targets -------------------------------------------------------------

def second_kind_map(basis: CanonicalBasis) -> list:
    """``exp(x_1 Y_1) o ... o exp(x_n Y_n)(0)`` as exact polynomials in ``x``."""
    n = basis.n
    w = basis.weights
    F = basis.flow_map()
    x = [Poly.var(i, w) for i in range(n)]
    zero = Poly.zero(w)
    z = [zero] * n
    for j in reversed(range(n)):
        xi = [x[j] if i == j else zero for i in range(n)]
        z = [p.compose(xi + z) for p in F]
    return z


def model_basis(frame: Frame) -> CanonicalBasis:
    return CanonicalBasis(model_fields(frame))


def rescaled_frame(frame: Frame, t) -> Frame:
    """``t^{w_j} delta_t^* X_j``: its time-1 flows are the rescaled flows of the frame."""
    t = Fraction(t)
    fields = [pullback_dilation(X, t).scale(Poly.const(t ** wj, frame.weights))
              for X, wj in zip(frame.fields, frame.weights)]
    return Frame(frame.w, fields)


def dilate_batch(X: np.ndarray, t: float, w) -> np.ndarray:
    return X * np.array([t ** wi for wi in w])[None, :]


# rate tests ---------------------------------------------------------------------------

@dataclass
class RateReport:
    kind: int
    grid: list
    samples: list
    errors: list  # per sample, one entry per grid point (None where the flow escaped)
    slopes: list  # per sample: float, "exact" or None (inconclusive)
    status: list  # per sample: "pass", "fail", "exact" or "inconclusive"
    verdict: str  # "pass", "fail", "exact" or "inconclusive"
    pass_fraction: float
    max_error: float
    settings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict in ("pass", "exact")

    def to_json(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def default_grid(k_min: int = 3, k_max: int = 10) -> list:
    return [2.0 ** (-k) for k in range(k_min, k_max + 1)]


def sample_box(n: int, count: int, half_width: float = 0.25, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-half_width, half_width, size=(count, n))


def fit_slope(ts: Sequence[float], errs: Sequence[float]) -> float:
    """Least-squares slope of ``log err`` against ``log t``."""
    lt = np.log(np.asarray(ts, dtype=float))
    le = np.log(np.asarray(errs, dtype=float))
    A = np.vstack([lt, np.ones_like(lt)]).T
    slope, _ = np.linalg.lstsq(A, le, rcond=None)[0]
    return float(slope)


def _rate_test(frame: Frame, kind: int, samples, cfg: FlowConfig, grid, threshold: float) -> RateReport:
    if not is_privileged(frame).verdict:
        raise PreconditionError("rate tests need a frame in privileged coordinates")
    basis = model_basis(frame)
    target_map = CompiledMap(basis.exp_map() if kind == 1 else second_kind_map(basis))
    flow_fn = exp_X if kind == 1 else gamma_X
    w = frame.weights
    X = _batch(samples)
    target = target_map(X)
    grid = list(grid) if grid is not None else default_grid()

    def run(t):
        Y = flow_fn(frame, dilate_batch(X, t, w), cfg, strict=False)
        Y = dilate_batch(Y, 1.0 / t, w)
        return np.max(np.abs(Y - target), axis=1)

    workers = min(thread_count(), len(grid))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cols = list(pool.map(run, grid))
    else:
        cols = [run(t) for t in grid]
    E = np.stack(cols, axis=1)  # samples x grid

    errors, slopes, status = [], [], []
    for i in range(X.shape[0]):
        row = E[i]
        scale = max(1.0, float(np.max(np.abs(target[i]))))
        floor = 100 * EPS * scale
        finite = np.isfinite(row)
        errors.append([float(v) if np.isfinite(v) else None for v in row])
        if finite.sum() >= 4 and np.all(row[finite] <= floor):
            slopes.append("exact")
            status.append("exact")
            continue
        usable = finite & (row > floor)
        if usable.sum() < 4:
            slopes.append(None)
            status.append("inconclusive")
            continue
        s = fit_slope(np.asarray(grid)[usable], row[usable])
        slopes.append(s)
        status.append("pass" if s >= threshold else "fail")

    counts = {k: status.count(k) for k in ("pass", "fail", "exact", "inconclusive")}
    total = len(status)
    good = counts["pass"] + counts["exact"]
    if counts["exact"] == total:
        verdict = "exact"
    elif counts["inconclusive"] == total:
        verdict = "inconclusive"
    elif good == total:
        verdict = "pass"
    elif counts["fail"]:
        verdict = "fail"
    else:
        verdict = "inconclusive"
    finite_all = E[np.isfinite(E)]
    return RateReport(
        kind=kind,
        grid=grid,
        samples=X.tolist(),
        errors=errors,
        slopes=slopes,
        status=status,
        verdict=verdict,
        pass_fraction=good / total if total else 0.0,
        max_error=float(finite_all.max()) if finite_all.size else float("nan"),
        settings={"integrator": "rk4", "steps_per_unit_time": cfg.steps, "guard_radius": cfg.guard,
                  "slope_threshold": threshold},
    )


def first_kind_rate_test(frame: Frame, samples, cfg: FlowConfig = FlowConfig(), grid=None,
                         threshold: float = 0.9) -> RateReport:
    """Fit the decay of ``|delta_{1/t} exp_X(delta_t x) - exp_{X^(a)}(x)|_inf`` in ``t``."""
    return _rate_test(frame, 1, samples, cfg, grid, threshold)


def second_kind_rate_test(frame: Frame, samples, cfg: FlowConfig = FlowConfig(), grid=None,
                          threshold: float = 0.9) -> RateReport:
    """As :func:`first_kind_rate_test` with ``gamma_X`` and the composed model flows."""
    return _rate_test(frame, 2, samples, cfg, grid, threshold)


def rk4_error(frame: Frame, x, steps: int) -> float:
    """Sup-norm error of ``exp_X(x)`` at ``steps`` steps against the exact model exponential.

    The frame must be homogeneous, so that its own exponential map is the exact target.
    """
    if not all(is_homogeneous_vf(X, -wj) for X, wj in zip(frame.fields, frame.weights)):
        raise PreconditionError("the exact target needs a homogeneous frame")
    basis = CanonicalBasis(frame.fields)
    exact = CompiledMap(basis.exp_map())(_batch(x))
    got = exp_X(frame, _batch(x), FlowConfig(steps=steps))
    return float(np.max(np.abs(got - exact)))


def rk4_halving_ratio(frame: Frame, x, steps: int = 16) -> float:
    """``error(steps) / error(2 * steps)``; about 16 for a genuinely fourth-order error."""
    e1 = rk4_error(frame, x, steps)
    e2 = rk4_error(frame, x, 2 * steps)
    return e1 / e2 if e2 > 0 else math.inf
