"""Reference implementations for verification.

These compute the same quantities as the main modules by independent,
deliberately naive routes: quadrature of the continuum Fourier integrals,
and plain partial summation of the kernel series in extended precision
(``numpy.longdouble``) with no tail handling at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, QuadratureError
from .fourier import FourierCoefficients
from .grid import uniform_nodes

__all__ = [
    "QuadratureConfig",
    "continuum_fourier",
    "continuum_residual",
    "reference_kernel_sum",
    "reference_factor_sum",
    "reference_spline_value",
]

_LD = np.longdouble


@dataclass(frozen=True)
class QuadratureConfig:
    points: int = 4096
    rule: str = "trapezoid"

    def __post_init__(self):
        if isinstance(self.points, bool) or int(self.points) != self.points or self.points < 8:
            raise InvalidArgumentError(f"quadrature needs at least 8 panels, got {self.points!r}")
        if self.rule not in ("trapezoid", "rectangle"):
            raise InvalidArgumentError(f"unknown quadrature rule {self.rule!r}")


def _samples(f, cfg: QuadratureConfig):
    x = uniform_nodes(cfg.points, 0)
    y = np.array([float(f(v)) for v in x])
    if not np.all(np.isfinite(y)):
        bad = int(np.flatnonzero(~np.isfinite(y))[0])
        raise QuadratureError(f"integrand is not finite at x={x[bad]!r}")
    if cfg.rule == "trapezoid":
        end = float(f(2.0 * math.pi))
        if not math.isfinite(end):
            raise QuadratureError("integrand is not finite at x=2*pi")
        return x, y, end
    return x, y, None


def _integrate_times(x, y, end, weight_fn, M):
    # (1/pi) * (2 pi / M) * sum ... written as (2/M) * sum so that the
    # rectangle rule with M = N panels is literally Bessel's formula
    body = y * weight_fn(x)
    if end is None:
        return (2.0 / M) * math.fsum(body)
    w_end = float(weight_fn(np.array([2.0 * math.pi]))[0])
    inner = [v for v in body[1:]]
    return (2.0 / M) * math.fsum([0.5 * body[0]] + inner + [0.5 * end * w_end])


def continuum_fourier(f, K: int, cfg: QuadratureConfig = QuadratureConfig()) -> FourierCoefficients:
    """Quadrature approximations of ``a_k = (1/pi) int f cos kx`` (and ``b_k``), k <= K."""
    if K < 1:
        raise InvalidArgumentError("K must be >= 1")
    x, y, end = _samples(f, cfg)
    M = cfg.points
    a0 = _integrate_times(x, y, end, np.ones_like, M)
    a = [_integrate_times(x, y, end, lambda t, k=k: np.cos(k * t), M) for k in range(1, K + 1)]
    b = [_integrate_times(x, y, end, lambda t, k=k: np.sin(k * t), M) for k in range(1, K + 1)]
    return FourierCoefficients(a0, a, b)


def continuum_residual(f, spec: FourierCoefficients, m: int, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """``int_0^{2 pi} (T_m(x) - f(x))**2 dx`` by quadrature."""
    diff = lambda t: (spec.evaluate(t, m) - float(f(t))) ** 2  # noqa: E731
    x, y, end = _samples(diff, cfg)
    h = 2.0 * math.pi / cfg.points
    if end is None:
        return h * math.fsum(y)
    return h * math.fsum([0.5 * y[0]] + list(y[1:]) + [0.5 * end])


def _reference_series(k, params, x, terms, weights, signs_minus, parity, deriv, trig, lam, p):
    N, r = params.N, params.r
    m = np.arange(1, terms, dtype=_LD)
    xs = _LD(x)
    head_q = _LD(k)
    q_plus = m * N + k
    q_minus = m * N - k

    def coef(q):
        c = np.asarray(params.factor(q, r), dtype=_LD) * q**deriv
        if lam:
            c = c / (1 + (_LD(lam) * q) ** (2 * p))
        return c

    sign = np.where((m % 2 == 1) & (parity == 1), _LD(-1), _LD(1))
    head = _LD(weights[0]) * coef(np.array([head_q]))[0] * trig(head_q * xs)
    plus = _LD(weights[2]) * sign * coef(q_plus) * trig(q_plus * xs)
    minus = _LD(weights[1]) * signs_minus * sign * coef(q_minus) * trig(q_minus * xs)
    # small-to-large order keeps the long double accumulation tight
    return head + np.sum(plus[::-1]) + np.sum(minus[::-1])


def _trig_for(kind, d):
    shift = (d - (1 if kind == "sin" else 0)) % 4
    return {
        0: np.cos,
        1: lambda y: -np.sin(y),
        2: lambda y: -np.cos(y),
        3: np.sin,
    }[shift]


def reference_kernel_sum(k, params, x, terms: int, kind: str = "cos", regularized=None, d: int = 0) -> float:
    """Naive sum of the first ``terms`` levels (level 0 = head) of a kernel series."""
    if terms < 1:
        raise InvalidArgumentError("terms must be >= 1")
    lam, p = regularized if regularized is not None else (0.0, 1)
    w = params.gamma if kind == "cos" else params.eta
    signs_minus = 1 if kind == "cos" else -1
    val = _reference_series(k, params, x, terms, w, signs_minus, params.I1, d, _trig_for(kind, d), lam, p)
    return float(val)


def reference_factor_sum(k, params, terms: int, kind: str = "cos") -> float:
    """Naive partial sum of ``hc_k`` (``kind='cos'``) or ``hs_k``."""
    w = params.gamma if kind == "cos" else params.eta
    parity = (params.I1 - params.I2) % 2
    val = _reference_series(k, params, 0.0, terms, w, 1, parity, 0, lambda y: np.ones_like(y), 0.0, 1)
    return float(val)


def reference_spline_value(spline, x, terms: int = 10**6) -> float:
    """Spline value recomputed from raw kernel partial sums (factors included)."""
    params = spline.params
    spec = spline.spectrum
    K = params.n if spline.truncation is None else spline.truncation
    w = np.ones(params.n) if spline.multipliers is None else np.asarray(spline.multipliers)
    reg = None
    if spline.regularization is not None:
        reg = (spline.regularization.lam, spline.regularization.p)
    total = [spec.a0 / 2.0]
    for k in range(1, K + 1):
        if spec.a[k - 1] != 0:
            hc = reference_factor_sum(k, params, terms, "cos")
            total.append(w[k - 1] * spec.a[k - 1] * reference_kernel_sum(k, params, x, terms, "cos", reg) / hc)
        if spec.b[k - 1] != 0:
            hs = reference_factor_sum(k, params, terms, "sin")
            total.append(w[k - 1] * spec.b[k - 1] * reference_kernel_sum(k, params, x, terms, "sin", reg) / hs)
    return math.fsum(total)
