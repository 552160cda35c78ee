"""Kernel series of trigonometric splines and their interpolation factors.

For harmonic ``k`` on an ``N``-point grid the cosine and sine kernels are the
infinite series::

    C_k(x) = g1 v_k cos kx + sum_{m>=1} s^m [g3 v_{mN+k} cos (mN+k)x + g2 v_{mN-k} cos (mN-k)x]
    S_k(x) = e1 v_k sin kx + sum_{m>=1} s^m [e3 v_{mN+k} sin (mN+k)x - e2 v_{mN-k} sin (mN-k)x]

with ``s = (-1)**I1`` and convergence factors ``v_q = v(q, r)``. The
interpolation factors ``hc_k``/``hs_k`` are the same sums of coefficients
(all inner signs ``+``) with ``s = (-1)**(I1 - I2)``.

Series are summed explicitly up to a level ``M`` chosen so that a certified
bound on the discarded tail is below ``SeriesConfig.tolerance``. Each of the
two aliased families ``q = mN + k`` and ``q = mN - k`` is handled
separately; writing its tail as ``Re[w * sum_{m>M} c_m z**m]`` with
``z = exp(i(Nx + pi I1))``, the available bounds are

* absolute: integral comparison against the dominating power law;
* Dirichlet: ``c_{M+1} / |sin(theta/2)|`` (``c`` decreasing);
* Abel: one summation by parts, the leading term is added explicitly and
  the rest is bounded by ``(c_{M+1} - c_{M+2}) / (2 sin^2(theta/2))``
  (``c`` convex; only used for the built-in power law);
* node: when ``theta`` is (numerically) a multiple of ``2 pi`` the tail is
  the plain sum ``sum c_m``, estimated by the midpoint of its integral
  bracket.

The level is the smallest one for which any of these meets the target.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import quad

from .errors import (
    ConvergenceError,
    DegenerateFactorError,
    InvalidArgumentError,
    NonconvergentDerivativeError,
)

__all__ = [
    "SplineParams",
    "SeriesConfig",
    "DEFAULT_SERIES",
    "DEGENERATE_THRESHOLD",
    "convergence_factor",
    "eval_cos_kernel",
    "eval_sin_kernel",
    "eval_regularized_cos_kernel",
    "eval_regularized_sin_kernel",
    "kernel_derivative",
    "interp_factor_cos",
    "interp_factor_sin",
    "kernel_terms",
    "clear_caches",
    "tau_weight",
]

DEGENERATE_THRESHOLD = 1e-9
_CHUNK = 1 << 16
_EPS = np.finfo(float).eps
_SPLITS = 4.0 ** np.arange(60)


def convergence_factor(k, r):
    """Power-law convergence factor ``v_k(r) = k**-(1 + r)``.

    Accepts scalars or arrays. Any replacement passed as
    ``SplineParams.factor`` must be positive and nonincreasing in ``k`` and
    satisfy ``v(k, r) <= factor_scale * k**-(1 + r)``; the tail bounds rely
    on it.
    """
    if np.ndim(k) == 0:
        return float(k) ** -(1.0 + r)
    return np.asarray(k, dtype=float) ** -(1.0 + r)


def tau_weight(q, lam: float, p: int):
    """Regularization weight ``1 / (1 + (lam*q)**(2p))``; 1 when ``lam == 0``."""
    if lam == 0:
        return 1.0 if np.ndim(q) == 0 else np.ones(np.shape(q))
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + (lam * q) ** (2 * p))


def _nonzero_triple(name, values):
    try:
        t = tuple(float(v) for v in values)
    except TypeError:
        raise InvalidArgumentError(f"{name} must be a triple of reals")
    if len(t) != 3:
        raise InvalidArgumentError(f"{name} must have exactly three entries, got {len(t)}")
    if any(v == 0 or not math.isfinite(v) for v in t):
        raise InvalidArgumentError(f"{name} entries must be finite and nonzero, got {t}")
    return t


@dataclass(frozen=True)
class SplineParams:
    """Shape parameters of a trigonometric spline.

    ``gamma``/``eta`` weight the cosine/sine kernels (head, ``mN - k``,
    ``mN + k`` terms as ``(g1, g2, g3)``); ``r`` is the spline order; ``I1``
    selects the stitching grid and ``I2`` the interpolation grid.
    """

    gamma: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    eta: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    r: int = 1
    N: int = 3
    I1: int = 0
    I2: int = 0
    factor: Callable = convergence_factor
    factor_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "gamma", _nonzero_triple("gamma", self.gamma))
        object.__setattr__(self, "eta", _nonzero_triple("eta", self.eta))
        if isinstance(self.r, bool) or int(self.r) != self.r or self.r < 1:
            raise InvalidArgumentError(f"spline order r must be a positive integer, got {self.r!r}")
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 3 or self.N % 2 == 0:
            raise InvalidArgumentError(f"N must be an odd integer >= 3, got {self.N!r}")
        if self.I1 not in (0, 1) or self.I2 not in (0, 1):
            raise InvalidArgumentError(f"indicators must be 0 or 1, got I1={self.I1!r}, I2={self.I2!r}")
        if not self.factor_scale > 0:
            raise InvalidArgumentError("factor_scale must be positive")
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "N", int(self.N))

    @property
    def n(self) -> int:
        return (self.N - 1) // 2


@dataclass(frozen=True)
class SeriesConfig:
    """Absolute tail-bound target and the cap on summation levels."""

    tolerance: float = 1e-12
    max_terms: int = 10**6

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidArgumentError(f"series tolerance must be positive, got {self.tolerance!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise InvalidArgumentError(f"max_terms must be a positive integer, got {self.max_terms!r}")


DEFAULT_SERIES = SeriesConfig()


@dataclass(frozen=True)
class _Family:
    """One aliased family ``q_m = m*N + sign*k`` (m >= 1) of a kernel series."""

    k: int
    N: int
    sign: int
    r: int
    d: int
    lam: float
    p: int
    factor: Callable
    scale: float
    parity: int

    @property
    def decay(self) -> int:
        return 1 + self.r - self.d

    def q(self, m):
        return m * self.N + self.sign * self.k

    def coef(self, q):
        c = self.factor(q, self.r) * np.power(q, self.d) * tau_weight(q, self.lam, self.p)
        return float(c) if np.ndim(c) == 0 else c

    def _power_tail(self, a, e):
        # integral_a^inf q(t)**-e dt
        return self.q(a) ** (1.0 - e) / (self.N * (e - 1.0))

    def abs_bound(self, M):
        b = self.scale * self._power_tail(M, self.decay)
        if self.lam > 0:
            b = np.minimum(b, self.scale * self.lam ** (-2 * self.p) * self._power_tail(M, self.decay + 2 * self.p))
        return b

    def dirichlet_bound(self, M, s_lo):
        if s_lo <= 0:
            return math.inf if np.ndim(M) == 0 else np.full(np.shape(M), math.inf)
        return self.coef(self.q(M + 1)) / s_lo

    def abel_applies(self, M):
        if self.factor is not convergence_factor:
            return False
        return self.lam == 0 or self.lam * self.q(M + 1) >= 1.0

    def abel_bound(self, M, s_lo):
        if s_lo <= 0 or not self.abel_applies(M):
            return math.inf
        den = 2.0 * s_lo * s_lo
        if den == 0.0:
            return math.inf
        du = self.coef(self.q(M + 1)) - self.coef(self.q(M + 2))
        return du / den

    def _weighted_span(self, M, K):
        # bound on sum_{M<m<=K} m c_m, using m <= q_m/(N-k) and c_q <= scale q**-e
        e = self.decay
        if e == 2:
            j = np.log(self.q(K) / self.q(M)) / self.N
        else:
            j = (self.q(M) ** (2.0 - e) - self.q(K) ** (2.0 - e)) / (self.N * (e - 2.0))
        return self.scale * j / (self.N - self.k)

    def node_bound(self, M, t_hi, s_lo):
        head = self.coef(self.q(M)) / 2.0
        if t_hi == 0:
            return head
        # split the tail at K: |theta| * sum_{M<m<=K} m c_m + tail beyond K
        K = float(M) * _SPLITS
        far = self.abs_bound(K)
        beyond = np.minimum(self.dirichlet_bound(K, s_lo), far) + far
        return head + float(np.min(t_hi * self._weighted_span(M, K) + beyond))

    def _integral(self, a, b=None):
        if b is None:
            qa = self.q(a)
            val, err = quad(lambda u: self.coef(qa / u) / (u * u), 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
            return qa * val / self.N, qa * err / self.N
        val, err = quad(lambda t: self.coef(self.q(t)), a, b, epsabs=0.0, epsrel=1e-13)
        return val, err

    def node_estimate(self, M):
        """Midpoint estimate of ``sum_{m>M} c_m`` and its half-bracket error."""
        rest, e1 = self._integral(M + 1)
        gap, e2 = self._integral(M, M + 1)
        return rest + gap / 2.0, gap / 2.0 + e1 + e2

    def partial(self, M, x, quarter):
        parts = []
        for start in range(1, M + 1, _CHUNK):
            m = np.arange(start, min(M, start + _CHUNK - 1) + 1, dtype=float)
            q = self.q(m)
            c = self.coef(q)
            if self.parity:
                c = np.where(m % 2 == 1, -c, c)
            parts.append(float(np.sum(c * _trig(quarter, q * x))))
        return math.fsum(parts)


def _trig(quarter, y):
    """``cos(y + quarter*pi/2)`` without rounding the phase shift."""
    quarter %= 4
    if quarter == 0:
        return np.cos(y)
    if quarter == 1:
        return -np.sin(y)
    if quarter == 2:
        return -np.cos(y)
    return np.sin(y)


def _min_level(bound, target, max_terms):
    """Smallest M in [1, max_terms] with bound(M) <= target, or None."""
    if not bound(max_terms) <= target:
        return None
    if bound(1) <= target:
        return 1
    lo, hi = 1, max_terms
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def _family_sum(fam: _Family, amp: float, x: float, quarter: int, target: float, max_terms: int):
    """Value and certified error of ``amp * sum_{m>=1}`` of one family."""
    theta = fam.N * x + math.pi * fam.parity
    thr = math.remainder(theta, 2.0 * math.pi)
    slack = 8.0 * _EPS * abs(fam.N * x)
    t_hi = abs(thr) + slack
    t_lo = max(abs(thr) - slack, 0.0)
    s_lo = math.sin(t_lo / 2.0)
    target = target / abs(amp)

    regimes = [
        ("abs", fam.abs_bound),
        ("dirichlet", lambda M: fam.dirichlet_bound(M, s_lo)),
        ("abel", lambda M: fam.abel_bound(M, s_lo)),
        ("node", lambda M: fam.node_bound(M, t_hi, s_lo)),
    ]
    plans = []
    cap = max_terms
    for name, bound in regimes:
        if name == "node" and plans:
            # only worth planning if it can beat what is already feasible
            cap = min(p[0] for p in plans) - 1
            if cap < 1:
                continue
        M = _min_level(bound, target, cap)
        if M is not None:
            plans.append((M, name))
    if not plans:
        achieved = min(bound(max_terms) for _, bound in regimes)
        raise ConvergenceError(
            f"tail bound {abs(amp) * achieved:.3e} above tolerance after {max_terms} terms "
            f"(k={fam.k}, N={fam.N}, r={fam.r}, d={fam.d}, x={x!r})",
            bound=abs(amp) * achieved,
        )
    # ties resolve to the earliest (simplest) regime
    M, name = min(plans, key=lambda p: (p[0], [r[0] for r in regimes].index(p[1])))
    value = fam.partial(M, x, quarter)
    w = cmath.exp(1j * fam.sign * fam.k * x) * (1j**quarter)
    err = dict(regimes)[name](M)
    if name == "abel":
        z = cmath.exp(1j * thr)
        lead = fam.coef(fam.q(M + 1)) * cmath.exp(1j * (M + 1) * thr) / (1.0 - z)
        value += (w * lead).real
    elif name == "node":
        est, est_err = fam.node_estimate(M)
        value += (w * est).real
        err = err - fam.coef(fam.q(M)) / 2.0 + est_err
    return amp * value, abs(amp) * err


def _series(k, params: SplineParams, x, cfg, *, amps, parity, quarter=0, d=0, lam=0.0, p=1):
    if not 1 <= k <= params.n:
        raise InvalidArgumentError(f"harmonic k={k} outside 1..{params.n}")
    head_fam = _Family(k, params.N, 1, params.r, d, lam, p, params.factor, params.factor_scale, parity)
    total = [amps[0] * head_fam.coef(float(k)) * float(_trig(quarter, k * x))]
    err = 0.0
    for sign, amp in ((1, amps[1]), (-1, amps[2])):
        fam = _Family(k, params.N, sign, params.r, d, lam, p, params.factor, params.factor_scale, parity)
        v, e = _family_sum(fam, amp, x, quarter, cfg.tolerance / 2.0, cfg.max_terms)
        total.append(v)
        err += e
    return math.fsum(total), err


@lru_cache(maxsize=1 << 16)
def _kernel_value(kind, k, params, x, cfg, d, lam, p):
    if kind == "cos":
        g1, g2, g3 = params.gamma
        amps, quarter = (g1, g3, g2), d
    else:
        e1, e2, e3 = params.eta
        amps, quarter = (e1, e3, -e2), d - 1
    # exact parity: cos(qx + quarter*pi/2) is even for even quarter, odd otherwise
    if x < 0 or (x == 0 and quarter % 2):
        if quarter % 2 == 0:
            return _kernel_value(kind, k, params, -x, cfg, d, lam, p)
        return 0.0 if x == 0 else -_kernel_value(kind, k, params, -x, cfg, d, lam, p)
    value, _ = _series(k, params, x, cfg, amps=amps, parity=params.I1, quarter=quarter, d=d, lam=lam, p=p)
    return value


def _over_x(fn, x):
    if np.ndim(x) == 0:
        return fn(float(x))
    xs = np.asarray(x, dtype=float)
    return np.array([fn(float(v)) for v in xs.ravel()]).reshape(xs.shape)


def _check_reg(lam, p_reg):
    if not lam >= 0 or not math.isfinite(lam):
        raise InvalidArgumentError(f"regularization lambda must be >= 0, got {lam!r}")
    if isinstance(p_reg, bool) or int(p_reg) != p_reg or p_reg < 1:
        raise InvalidArgumentError(f"regularization order p must be a positive integer, got {p_reg!r}")
    return float(lam), int(p_reg)


def eval_cos_kernel(k: int, params: SplineParams, x, cfg: SeriesConfig = DEFAULT_SERIES):
    """Cosine kernel ``C_k(x)`` (stitching indicator ``params.I1``)."""
    return _over_x(lambda v: _kernel_value("cos", k, params, v, cfg, 0, 0.0, 1), x)


def eval_sin_kernel(k: int, params: SplineParams, x, cfg: SeriesConfig = DEFAULT_SERIES):
    """Sine kernel ``S_k(x)``; its ``mN - k`` terms enter with a minus sign."""
    return _over_x(lambda v: _kernel_value("sin", k, params, v, cfg, 0, 0.0, 1), x)


def eval_regularized_cos_kernel(k, params, lam, p_reg, x, cfg=DEFAULT_SERIES):
    """``C_k`` with every frequency-``q`` term weighted by ``tau_q(lam, p_reg)``."""
    lam, p_reg = _check_reg(lam, p_reg)
    return _over_x(lambda v: _kernel_value("cos", k, params, v, cfg, 0, lam, p_reg), x)


def eval_regularized_sin_kernel(k, params, lam, p_reg, x, cfg=DEFAULT_SERIES):
    """``S_k`` with every frequency-``q`` term weighted by ``tau_q(lam, p_reg)``."""
    lam, p_reg = _check_reg(lam, p_reg)
    return _over_x(lambda v: _kernel_value("sin", k, params, v, cfg, 0, lam, p_reg), x)


def kernel_derivative(
    k: int,
    params: SplineParams,
    d: int,
    x,
    cfg: SeriesConfig = DEFAULT_SERIES,
    regularized: Optional[Tuple[float, int]] = None,
    kind: str = "cos",
):
    """Term-wise ``d``-th derivative of the cosine (or sine) kernel.

    Terms decay like ``q**(d - 1 - r)``, so ``d`` is limited to ``r - 1``
    to keep the differentiated series absolutely convergent.
    """
    if isinstance(d, bool) or int(d) != d or d < 0:
        raise InvalidArgumentError(f"derivative order must be a nonnegative integer, got {d!r}")
    if d >= params.r:
        raise NonconvergentDerivativeError(f"derivative order d={d} needs spline order r > d (r={params.r})")
    if kind not in ("cos", "sin"):
        raise InvalidArgumentError(f"kind must be 'cos' or 'sin', got {kind!r}")
    lam, p_reg = _check_reg(*regularized) if regularized is not None else (0.0, 1)
    return _over_x(lambda v: _kernel_value(kind, k, params, v, cfg, int(d), lam, p_reg), x)


@lru_cache(maxsize=1 << 12)
def _factor(kind, k, params, cfg):
    a1, a2, a3 = params.gamma if kind == "cos" else params.eta
    parity = (params.I1 - params.I2) % 2
    value, _ = _series(k, params, 0.0, cfg, amps=(a1, a3, a2), parity=parity)
    if abs(value) < DEGENERATE_THRESHOLD:
        label = "hc" if kind == "cos" else "hs"
        raise DegenerateFactorError(f"interpolation factor {label}_{k} = {value!r} is too close to zero", value=value)
    return value


def interp_factor_cos(k: int, params: SplineParams, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Interpolation factor ``hc_k``; the inner sign is ``(-1)**(m(I1 - I2))``.

    Raises
    ------
    DegenerateFactorError
        If ``|hc_k| < 1e-9``.
    """
    return _factor("cos", k, params, cfg)


def interp_factor_sin(k: int, params: SplineParams, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Interpolation factor ``hs_k`` (``eta`` weights, all inner signs ``+``)."""
    return _factor("sin", k, params, cfg)


def kernel_terms(k, params, levels, kind="cos", regularized=None, d=0):
    """Frequencies and signed coefficients of the first ``levels`` kernel levels.

    Returns ``(q, c)`` sorted by frequency, where the kernel (or its ``d``-th
    derivative) is ``sum c * cos(q x + d pi/2)`` for ``kind='cos'`` and
    ``sum c * sin(q x + d pi/2)`` for ``kind='sin'``; level 0 is the head.
    """
    lam, p_reg = _check_reg(*regularized) if regularized is not None else (0.0, 1)
    w1, w2, w3 = params.gamma if kind == "cos" else params.eta
    minus = w2 if kind == "cos" else -w2
    fam = _Family(k, params.N, 1, params.r, d, lam, p_reg, params.factor, params.factor_scale, params.I1)
    m = np.arange(1, levels, dtype=float)
    sign = np.where((m % 2 == 1) & (params.I1 == 1), -1.0, 1.0)
    q_plus = m * params.N + k
    q_minus = m * params.N - k
    q = np.concatenate([[float(k)], q_plus, q_minus])
    c = np.concatenate([[w1], w3 * sign, minus * sign]) * fam.coef(q)
    order = np.argsort(q, kind="stable")
    return q[order], c[order]


def clear_caches() -> None:
    """Drop memoized kernel values and interpolation factors."""
    _kernel_value.cache_clear()
    _factor.cache_clear()
