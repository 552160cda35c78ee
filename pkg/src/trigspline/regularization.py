"""Regularized trigonometric approximation.

Minimizing ``integral (f - g)**2 + lam**(2p) (g^(p))**2`` over ``[0, 2 pi]``
for ``f = a0/2 + sum a_k cos kx + b_k sin kx`` gives ``g`` with harmonic ``k``
scaled by ``tau_k = 1 / (1 + (lam k)**(2p))``. Applied to a spline, each
frequency-``q`` kernel term is scaled by ``tau_q``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Union

import numpy as np

from .errors import IncompatibilityError, InvalidArgumentError, InvalidStateError
from .fourier import FourierCoefficients
from .kernels import tau_weight
from .spline import TrigSpline, spline_derivative

__all__ = [
    "RegParams",
    "RegularizationWarning",
    "tau",
    "regularize_spline",
    "euler_residual",
    "smoothness_functional",
    "regularization_functional",
    "DEFAULT_QUAD_POINTS",
]

DEFAULT_QUAD_POINTS = 4096


class RegularizationWarning(UserWarning):
    """Regularization applied to a spline of high order ``r``."""


@dataclass(frozen=True)
class RegParams:
    lam: float
    p: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise InvalidArgumentError(f"lambda must be a finite nonnegative real, got {self.lam!r}")
        if isinstance(self.p, bool) or int(self.p) != self.p or self.p < 1:
            raise InvalidArgumentError(f"p must be a positive integer, got {self.p!r}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "p", int(self.p))


def tau(k, reg: RegParams):
    """``1 / (1 + (lam*k)**(2p))`` for scalar or array ``k``."""
    return tau_weight(k, reg.lam, reg.p)


def regularize_spline(s: TrigSpline, reg: RegParams) -> TrigSpline:
    """Attach a regularization; the kernels become their ``tau``-weighted versions."""
    if s.regularization is not None:
        raise InvalidStateError("spline is already regularized")
    if s.params.r > 3:
        warnings.warn(
            f"regularizing a spline of order r={s.params.r}; the weights raise the coefficient "
            "decay order and are intended for small r (r <= 3)",
            RegularizationWarning,
            stacklevel=2,
        )
    return replace(s, regularization=reg)


def euler_residual(f_spec: FourierCoefficients, g_spec: FourierCoefficients, reg: RegParams, x):
    """``lam**(2p) g^(2p)(x) + (-1)**p (g(x) - f(x))`` from exact term-wise derivatives."""
    if f_spec.n != g_spec.n:
        raise IncompatibilityError(f"spectra band limits differ ({f_spec.n} vs {g_spec.n})")
    p = reg.p
    high = g_spec.evaluate(x, derivative=2 * p)
    diff = g_spec.evaluate(x) - f_spec.evaluate(x)
    return reg.lam ** (2 * p) * high + (-1) ** p * diff


Function = Union[Callable, FourierCoefficients, TrigSpline]


def _quad_nodes(points):
    if isinstance(points, bool) or int(points) != points or points < 8:
        raise InvalidArgumentError(f"quadrature needs at least 8 points, got {points!r}")
    return 2.0 * np.pi * np.arange(int(points)) / int(points)


def _values(g: Function, x):
    if isinstance(g, FourierCoefficients):
        return np.asarray(g.evaluate(x))
    return np.asarray([float(g(v)) for v in x])


def _derivative_values(g: Function, p: int, x):
    if isinstance(g, TrigSpline):
        return np.asarray(spline_derivative(g, p, x))
    if isinstance(g, FourierCoefficients):
        return np.asarray(g.evaluate(x, derivative=p))
    # spectral differentiation of the samples; exact below the Nyquist band
    y = _values(g, x)
    M = y.size
    Y = np.fft.rfft(y)
    k = np.arange(Y.size)
    Y = Y * (1j * k) ** p
    if M % 2 == 0 and p % 2 == 1:
        Y[-1] = 0.0
    return np.fft.irfft(Y, n=M)


def _trapezoid(values):
    # periodic integrand: the composite trapezoid rule has equal weights
    return 2.0 * math.pi / values.size * math.fsum(values)


def smoothness_functional(g: Function, p: int, quad_points: int = DEFAULT_QUAD_POINTS) -> float:
    """``integral_0^{2 pi} (g^(p))**2`` by the composite trapezoid rule.

    ``g`` may be a spline (derivatives from the kernel series, so ``p`` must
    stay below ``r``), a coefficient set, or a plain periodic callable
    (spectral derivative of its samples).
    """
    x = _quad_nodes(quad_points)
    return _trapezoid(_derivative_values(g, p, x) ** 2)


def regularization_functional(f: Function, g: Function, reg: RegParams, quad_points: int = DEFAULT_QUAD_POINTS) -> float:
    """``integral_0^{2 pi} (f - g)**2 + lam**(2p) (g^(p))**2`` by the trapezoid rule."""
    x = _quad_nodes(quad_points)
    misfit = (_values(f, x) - _values(g, x)) ** 2
    if reg.lam == 0:
        return _trapezoid(misfit)
    rough = _derivative_values(g, reg.p, x) ** 2
    return _trapezoid(misfit + reg.lam ** (2 * reg.p) * rough)
