"""Smoothing of splines by summation multipliers, and of raw samples by filtering.

Only the modified Fejer family ``lambda_k = (1 - k/(n+1))**alpha`` is
provided; ``alpha = 1`` is the classical Fejer triangle. Other multiplier
families can be supplied as any object with ``n`` and ``weights()``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import IncompatibilityError, InvalidArgumentError, InvalidFilterError, InvalidStateError
from .grid import SampleSet
from .spline import TrigSpline

__all__ = [
    "modified_fejer",
    "MultiplierFamily",
    "FilterKernel",
    "DEFAULT_FILTER",
    "smooth_spline",
    "smooth_data",
    "parse_weights",
]


def modified_fejer(k, alpha: float, n: int):
    """``(1 - k/(n+1))**alpha`` for ``0 <= k <= n`` (scalar or array ``k``)."""
    if not alpha > 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha!r}")
    if n < 1:
        raise InvalidArgumentError(f"n must be a positive integer, got {n!r}")
    ks = np.asarray(k)
    if np.any(ks < 0) or np.any(ks > n):
        raise InvalidArgumentError(f"k must lie in 0..{n}")
    out = (1.0 - ks / (n + 1)) ** alpha
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MultiplierFamily:
    """Modified Fejer multipliers of exponent ``alpha`` for ``n`` harmonics."""

    alpha: float
    n: int
    kind: str = "modified-fejer"

    def __post_init__(self):
        if self.kind != "modified-fejer":
            raise InvalidArgumentError(f"unsupported multiplier family {self.kind!r}")
        if not self.alpha > 0:
            raise InvalidArgumentError(f"alpha must be positive, got {self.alpha!r}")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidArgumentError(f"n must be a positive integer, got {self.n!r}")

    def weights(self) -> np.ndarray:
        return modified_fejer(np.arange(1, self.n + 1), self.alpha, self.n)


def smooth_spline(s: TrigSpline, fam) -> TrigSpline:
    """Attach multipliers: harmonic ``k`` of the spline is weighted by ``lambda_k``."""
    if s.multipliers is not None:
        raise InvalidStateError("spline already carries smoothing multipliers")
    if fam.n != s.params.n:
        raise IncompatibilityError(f"multiplier family has n={fam.n}, spline has n={s.params.n}")
    return replace(s, multipliers=tuple(float(w) for w in fam.weights()))


@dataclass(frozen=True)
class FilterKernel:
    """Odd-length circular filter centred on its middle entry."""

    weights: tuple

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if len(w) == 0 or len(w) % 2 == 0:
            raise InvalidFilterError(f"filter length must be odd, got {len(w)}")
        if not all(math.isfinite(v) for v in w):
            raise InvalidFilterError("filter weights must be finite")
        if abs(math.fsum(w) - 1.0) > 1e-15:
            raise InvalidFilterError(f"filter weights must sum to 1, got {math.fsum(w)!r}")
        object.__setattr__(self, "weights", w)

    @property
    def center(self) -> int:
        return len(self.weights) // 2

    def response(self, k: int, N: int) -> complex:
        """Factor applied to harmonic ``exp(i k x)`` on an ``N``-point grid."""
        offsets = np.arange(len(self.weights)) - self.center
        return complex(np.sum(np.array(self.weights) * np.exp(2j * np.pi * k * offsets / N)))


DEFAULT_FILTER = FilterKernel((0.25, 0.5, 0.25))


def parse_weights(text: str) -> FilterKernel:
    """Parse ``"1/4,1/2,1/4"`` or ``"0.25,0.5,0.25"`` into a validated kernel."""
    try:
        parts = [Fraction(p.strip()) for p in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidFilterError(f"cannot parse filter weights {text!r}: {exc}")
    if sum(parts) != 1:
        total = float(sum(parts))
        if abs(total - 1.0) > 1e-15:
            raise InvalidFilterError(f"filter weights must sum to 1, got {total!r}")
    return FilterKernel(tuple(float(p) for p in parts))


def smooth_data(samples: SampleSet, kernel: FilterKernel = DEFAULT_FILTER) -> SampleSet:
    """Circular convolution ``g_j = sum_i w_i f_{j + i - c}`` on the sample grid."""
    N = samples.grid.N
    if len(kernel.weights) > N:
        raise InvalidFilterError(f"filter of length {len(kernel.weights)} is longer than the grid (N={N})")
    f = samples.values
    out = np.zeros(N)
    for i, w in enumerate(kernel.weights):
        out += w * np.roll(f, kernel.center - i)
    return SampleSet(samples.grid, out)
