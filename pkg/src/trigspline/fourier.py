"""Discrete Fourier coefficients, trigonometric polynomials and residuals.

Coefficients follow the half-constant convention::

    T_m(x) = a0/2 + sum_{k=1}^{m} (a_k cos kx + b_k sin kx)

On an ``N = 2n + 1`` point grid, Bessel's formulas

    a_k = (2/N) sum_j f_j cos(k x_j),    b_k = (2/N) sum_j f_j sin(k x_j)

give the interpolating polynomial for ``m = n`` and the least-squares
polynomial of order ``m`` for ``m < n``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import IncompatibilityError, InvalidArgumentError, OrderOutOfRangeError, ParseError
from .grid import SampleSet

__all__ = [
    "FourierCoefficients",
    "DiscreteSpectrum",
    "bessel_coefficients",
    "eval_trig_polynomial",
    "truncate_spectrum",
    "residual_discrete",
    "spectrum_to_json",
    "spectrum_from_json",
]


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidArgumentError("coefficient lists must be one-dimensional")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    """Coefficients ``a0, a_1..a_n, b_1..b_n`` of a band-limited series."""

    a0: float
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = _frozen_array(self.a)
        b = _frozen_array(self.b)
        if a.shape != b.shape:
            raise InvalidArgumentError(f"a and b differ in length ({a.size} vs {b.size})")
        if not (math.isfinite(self.a0) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InvalidArgumentError("coefficients must be finite")
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return int(self.a.size)

    def evaluate(self, x, m: Optional[int] = None, derivative: int = 0):
        """Value of the order-``m`` partial sum (or its ``derivative``-th derivative).

        Derivatives are taken term by term, which is exact for a finite sum.
        """
        m = self.n if m is None else m
        if not 0 <= m <= self.n:
            raise OrderOutOfRangeError(f"order m={m} outside 0..{self.n}")
        xs = np.asarray(x, dtype=float)
        k = np.arange(1, m + 1, dtype=float)
        phase = derivative * math.pi / 2
        arg = np.multiply.outer(xs, k) + phase
        scale = k**derivative
        terms = (self.a[:m] * scale) * np.cos(arg) + (self.b[:m] * scale) * np.sin(arg)
        out = terms.sum(axis=-1)
        if derivative == 0:
            out = out + self.a0 / 2
        return float(out) if np.ndim(out) == 0 else out

    def scaled(self, weights) -> "FourierCoefficients":
        """Multiply harmonic ``k`` (k >= 1) by ``weights[k-1]``; ``a0`` untouched."""
        w = np.asarray(weights, dtype=float)
        return replace(self, a=self.a * w, b=self.b * w)

    def __eq__(self, other):
        if not isinstance(other, FourierCoefficients):
            return NotImplemented
        return (
            type(self) is type(other)
            and self.a0 == other.a0
            and np.array_equal(self.a, other.a)
            and np.array_equal(self.b, other.b)
            and getattr(self, "variant", None) == getattr(other, "variant", None)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class DiscreteSpectrum(FourierCoefficients):
    """Bessel coefficients of samples on an ``N = 2n + 1`` grid of ``variant``."""

    variant: int = field(default=0)

    def __post_init__(self):
        super().__post_init__()
        if self.variant not in (0, 1):
            raise InvalidArgumentError(f"grid variant must be 0 or 1, got {self.variant!r}")
        if self.n < 1:
            raise InvalidArgumentError("a discrete spectrum needs at least one harmonic")

    @property
    def N(self) -> int:
        return 2 * self.n + 1


def bessel_coefficients(samples: SampleSet) -> DiscreteSpectrum:
    """Discrete Fourier coefficients of ``samples`` by Bessel's formulas.

    Plain ``O(N n)`` sums with compensated accumulation; no FFT.
    """
    grid = samples.grid
    x = grid.nodes
    f = samples.values
    w = 2.0 / grid.N
    a0 = w * math.fsum(f)
    a = np.empty(grid.n)
    b = np.empty(grid.n)
    for k in range(1, grid.n + 1):
        a[k - 1] = w * math.fsum(f * np.cos(k * x))
        b[k - 1] = w * math.fsum(f * np.sin(k * x))
    return DiscreteSpectrum(a0, a, b, grid.variant)


def eval_trig_polynomial(spec: FourierCoefficients, m: int, x):
    """``a0/2 + sum_{k<=m} (a_k cos kx + b_k sin kx)``; scalar or array ``x``."""
    if not 0 <= m <= spec.n:
        raise OrderOutOfRangeError(f"order m={m} outside 0..{spec.n}")
    return spec.evaluate(x, m)


def truncate_spectrum(spec: DiscreteSpectrum, m: int) -> DiscreteSpectrum:
    """Zero every harmonic above ``m`` (the discrete least-squares approximation)."""
    if not 0 <= m <= spec.n:
        raise OrderOutOfRangeError(f"order m={m} outside 0..{spec.n}")
    keep = (np.arange(1, spec.n + 1) <= m).astype(float)
    return spec.scaled(keep)


def residual_discrete(spec: DiscreteSpectrum, m: int, samples: SampleSet) -> float:
    """Sum over all grid nodes of ``(T_m(x_j) - f_j)**2``."""
    if spec.variant != samples.grid.variant or spec.N != samples.grid.N:
        raise IncompatibilityError(
            f"spectrum (N={spec.N}, variant={spec.variant}) does not match samples "
            f"(N={samples.grid.N}, variant={samples.grid.variant})"
        )
    t = eval_trig_polynomial(spec, m, samples.nodes)
    return math.fsum((t - samples.values) ** 2)


def spectrum_to_json(spec: DiscreteSpectrum) -> str:
    return json.dumps(
        {"a0": spec.a0, "a": [float(v) for v in spec.a], "b": [float(v) for v in spec.b], "variant": spec.variant}
    )


def spectrum_from_json(text: str) -> DiscreteSpectrum:
    try:
        obj = json.loads(text)
        return DiscreteSpectrum(float(obj["a0"]), obj["a"], obj["b"], int(obj.get("variant", 0)))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno)
    except KeyError as exc:
        raise ParseError("missing key", field=exc.args[0])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"invalid spectrum: {exc}")
