"""Trigonometric interpolation splines.

A spline on an ``N = 2n + 1`` grid is::

    St(x) = a0/2 + sum_{k=1}^{K} w_k [a_k C_k(x)/hc_k + b_k S_k(x)/hs_k]

where ``a, b`` are the Bessel coefficients of the samples on the
interpolation grid ``I2``, ``K`` is the truncation order (``n`` by
default), ``w_k`` are optional smoothing multipliers and the kernels are
replaced by their regularized versions when a regularization is attached.
The factors ``hc_k``/``hs_k`` are computed once at build time and are never
regularized.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np

from .errors import IncompatibilityError, InvalidArgumentError, OrderOutOfRangeError, ParseError
from .fourier import DiscreteSpectrum, bessel_coefficients
from .grid import SampleSet
from .kernels import (
    DEFAULT_SERIES,
    SeriesConfig,
    SplineParams,
    convergence_factor,
    interp_factor_cos,
    interp_factor_sin,
    kernel_derivative,
    kernel_terms,
)

if TYPE_CHECKING:
    from .regularization import RegParams

__all__ = [
    "TrigSpline",
    "build_spline",
    "eval_spline",
    "spline_derivative",
    "approximate_spline",
    "term_table",
    "spline_to_json",
    "spline_from_json",
    "SCHEMA",
]

SCHEMA = "trigspline/1"


@dataclass(frozen=True, eq=False)
class TrigSpline:
    params: SplineParams
    spectrum: DiscreteSpectrum
    hc: Tuple[float, ...]
    hs: Tuple[float, ...]
    cfg: SeriesConfig = DEFAULT_SERIES
    multipliers: Optional[Tuple[float, ...]] = None
    regularization: Optional["RegParams"] = None
    truncation: Optional[int] = None

    def __post_init__(self):
        n = self.params.n
        if self.spectrum.n != n:
            raise IncompatibilityError(f"spectrum has n={self.spectrum.n} but params imply n={n}")
        if self.multipliers is not None:
            lam = tuple(float(v) for v in self.multipliers)
            if len(lam) != n or not all(0 < v <= 1 for v in lam):
                raise InvalidArgumentError(f"multipliers must be {n} values in (0, 1]")
            object.__setattr__(self, "multipliers", lam)
        if self.truncation is not None and not 0 <= self.truncation <= n:
            raise OrderOutOfRangeError(f"truncation order {self.truncation} outside 0..{n}")

    @property
    def order(self) -> int:
        """Highest harmonic that contributes."""
        return self.params.n if self.truncation is None else self.truncation

    def weights(self) -> np.ndarray:
        """Effective per-harmonic weights (multipliers and truncation), length n."""
        w = np.ones(self.params.n) if self.multipliers is None else np.array(self.multipliers)
        w[self.order :] = 0.0
        return w

    def _reg(self):
        if self.regularization is None:
            return None
        return (self.regularization.lam, self.regularization.p)

    def __call__(self, x):
        return eval_spline(self, x)


def build_spline(samples: SampleSet, params: SplineParams, cfg: SeriesConfig = DEFAULT_SERIES) -> TrigSpline:
    """Interpolating spline of ``samples``; the sample grid must be ``params.I2``.

    All interpolation factors are evaluated here, so a degenerate factor
    surfaces as :class:`DegenerateFactorError` at build time.
    """
    if samples.grid.variant != params.I2 or samples.grid.N != params.N:
        raise IncompatibilityError(
            f"samples on grid (N={samples.grid.N}, variant={samples.grid.variant}) but params "
            f"request N={params.N} with interpolation grid I2={params.I2}"
        )
    spectrum = bessel_coefficients(samples)
    return _assemble(params, spectrum, cfg)


def _assemble(params, spectrum, cfg, **extra):
    ks = range(1, params.n + 1)
    hc = tuple(interp_factor_cos(k, params, cfg) for k in ks)
    hs = tuple(interp_factor_sin(k, params, cfg) for k in ks)
    return TrigSpline(params, spectrum, hc, hs, cfg, **extra)


def _combine(s: TrigSpline, d: int, x: float) -> float:
    w = s.weights()
    reg = s._reg()
    total = [s.spectrum.a0 / 2.0] if d == 0 else []
    for k in range(1, s.order + 1):
        a, b = s.spectrum.a[k - 1], s.spectrum.b[k - 1]
        if a != 0.0:
            total.append(w[k - 1] * a * kernel_derivative(k, s.params, d, x, s.cfg, reg, "cos") / s.hc[k - 1])
        if b != 0.0:
            total.append(w[k - 1] * b * kernel_derivative(k, s.params, d, x, s.cfg, reg, "sin") / s.hs[k - 1])
    return math.fsum(total)


def _over_x(fn, x):
    if np.ndim(x) == 0:
        return fn(float(x))
    xs = np.asarray(x, dtype=float)
    return np.array([fn(float(v)) for v in xs.ravel()]).reshape(xs.shape)


def eval_spline(s: TrigSpline, x):
    """Spline value at ``x`` (scalar or array)."""
    return _over_x(lambda v: _combine(s, 0, v), x)


def spline_derivative(s: TrigSpline, d: int, x):
    """``d``-th derivative, differentiating the kernel series term by term.

    Raises :class:`NonconvergentDerivativeError` when ``d >= r``.
    """
    if d == 0:
        return eval_spline(s, x)
    # validates d before any evaluation
    kernel_derivative(1, s.params, d, 0.0, s.cfg, s._reg())
    return _over_x(lambda v: _combine(s, d, v), x)


def approximate_spline(s: TrigSpline, m: int) -> TrigSpline:
    """Discrete least-squares approximation: keep harmonics ``k <= m`` only."""
    if not 0 <= m <= s.params.n:
        raise OrderOutOfRangeError(f"approximation order m={m} outside 0..{s.params.n}")
    return replace(s, truncation=m)


def term_table(s: TrigSpline, qmax: int):
    """Fourier coefficients of the spline up to frequency ``qmax``.

    Returns arrays ``(A, B)`` indexed by frequency with
    ``St(x) = A[0]/2 + sum_q A[q] cos qx + B[q] sin qx``.
    """
    A = np.zeros(qmax + 1)
    B = np.zeros(qmax + 1)
    A[0] = s.spectrum.a0
    w = s.weights()
    levels = qmax // s.params.N + 2
    for k in range(1, s.order + 1):
        for kind, coef, h, out in (
            ("cos", s.spectrum.a[k - 1], s.hc[k - 1], A),
            ("sin", s.spectrum.b[k - 1], s.hs[k - 1], B),
        ):
            q, c = kernel_terms(k, s.params, levels, kind, s._reg())
            keep = q <= qmax
            np.add.at(out, q[keep].astype(int), w[k - 1] * coef * c[keep] / h)
    return A, B


def spline_to_json(s: TrigSpline) -> str:
    """Versioned JSON document; only the built-in convergence factor is serializable."""
    p = s.params
    if p.factor is not convergence_factor:
        raise InvalidArgumentError("splines with a custom convergence factor cannot be serialized")
    doc = {
        "schema": SCHEMA,
        "params": {"gamma": list(p.gamma), "eta": list(p.eta), "r": p.r, "N": p.N, "I1": p.I1, "I2": p.I2},
        "series": {"tolerance": s.cfg.tolerance, "max_terms": s.cfg.max_terms},
        "spectrum": {
            "a0": s.spectrum.a0,
            "a": [float(v) for v in s.spectrum.a],
            "b": [float(v) for v in s.spectrum.b],
            "variant": s.spectrum.variant,
        },
        "multipliers": None if s.multipliers is None else list(s.multipliers),
        "regularization": None
        if s.regularization is None
        else {"lambda": s.regularization.lam, "p": s.regularization.p},
        "truncation": s.truncation,
    }
    return json.dumps(doc)


def spline_from_json(text: str) -> TrigSpline:
    from .regularization import RegParams

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno)
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise ParseError(f"not a {SCHEMA} document", field="schema")
    try:
        p = doc["params"]
        params = SplineParams(tuple(p["gamma"]), tuple(p["eta"]), p["r"], p["N"], p["I1"], p["I2"])
        cfg = SeriesConfig(**doc.get("series", {}))
        sp = doc["spectrum"]
        spectrum = DiscreteSpectrum(sp["a0"], sp["a"], sp["b"], sp.get("variant", params.I2))
        reg = doc.get("regularization")
        extra = {
            "multipliers": None if doc.get("multipliers") is None else tuple(doc["multipliers"]),
            "regularization": None if reg is None else RegParams(reg["lambda"], reg["p"]),
            "truncation": doc.get("truncation"),
        }
    except KeyError as exc:
        raise ParseError("missing key", field=exc.args[0])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"invalid spline document: {exc}")
    return _assemble(params, spectrum, cfg, **extra)
