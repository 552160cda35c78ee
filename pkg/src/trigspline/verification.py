"""Self-verification suite.

Each ``check_*`` function runs one family of properties against the
reference routines in :mod:`trigspline.oracles` (or against closed forms)
and returns a :class:`CheckResult`. ``run_verification`` groups them into a
``quick`` level and a ``full`` level.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from .errors import NonconvergentDerivativeError
from .fourier import FourierCoefficients, bessel_coefficients, residual_discrete, truncate_spectrum
from .grid import SampleSet, build_grid, sample_function
from .kernels import (
    SeriesConfig,
    SplineParams,
    eval_cos_kernel,
    eval_sin_kernel,
    interp_factor_cos,
    interp_factor_sin,
    kernel_terms,
)
from .oracles import (
    QuadratureConfig,
    continuum_fourier,
    reference_kernel_sum,
    reference_spline_value,
)
from .regularization import RegParams, euler_residual, regularization_functional, tau
from .smoothing import DEFAULT_FILTER, MultiplierFamily, modified_fejer, smooth_data, smooth_spline
from .spline import build_spline, eval_spline, spline_derivative, term_table

__all__ = ["CheckResult", "CHECKS", "run_verification"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    observed: float
    threshold: float
    elapsed: float = 0.0
    notes: List[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f"[{status}] {self.name}: observed {self.observed:.3e} (threshold {self.threshold:.3e}, {self.elapsed:.2f}s)"
        if self.notes:
            msg += "; " + "; ".join(self.notes)
        return msg


def _timed(name, threshold, fn):
    t0 = time.perf_counter()
    observed, notes = fn()
    elapsed = time.perf_counter() - t0
    passed = bool(observed <= threshold) and not any(n.startswith("violation") for n in notes)
    return CheckResult(name, passed, float(observed), threshold, elapsed, notes)


def _unit_params(N, r, **kw):
    return SplineParams((1.0, 1.0, 1.0), (1.0, 1.0, 1.0), r, N, **kw)


def check_interpolation(cfg=SeriesConfig(), Ns=(3, 5, 9), rs=(1, 2, 3), sets=20, seed=0):
    """Max node misfit ``|St(x_j) - f_j|`` over random sample sets."""

    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for N in Ns:
            grid = build_grid(N)
            for r in rs:
                params = _unit_params(N, r)
                for _ in range(sets):
                    s = SampleSet(grid, rng.uniform(-1, 1, N))
                    sp = build_spline(s, params, cfg)
                    worst = max(worst, float(np.max(np.abs(eval_spline(sp, grid.nodes) - s.values))))
        return worst, []

    return _timed("interpolation exactness", 1e-8, run)


def check_node_identities(cfg=SeriesConfig(), Ns=(3, 5, 9), rs=(1, 2, 3)):
    """Max ``|C_k(x_j)/hc_k - cos k x_j|`` and the sine analogue."""

    def run():
        worst = 0.0
        for N in Ns:
            x = build_grid(N).nodes
            for r in rs:
                params = _unit_params(N, r)
                for k in range(1, params.n + 1):
                    c = eval_cos_kernel(k, params, x, cfg) / interp_factor_cos(k, params, cfg)
                    s = eval_sin_kernel(k, params, x, cfg) / interp_factor_sin(k, params, cfg)
                    worst = max(worst, np.max(np.abs(c - np.cos(k * x))), np.max(np.abs(s - np.sin(k * x))))
        return worst, []

    return _timed("kernel node identities", 1e-8, run)


def check_kernel_reference(cfg=SeriesConfig(), cases=((5, 2), (3, 2), (9, 3)), terms=10**6):
    """Certified kernel values versus naive long-double partial sums."""

    def run():
        worst = 0.0
        for N, r in cases:
            params = SplineParams((1.0, 2.0, 3.0), (1.0, -1.0, 2.0), r, N)
            # plain integral bound on what the reference itself leaves out
            ref_tail = 5.0 * (terms * N - params.n) ** (-r) / (r * N)
            for k in range(1, params.n + 1):
                for x in (0.7, 1.9, 4.4):
                    for kind, fn in (("cos", eval_cos_kernel), ("sin", eval_sin_kernel)):
                        err = abs(fn(k, params, x, cfg) - reference_kernel_sum(k, params, x, terms, kind))
                        worst = max(worst, err - ref_tail)
        return worst, []

    return _timed("kernel values vs reference sums", 2e-12, run)


def check_discrete_lsq(N=9, sets=5, perturbations=100, seed=1):
    """Bessel truncation optimality and monotonicity of the discrete residual."""

    def run():
        rng = np.random.default_rng(seed)
        grid = build_grid(N)
        notes = []
        worst_full = 0.0
        for _ in range(sets):
            s = SampleSet(grid, rng.normal(size=N))
            spec = bessel_coefficients(s)
            worst_full = max(worst_full, residual_discrete(spec, spec.n, s))
            res = [residual_discrete(spec, m, s) for m in range(spec.n + 1)]
            if any(b > a for a, b in zip(res, res[1:])):
                notes.append("violation: residual increased with m")
            for m in range(spec.n):
                best = res[m]
                t = truncate_spectrum(spec, m)
                for _ in range(perturbations):
                    da = np.zeros(spec.n)
                    db = np.zeros(spec.n)
                    da[:m] = rng.uniform(-1e-3, 1e-3, m)
                    db[:m] = rng.uniform(-1e-3, 1e-3, m)
                    d0 = rng.uniform(-1e-3, 1e-3)
                    other = FourierCoefficients(t.a0 + d0, t.a + da, t.b + db)
                    r_other = math.fsum((other.evaluate(grid.nodes, m) - s.values) ** 2)
                    if not r_other > best:
                        notes.append(f"violation: perturbation beat Bessel truncation at m={m}")
        return worst_full, notes[:3]

    return _timed("discrete least-squares optimality", 1e-18, run)


def check_regularization(seed=2, points=100, quad_points=4096):
    """Tau anchor values, Euler residual of tau-weighted series, Phi minimality."""

    def run():
        rng = np.random.default_rng(seed)
        notes = []
        for p in (1, 2, 3):
            if tau(10, RegParams(0.1, p)) != 0.5:
                notes.append(f"violation: tau_10(0.1, {p}) != 0.5")
        worst = 0.0
        x = rng.uniform(0, 2 * np.pi, points)
        K = 8
        for lam in (0.01, 0.1, 1.0):
            for p in (1, 2, 3):
                reg = RegParams(lam, p)
                f = FourierCoefficients(rng.normal(), rng.normal(size=K), rng.normal(size=K))
                g = f.scaled(tau(np.arange(1, K + 1), reg))
                worst = max(worst, float(np.max(np.abs(euler_residual(f, g, reg, x)))))
                phi = regularization_functional(f, g, reg, quad_points)
                for factor in (0.95, 1.05):
                    for which in range(K + 1):
                        w = np.ones(K)
                        a0 = g.a0
                        if which == 0:
                            a0 = g.a0 * factor
                        else:
                            w[which - 1] = factor
                        other = FourierCoefficients(a0, g.a * w, g.b * w)
                        if not regularization_functional(f, other, reg, quad_points) > phi:
                            notes.append(f"violation: Phi not minimal (lambda={lam}, p={p}, harmonic {which})")
        return worst, notes[:3]

    return _timed("regularization algebra", 1e-10, run)


def check_regularized_decay(Ns=(5, 9), rs=(1, 2, 3), ps=(1, 2), lam=1.0):
    """Spread of ``|c_q| q**(1+r+2p)`` over ``q in [N, 100N]`` (must stay within 2x)."""

    def run():
        worst = 1.0
        notes = []
        for N in Ns:
            for r in rs:
                params = _unit_params(N, r)
                for p in ps:
                    for kind in ("cos", "sin"):
                        q, c = kernel_terms(1, params, 101, kind, (lam, p))
                        keep = (q >= N) & (q <= 100 * N)
                        scaled = np.abs(c[keep]) * q[keep] ** (1 + r + 2 * p) * lam ** (2 * p)
                        worst = max(worst, scaled.max() / scaled.min())
                        if not (0.5 <= scaled.min() and scaled.max() <= 2.0):
                            notes.append(f"violation: coefficient scale off (N={N}, r={r}, p={p})")
                        # successive log-slope against the regularized order
                        slope = np.diff(np.log(np.abs(c[keep]))) / np.diff(np.log(q[keep]))
                        if np.any(np.abs(slope + (1 + r + 2 * p)) > math.log(2) / math.log(q[keep][1] / q[keep][0]) + 1):
                            notes.append(f"violation: local decay order off (N={N}, r={r}, p={p})")
        return worst, notes[:3]

    return _timed("regularized decay order", 2.0, run)


def check_smoothing(cfg=SeriesConfig(), seed=3, points=50, reference_terms=20000):
    """Fejer triangle, smoothed spline versus weighted reference sums, data filter response."""

    def run():
        rng = np.random.default_rng(seed)
        notes = []
        k = np.arange(0, 101)
        if not np.array_equal(modified_fejer(k, 1.0, 100), 1.0 - k / 101):
            notes.append("violation: alpha=1 weights differ from the Fejer triangle")
        N = 9
        grid = build_grid(N)
        s = SampleSet(grid, rng.normal(size=N))
        sp = smooth_spline(build_spline(s, _unit_params(N, 3), cfg), MultiplierFamily(2.0, 4))
        xs = rng.uniform(0, 2 * np.pi, points)
        worst = 0.0
        for x in xs:
            worst = max(worst, abs(eval_spline(sp, x) - reference_spline_value(sp, x, reference_terms)))
        before = bessel_coefficients(s)
        after = bessel_coefficients(smooth_data(s, DEFAULT_FILTER))
        rho = 0.5 + 0.5 * np.cos(2 * np.pi * np.arange(1, before.n + 1) / N)
        worst = max(
            worst,
            float(np.max(np.abs(after.a - rho * before.a))),
            float(np.max(np.abs(after.b - rho * before.b))),
            abs(after.a0 - before.a0),
        )
        return worst, notes

    return _timed("smoothing", 1e-10, run)


def check_oracle_equivalence(cfg=SeriesConfig(), seed=4, quad=QuadratureConfig()):
    """Continuum coefficients of a spline versus its term table; rectangle rule versus Bessel."""

    def run():
        rng = np.random.default_rng(seed)
        notes = []
        N = 5
        grid = build_grid(N)
        sp = build_spline(SampleSet(grid, rng.normal(size=N)), _unit_params(N, 3), cfg)
        K = 3 * N
        cf = continuum_fourier(lambda x: eval_spline(sp, x), K, quad)
        A, B = term_table(sp, K)
        worst = max(abs(cf.a0 - A[0]), float(np.max(np.abs(cf.a - A[1:]))), float(np.max(np.abs(cf.b - B[1:]))))
        f = lambda x: math.exp(math.sin(x)) + 0.3 * math.cos(3 * x + 0.2)  # noqa: E731
        # panel counts below 8 are outside QuadratureConfig's domain
        for n_points in (9, 21, 33):
            bes = bessel_coefficients(sample_function(build_grid(n_points), f))
            rect = continuum_fourier(f, bes.n, QuadratureConfig(n_points, "rectangle"))
            if not (rect.a0 == bes.a0 and np.array_equal(rect.a, bes.a) and np.array_equal(rect.b, bes.b)):
                notes.append(f"violation: rectangle rule differs from Bessel at N={n_points}")
        return worst, notes

    return _timed("oracle equivalence", 1e-8, run)


def check_derivatives(cfg=SeriesConfig(), seed=5, points=20, h=1e-5):
    """First derivative versus central differences; ``d >= r`` must be rejected."""

    def run():
        rng = np.random.default_rng(seed)
        notes = []
        worst = 0.0
        for N, r in ((5, 3), (7, 4)):
            grid = build_grid(N)
            sp = build_spline(SampleSet(grid, rng.normal(size=N)), _unit_params(N, r), cfg)
            for x in rng.uniform(0, 2 * np.pi, points):
                fd = (eval_spline(sp, x + h) - eval_spline(sp, x - h)) / (2 * h)
                worst = max(worst, abs(spline_derivative(sp, 1, x) - fd))
            try:
                spline_derivative(sp, r, 0.5)
                notes.append(f"violation: d=r={r} accepted")
            except NonconvergentDerivativeError:
                pass
        return worst, notes

    return _timed("derivative checks", 1e-4, run)


def check_structure(cfg=SeriesConfig(), seed=6, points=20):
    """Periodicity, kernel parity, indicator symmetry of the factors."""

    def run():
        rng = np.random.default_rng(seed)
        notes = []
        N = 5
        grid = build_grid(N)
        params = _unit_params(N, 2)
        sp = build_spline(SampleSet(grid, rng.normal(size=N)), params, cfg)
        xs = rng.uniform(0, 2 * np.pi, points)
        period = float(np.max(np.abs(eval_spline(sp, xs + 2 * np.pi) - eval_spline(sp, xs))))
        parity = 0.0
        general = SplineParams((1.0, 2.0, 3.0), (1.0, -1.0, 2.0), 2, 7, I1=1)
        for p in (params, general):
            for k in range(1, p.n + 1):
                parity = max(
                    parity,
                    float(np.max(np.abs(eval_cos_kernel(k, p, -xs, cfg) - eval_cos_kernel(k, p, xs, cfg)))),
                    float(np.max(np.abs(eval_sin_kernel(k, p, -xs, cfg) + eval_sin_kernel(k, p, xs, cfg)))),
                )
        if parity > 1e-12:
            notes.append(f"violation: kernel parity off by {parity:.2e}")
        for N_, r in ((3, 1), (5, 2), (9, 3)):
            for k in range(1, (N_ - 1) // 2 + 1):
                a = _unit_params(N_, r, I1=1, I2=0)
                b = _unit_params(N_, r, I1=0, I2=1)
                if interp_factor_cos(k, a, cfg) != interp_factor_cos(k, b, cfg) or interp_factor_sin(
                    k, a, cfg
                ) != interp_factor_sin(k, b, cfg):
                    notes.append(f"violation: indicator symmetry broken (N={N_}, k={k})")
        return period, notes

    return _timed("structural invariants", 1e-10, run)


CHECKS: List[Callable[..., CheckResult]] = [
    check_interpolation,
    check_node_identities,
    check_discrete_lsq,
    check_regularization,
    check_regularized_decay,
    check_smoothing,
    check_oracle_equivalence,
    check_derivatives,
    check_structure,
    check_kernel_reference,
]


def _quick(cfg):
    return [
        check_node_identities(cfg, Ns=(3, 5), rs=(1, 2)),
        check_kernel_reference(cfg, cases=((5, 2),), terms=10**6),
    ]


_USES_CFG = {
    check_interpolation,
    check_node_identities,
    check_smoothing,
    check_oracle_equivalence,
    check_derivatives,
    check_structure,
    check_kernel_reference,
}


def run_verification(level: str = "quick", cfg: SeriesConfig = SeriesConfig()) -> List[CheckResult]:
    """Run the ``quick`` or ``full`` suite with the given series configuration."""
    if level == "quick":
        return _quick(cfg)
    if level != "full":
        raise ValueError(f"unknown verification level {level!r}")
    return [chk(cfg) if chk in _USES_CFG else chk() for chk in CHECKS]
