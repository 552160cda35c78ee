import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trigspline.errors import (
    IncompatibilityError,
    InvalidArgumentError,
    InvalidStateError,
    NonconvergentDerivativeError,
)
from trigspline.fourier import FourierCoefficients
from trigspline.grid import SampleSet, build_grid, sample_function
from trigspline.kernels import SplineParams
from trigspline.oracles import QuadratureConfig, continuum_fourier
from trigspline.regularization import (
    RegParams,
    RegularizationWarning,
    euler_residual,
    regularization_functional,
    regularize_spline,
    smoothness_functional,
    tau,
)
from trigspline.spline import approximate_spline, build_spline, eval_spline, term_table

UNIT = (1.0, 1.0, 1.0)


def spline(rng, N=5, r=2):
    s = SampleSet(build_grid(N), rng.normal(size=N))
    return build_spline(s, SplineParams((1.0, 2.0, 0.5), (1.5, -1.0, 2.0), r, N))


@pytest.mark.parametrize("p", [1, 2, 3, 7])
def test_tau_half_at_unit(p):
    assert tau(10, RegParams(0.1, p)) == 0.5


def test_tau_examples():
    assert tau(0, RegParams(3.0, 2)) == 1.0
    assert tau(5, RegParams(0.1, 1)) == pytest.approx(0.8, rel=1e-15)
    assert tau(7, RegParams(0.0, 4)) == 1.0
    np.testing.assert_array_equal(tau(np.array([0, 10]), RegParams(0.1, 2)), [1.0, 0.5])


@settings(max_examples=80, deadline=None)
@given(k=st.integers(0, 500), lam=st.floats(0.0, 10.0), p=st.integers(1, 5))
def test_tau_bounds_and_monotonicity(k, lam, p):
    t = tau(k, RegParams(lam, p))
    assert 0 < t <= 1
    assert tau(k + 1, RegParams(lam, p)) <= t
    assert tau(k, RegParams(lam * 1.5, p)) <= t
    if lam * k > 1:
        assert tau(k, RegParams(lam, p + 1)) <= t


@pytest.mark.parametrize("kw", [dict(lam=-0.1), dict(lam=float("inf")), dict(lam=0.1, p=0), dict(lam=0.1, p=1.5)])
def test_regparams_validation(kw):
    with pytest.raises(InvalidArgumentError):
        RegParams(**kw)


def test_lambda_zero_is_identity(rng):
    sp = spline(rng)
    reg = regularize_spline(sp, RegParams(0.0, 2))
    xs = rng.uniform(0, 2 * np.pi, 8)
    assert np.max(np.abs(eval_spline(reg, xs) - eval_spline(sp, xs))) <= 1e-12


def test_interpolation_broken_by_regularization():
    g = build_grid(5)
    sp = build_spline(sample_function(g, lambda x: math.cos(2 * x)), SplineParams(UNIT, UNIT, 1, 5))
    reg = regularize_spline(sp, RegParams(0.3, 1))
    damped = eval_spline(reg, g.nodes)
    assert np.max(np.abs(damped - np.cos(2 * g.nodes))) > 1e-2
    assert abs(damped[0]) < 1.0


def test_effective_coefficients_are_tau_weighted(rng):
    sp = spline(rng, 5, 3)
    r = RegParams(0.1, 2)
    reg = regularize_spline(sp, r)
    A0, B0 = term_table(sp, 40)
    A1, B1 = term_table(reg, 40)
    q = np.arange(1, 41)
    np.testing.assert_allclose(A1[1:], tau(q, r) * A0[1:], rtol=1e-14, atol=1e-300)
    np.testing.assert_allclose(B1[1:], tau(q, r) * B0[1:], rtol=1e-14, atol=1e-300)
    assert A1[0] == A0[0]
    # the same ratios extracted by quadrature from point values
    cfg = QuadratureConfig(512)
    c0 = continuum_fourier(lambda x: eval_spline(sp, x), 7, cfg)
    c1 = continuum_fourier(lambda x: eval_spline(reg, x), 7, cfg)
    # q = 5 carries no term; quadrature aliasing leaves ~1e-10 there
    np.testing.assert_allclose(c1.a, tau(np.arange(1, 8), r) * c0.a, rtol=1e-7, atol=1e-9)
    np.testing.assert_allclose(c1.b, tau(np.arange(1, 8), r) * c0.b, rtol=1e-7, atol=1e-9)


def test_double_regularization(rng):
    reg = regularize_spline(spline(rng), RegParams(0.1))
    with pytest.raises(InvalidStateError):
        regularize_spline(reg, RegParams(0.2))


def test_high_order_warning(rng):
    with pytest.warns(RegularizationWarning):
        regularize_spline(spline(rng, 5, 4), RegParams(0.1))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        regularize_spline(spline(rng, 5, 3), RegParams(0.1))


def test_commutes_with_truncation(rng):
    sp = spline(rng, 7, 2)
    r = RegParams(0.2, 1)
    a = approximate_spline(regularize_spline(sp, r), 2)
    b = regularize_spline(approximate_spline(sp, 2), r)
    for x in rng.uniform(0, 2 * np.pi, 6):
        assert eval_spline(a, x) == eval_spline(b, x)


def test_euler_single_harmonic():
    for k in (1, 3, 6):
        for lam, p in [(0.1, 1), (0.5, 2), (1.0, 3)]:
            r = RegParams(lam, p)
            a = np.zeros(6)
            a[k - 1] = 1.0
            f = FourierCoefficients(0.0, a, np.zeros(6))
            g = f.scaled(tau(np.arange(1, 7), r))
            for x in (0.0, 0.4, 2.5):
                assert abs(euler_residual(f, g, r, x)) <= 1e-12


def test_euler_random_bandlimited(rng):
    x = rng.uniform(0, 2 * np.pi, 100)
    for lam in (0.01, 0.1, 1.0):
        for p in (1, 2, 3):
            r = RegParams(lam, p)
            f = FourierCoefficients(rng.normal(), rng.normal(size=8), rng.normal(size=8))
            g = f.scaled(tau(np.arange(1, 9), r))
            assert np.max(np.abs(euler_residual(f, g, r, x))) <= 1e-10


def test_euler_unregularized_fails():
    f = FourierCoefficients(0.0, [1.0], [0.0])
    for lam in (0.1, 0.7):
        assert euler_residual(f, f, RegParams(lam, 1), 0.0) == pytest.approx(-(lam**2), rel=1e-15)


def test_euler_band_mismatch():
    with pytest.raises(IncompatibilityError):
        euler_residual(FourierCoefficients(0, [1], [0]), FourierCoefficients(0, [1, 0], [0, 0]), RegParams(0.1), 0.0)


def test_smoothness_examples():
    assert smoothness_functional(lambda x: 2.0, 1) < 1e-20
    assert abs(smoothness_functional(math.cos, 1) - math.pi) < 1e-6
    assert abs(smoothness_functional(lambda x: math.cos(2 * x), 2) - 16 * math.pi) < 1e-4
    spec = FourierCoefficients(0.0, [0.0, 1.0], [0.0, 0.0])
    assert abs(smoothness_functional(spec, 2) - 16 * math.pi) < 1e-10


def test_smoothness_of_spline(rng):
    sp = spline(rng, 5, 3)
    A, B = term_table(sp, 5 * 2000)
    q = np.arange(1, A.size)
    # Parseval: pi * sum q^2 (A^2 + B^2)
    exact = math.pi * math.fsum(q**2 * (A[1:] ** 2 + B[1:] ** 2))
    # 1024 points: aliasing of the q**-3 derivative terms is ~1e-8 relative
    assert smoothness_functional(sp, 1, 1024) == pytest.approx(exact, rel=1e-7)
    with pytest.raises(NonconvergentDerivativeError):
        smoothness_functional(sp, 3)


def test_functional_zero():
    assert regularization_functional(math.sin, math.sin, RegParams(0.0)) == 0.0


@pytest.mark.parametrize("lam, p", [(0.1, 1), (0.5, 2), (1.0, 1), (2.0, 3)])
def test_functional_closed_form_and_minimum(lam, p):
    r = RegParams(lam, p)
    t = tau(1, r)
    g = lambda c: FourierCoefficients(0.0, [c], [0.0])  # noqa: E731
    f = g(1.0)
    phi = regularization_functional(f, g(t), r)
    assert phi == pytest.approx(math.pi * ((1 - t) ** 2 + lam ** (2 * p) * t * t), rel=1e-12)
    for d in (-0.05, 0.05):
        assert regularization_functional(f, g(t + d), r) > phi
    # callables take the spectral-derivative route
    phi_c = regularization_functional(math.cos, lambda x: t * math.cos(x), r)
    assert phi_c == pytest.approx(phi, rel=1e-10)


@pytest.mark.parametrize("lam, p", [(0.05, 1), (0.3, 2), (1.0, 3)])
def test_discrete_minimizer_is_tau(lam, p, rng):
    K, M = 8, 256
    x = 2 * np.pi * np.arange(M) / M
    k = np.arange(1, K + 1)
    basis = np.column_stack([np.full(M, 0.5), np.cos(np.outer(x, k)), np.sin(np.outer(x, k))])
    deriv = np.column_stack(
        [np.zeros(M), k**p * np.cos(np.outer(x, k) + p * np.pi / 2), k**p * np.sin(np.outer(x, k) + p * np.pi / 2)]
    )
    f = FourierCoefficients(rng.normal(), rng.normal(size=K), rng.normal(size=K))
    fx = f.evaluate(x)
    lhs = basis.T @ basis + lam ** (2 * p) * deriv.T @ deriv
    c = np.linalg.solve(lhs, basis.T @ fx)
    t = tau(k, RegParams(lam, p))
    np.testing.assert_allclose(c, np.concatenate([[f.a0], t * f.a, t * f.b]), atol=1e-8)


def test_quadrature_points_validation():
    with pytest.raises(InvalidArgumentError):
        smoothness_functional(math.cos, 1, 4)
