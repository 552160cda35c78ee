import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trigspline.errors import (
    ConvergenceError,
    DegenerateFactorError,
    InvalidArgumentError,
    NonconvergentDerivativeError,
)
from trigspline.grid import build_grid
from trigspline.kernels import (
    SeriesConfig,
    SplineParams,
    clear_caches,
    convergence_factor,
    eval_cos_kernel,
    eval_regularized_cos_kernel,
    eval_regularized_sin_kernel,
    eval_sin_kernel,
    interp_factor_cos,
    interp_factor_sin,
    kernel_derivative,
    kernel_terms,
)
from trigspline.oracles import reference_factor_sum, reference_kernel_sum

HC_N3 = 4 * math.pi**2 / 27
UNIT = (1.0, 1.0, 1.0)


def P(N, r, gamma=UNIT, eta=UNIT, **kw):
    return SplineParams(gamma, eta, r, N, **kw)


def mp_family_sum(term, start=1):
    mpmath.mp.dps = 30
    return mpmath.nsum(term, [start, mpmath.inf])


@pytest.mark.parametrize("k, r, expected", [(1, 1, 1.0), (2, 1, 0.25), (10, 3, 1e-4)])
def test_convergence_factor(k, r, expected):
    assert convergence_factor(k, r) == pytest.approx(expected, rel=1e-15)


def test_convergence_factor_decreasing():
    v = convergence_factor(np.arange(1, 200), 2)
    assert np.all(v > 0) and np.all(np.diff(v) < 0)


def test_hc_zeta_identity():
    p = P(3, 1)
    assert abs(interp_factor_cos(1, p) - HC_N3) < 1e-12
    assert abs(interp_factor_sin(1, p) - HC_N3) < 1e-12
    assert abs(HC_N3 - float(mpmath.mpf(8) / 9 * mpmath.zeta(2))) < 1e-15


def test_hc_alternating_bracket():
    p = P(3, 1, I1=1)
    hc = interp_factor_cos(1, p)
    lo, hi = sorted([reference_factor_sum(1, p, 2000), reference_factor_sum(1, p, 2001)])
    assert lo <= hc <= hi
    ref = 1 + mp_family_sum(lambda m: (-1) ** m * ((3 * m + 1) ** -2 + (3 * m - 1) ** -2))
    assert abs(hc - float(ref)) < 1e-12


def test_indicator_symmetry():
    for N, r in [(3, 1), (5, 2), (7, 3)]:
        a = P(N, r, (1.0, 2.0, -0.5), (0.5, 1.0, 3.0), I1=1, I2=0)
        b = P(N, r, (1.0, 2.0, -0.5), (0.5, 1.0, 3.0), I1=0, I2=1)
        for k in range(1, a.n + 1):
            assert interp_factor_cos(k, a) == interp_factor_cos(k, b)
            assert interp_factor_sin(k, a) == interp_factor_sin(k, b)


def test_hs_head_plus_bracketed_tail():
    p = P(5, 3, eta=(2.0, 1.0, 1.0))
    hs = interp_factor_sin(2, p)
    head = 2 * convergence_factor(2, 3)
    tail = hs - head
    upper = float(2 * mp_family_sum(lambda m: (5 * m - 2) ** -4))
    assert 0 < tail < upper
    exact = head + float(mp_family_sum(lambda m: (5 * m + 2) ** -4 + (5 * m - 2) ** -4))
    assert abs(hs - exact) < 1e-14


def test_unit_weights_mirror_not_degenerate():
    # (1, -1, -1) gives 2 - 4 pi^2/27, well away from zero
    p = P(3, 1, gamma=(1.0, -1.0, -1.0))
    assert abs(interp_factor_cos(1, p) - (2 - HC_N3)) < 1e-12


def test_degenerate_guard():
    g1 = HC_N3 - 1  # head cancels the (negated) tail
    with pytest.raises(DegenerateFactorError) as info:
        interp_factor_cos(1, P(3, 1, gamma=(g1, -1.0, -1.0)))
    assert abs(info.value.value) < 1e-9
    with pytest.raises(DegenerateFactorError):
        interp_factor_sin(1, P(3, 1, eta=(g1, -1.0, -1.0)))
    # just above the threshold
    ok = interp_factor_cos(1, P(3, 1, gamma=(g1 + 3e-9, -1.0, -1.0)))
    assert ok == pytest.approx(3e-9, rel=1e-3)


def test_cos_kernel_at_zero_is_factor():
    p = P(5, 1)
    assert eval_cos_kernel(1, p, 0.0) == pytest.approx(interp_factor_cos(1, p), abs=1e-15)


@pytest.mark.parametrize("N, r", [(5, 1), (3, 2), (9, 3), (7, 1)])
def test_node_identities(N, r):
    cfg = SeriesConfig()
    p = P(N, r, (1.0, 2.0, 0.5), (1.5, -1.0, 2.0))
    x = build_grid(N).nodes
    for k in range(1, p.n + 1):
        hc, hs = interp_factor_cos(k, p), interp_factor_sin(k, p)
        assert np.max(np.abs(eval_cos_kernel(k, p, x) / hc - np.cos(k * x))) <= 10 * cfg.tolerance
        assert np.max(np.abs(eval_sin_kernel(k, p, x) / hs - np.sin(k * x))) <= 10 * cfg.tolerance


def test_node_identity_example():
    p = P(5, 1)
    x = 2 * math.pi / 5
    assert eval_cos_kernel(1, p, x) == pytest.approx(interp_factor_cos(1, p) * math.cos(x), abs=1e-12)
    assert eval_sin_kernel(1, p, x) == pytest.approx(interp_factor_sin(1, p) * math.sin(x), abs=1e-12)


def test_shifted_grid_node_identities():
    # stitching on the shifted grid, interpolating on it too
    p = P(7, 2, I1=1, I2=1)
    x = build_grid(7, 1).nodes
    for k in range(1, 4):
        c = eval_cos_kernel(k, p, x) / interp_factor_cos(k, p)
        s = eval_sin_kernel(k, p, x) / interp_factor_sin(k, p)
        np.testing.assert_allclose(c, np.cos(k * x), atol=1e-11)
        np.testing.assert_allclose(s, np.sin(k * x), atol=1e-11)


def test_cos_kernel_reference():
    p = P(9, 2, gamma=(1.0, 2.0, 3.0), I1=1)
    ref = reference_kernel_sum(2, p, 1.0, 10**6, "cos")
    assert abs(eval_cos_kernel(2, p, 1.0) - ref) < 2e-12


def test_sin_kernel_reference():
    p = P(7, 1, eta=(1.0, -1.0, 2.0))
    ref = reference_kernel_sum(2, p, 0.7, 10**6, "sin")
    assert abs(eval_sin_kernel(2, p, 0.7) - ref) < 2e-12


def test_reference_single_term():
    p = P(5, 2, gamma=(2.0, 1.0, 1.0))
    assert reference_kernel_sum(2, p, 0.3, 1) == pytest.approx(2 * 2.0**-3 * math.cos(0.6), rel=1e-15)


def test_sin_kernel_zero_at_origin():
    for N, r in [(3, 1), (9, 2)]:
        p = P(N, r, eta=(1.0, -2.0, 0.5), I1=1)
        for k in range(1, p.n + 1):
            assert eval_sin_kernel(k, p, 0.0) == 0.0
            assert eval_regularized_sin_kernel(k, p, 0.3, 2, 0.0) == 0.0


def test_regularized_lambda_zero_identical():
    p = P(5, 2, (1.0, 2.0, 3.0), (1.0, -1.0, 2.0))
    for x in (0.0, 0.4, 2.2):
        assert eval_regularized_cos_kernel(1, p, 0.0, 3, x) == eval_cos_kernel(1, p, x)
        assert eval_regularized_sin_kernel(2, p, 0.0, 1, x) == eval_sin_kernel(2, p, x)


def test_regularized_cos_at_zero():
    p = P(5, 1)
    val = eval_regularized_cos_kernel(1, p, 1.0, 1, 0.0)
    w = lambda q: q**-2 / (1 + q**2)  # noqa: E731
    exact = w(mpmath.mpf(1)) + mp_family_sum(lambda m: w(5 * m + 1) + w(5 * m - 1))
    assert abs(val - float(exact)) < 1e-14
    ref = reference_kernel_sum(1, p, 0.0, 10**5, "cos", regularized=(1.0, 1))
    assert abs(val - ref) < 1e-14


def test_regularized_sin_reference():
    p = P(5, 1)
    val = eval_regularized_sin_kernel(1, p, 0.5, 2, 1.1)
    ref = reference_kernel_sum(1, p, 1.1, 10**5, "sin", regularized=(0.5, 2))
    assert abs(val - ref) < 2e-12


def test_regularized_vanishes_with_lambda():
    p = P(5, 1)
    vals = [eval_regularized_cos_kernel(1, p, lam, 1, 0.0) for lam in (0.5, 1.0, 10.0, 100.0, 1e4)]
    assert all(v > 0 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-7


def test_derivative_zero_is_kernel():
    p = P(5, 3)
    assert kernel_derivative(2, p, 0, 0.9) == eval_cos_kernel(2, p, 0.9)
    assert kernel_derivative(2, p, 0, 0.9, kind="sin") == eval_sin_kernel(2, p, 0.9)


def test_sin_derivative_at_zero():
    p = P(5, 3)
    val = kernel_derivative(1, p, 1, 0.0, kind="sin")
    exact = 1 + mp_family_sum(lambda m: (5 * m + 1) ** -3 - (5 * m - 1) ** -3)
    assert abs(val - float(exact)) < 1e-13
    assert abs(val - reference_kernel_sum(1, p, 0.0, 10**5, "sin", d=1)) < 1e-13


def test_derivative_matches_reference_off_node():
    p = P(7, 3, (1.0, -2.0, 0.5), (2.0, 1.0, -1.0), I1=1)
    for kind in ("cos", "sin"):
        for d in (1, 2):
            val = kernel_derivative(2, p, d, 1.3, kind=kind)
            ref = reference_kernel_sum(2, p, 1.3, 10**6, kind, d=d)
            assert abs(val - ref) < 2e-11


def test_regularized_derivative_reference():
    p = P(5, 2)
    val = kernel_derivative(1, p, 1, 0.8, regularized=(0.3, 1), kind="cos")
    ref = reference_kernel_sum(1, p, 0.8, 10**5, "cos", regularized=(0.3, 1), d=1)
    assert abs(val - ref) < 1e-13


@pytest.mark.parametrize("r, d", [(1, 1), (2, 2), (2, 5), (3, 3)])
def test_derivative_order_rejected(r, d):
    with pytest.raises(NonconvergentDerivativeError):
        kernel_derivative(1, P(5, r), d, 0.1)


@pytest.mark.parametrize("d", [-1, 0.5, True])
def test_derivative_order_invalid(d):
    with pytest.raises(InvalidArgumentError):
        kernel_derivative(1, P(5, 3), d, 0.1)


@pytest.mark.parametrize("k", [0, 3, -1])
def test_k_out_of_range(k):
    with pytest.raises(InvalidArgumentError):
        eval_cos_kernel(k, P(5, 1), 0.1)


@pytest.mark.parametrize(
    "kw",
    [
        dict(gamma=(0.0, 1.0, 1.0)),
        dict(eta=(1.0, 1.0)),
        dict(r=0),
        dict(N=4),
        dict(N=1),
        dict(I1=2),
        dict(I2=-1),
    ],
)
def test_params_validation(kw):
    base = dict(gamma=UNIT, eta=UNIT, r=1, N=5)
    base.update(kw)
    with pytest.raises(InvalidArgumentError):
        SplineParams(**base)


@pytest.mark.parametrize("kw", [dict(tolerance=0.0), dict(tolerance=-1.0), dict(max_terms=0), dict(max_terms=2.5)])
def test_series_config_validation(kw):
    with pytest.raises(InvalidArgumentError):
        SeriesConfig(**kw)


def test_convergence_error_reports_bound():
    cfg = SeriesConfig(tolerance=1e-14, max_terms=5)
    with pytest.raises(ConvergenceError) as info:
        eval_cos_kernel(1, P(5, 1), 0.0, cfg)
    assert info.value.bound > 1e-14 * 0.5
    assert "bound" in str(info.value)


def test_loose_tolerance_is_looser():
    p = P(5, 1)
    x = 0.37
    exact = reference_kernel_sum(1, p, x, 10**6)
    for tol in (1e-2, 1e-4, 1e-8):
        clear_caches()
        assert abs(eval_cos_kernel(1, p, x, SeriesConfig(tolerance=tol)) - exact) <= tol


def test_custom_factor():
    half = lambda q, r: 0.5 * convergence_factor(q, r)  # noqa: E731
    p = P(5, 2)
    ph = SplineParams(UNIT, UNIT, 2, 5, factor=half)
    assert eval_cos_kernel(1, ph, 0.5) == pytest.approx(eval_cos_kernel(1, p, 0.5) / 2, abs=2e-12)
    assert interp_factor_sin(2, ph) == pytest.approx(interp_factor_sin(2, p) / 2, abs=2e-12)


def test_array_input():
    p = P(5, 2)
    x = np.array([[0.1, 0.2], [0.3, 0.4]])
    out = eval_cos_kernel(1, p, x)
    assert out.shape == (2, 2)
    assert out[1, 0] == eval_cos_kernel(1, p, 0.3)


xs = st.floats(-20.0, 20.0, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(x=xs, k=st.integers(1, 3), I1=st.sampled_from([0, 1]))
def test_parity(x, k, I1):
    p = P(7, 2, (1.0, 2.0, 3.0), (1.0, -1.0, 2.0), I1=I1)
    assert abs(eval_cos_kernel(k, p, -x) - eval_cos_kernel(k, p, x)) <= 1e-12
    assert abs(eval_sin_kernel(k, p, -x) + eval_sin_kernel(k, p, x)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(x=st.floats(0.0, 2 * math.pi), k=st.integers(1, 2))
def test_periodicity(x, k):
    p = P(5, 2, (1.0, 2.0, 3.0), (1.0, -1.0, 2.0))
    tol = 10 * SeriesConfig().tolerance
    assert abs(eval_cos_kernel(k, p, x + 2 * math.pi) - eval_cos_kernel(k, p, x)) <= tol
    assert abs(eval_sin_kernel(k, p, x + 2 * math.pi) - eval_sin_kernel(k, p, x)) <= tol


@pytest.mark.parametrize("N, r, p_reg", [(5, 1, 1), (9, 2, 2), (5, 3, 1), (9, 1, 3)])
def test_regularized_decay_order(N, r, p_reg):
    lam = 0.5
    for kind in ("cos", "sin"):
        q, c = kernel_terms(1, P(N, r), 101, kind, (lam, p_reg))
        keep = (q >= N) & (q <= 100 * N)
        e = 1 + r + 2 * p_reg
        scaled = np.abs(c[keep]) * q[keep] ** e * lam ** (2 * p_reg)
        assert scaled.max() / scaled.min() <= 2.0
        # a cruder slope would fail: one order less is off by far more than 2x
        assert (scaled / q[keep]).max() / (scaled / q[keep]).min() > 2.0


def test_kernel_terms_reproduce_kernel():
    p = P(5, 3, (1.0, 2.0, -1.0), (0.5, 1.0, 2.0), I1=1)
    q, c = kernel_terms(2, p, 20000, "sin")
    x = 0.77
    assert abs(math.fsum(c * np.sin(q * x)) - eval_sin_kernel(2, p, x)) < 2e-12
    q, c = kernel_terms(2, p, 20000, "cos", d=1)
    assert abs(math.fsum(c * np.cos(q * x + math.pi / 2)) - kernel_derivative(2, p, 1, x)) < 2e-11
