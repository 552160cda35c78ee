"""Trigonometric interpolation splines on uniform periodic grids."""

from .errors import *  # noqa: F401,F403
from .fourier import (
    DiscreteSpectrum,
    FourierCoefficients,
    bessel_coefficients,
    eval_trig_polynomial,
    residual_discrete,
    truncate_spectrum,
)
from .grid import SampleSet, UniformGrid, build_grid, load_samples, sample_function, save_samples
from .kernels import (
    DEFAULT_SERIES,
    SeriesConfig,
    SplineParams,
    convergence_factor,
    eval_cos_kernel,
    eval_regularized_cos_kernel,
    eval_regularized_sin_kernel,
    eval_sin_kernel,
    interp_factor_cos,
    interp_factor_sin,
    kernel_derivative,
)
from .regularization import (
    RegParams,
    euler_residual,
    regularization_functional,
    regularize_spline,
    smoothness_functional,
    tau,
)
from .smoothing import FilterKernel, MultiplierFamily, modified_fejer, smooth_data, smooth_spline
from .spline import TrigSpline, approximate_spline, build_spline, eval_spline, spline_derivative, term_table

__version__ = "0.1.0"
