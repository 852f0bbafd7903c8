"""Sampling Kantorovich operators for 1D signals and grayscale images.

Provides the classical operator built from cell means and a compactly
supported kernel, a noise-perturbed probabilistic variant with fully
deterministic counter-based Monte Carlo streams, quality metrics
(MAE/MSE/PSNR/SSIM and error variance), PGM image I/O, and a CLI that
reruns the benchmark experiments.
"""

from .kernels import (
    Kernel,
    PartitionReport,
    box_kernel,
    bspline_kernel,
    check_decay,
    check_partition_of_unity,
    kernel_from_name,
)
from .quadrature import Quadrature, cell_mean, integrate
from .operator1d import (
    CellMeans,
    Domain1D,
    ErrorSummary,
    GridFunction1D,
    apply_sk,
    apply_sk_function,
    cell_index_range,
    compute_cell_means,
    error_summary,
    pointwise_error,
    sample_function,
)
from .noise import (
    MonteCarloEstimate,
    NoiseModel,
    TrialContext,
    apply_psk,
    apply_psk_from_means,
    expected_error,
    expected_error_summary,
    gaussian_field,
    normal_draws,
    perturb_cell_means,
)
from .metrics import (
    MetricsReport,
    SsimConfig,
    compare_images,
    expected_metric,
    mae,
    mse,
    psnr,
    psnr_from_mse,
    ssim,
    ssim_global,
    variance_abs_error,
)
from .image import (
    ExpectedImageMetrics,
    apply_psk_image,
    block_means,
    classical_reconstruction_metrics,
    expected_reconstruction_metrics,
    reconstruct_sk,
    sk_reconstruct,
    synthetic_test_image,
)
from .pgm import PgmParseError, load_pgm, quantization_bound, save_pgm
from .reports import format_value, write_csv_report

__version__ = "0.1.0"

__all__ = [
    "Kernel",
    "PartitionReport",
    "box_kernel",
    "bspline_kernel",
    "check_decay",
    "check_partition_of_unity",
    "kernel_from_name",
    "Quadrature",
    "cell_mean",
    "integrate",
    "CellMeans",
    "Domain1D",
    "ErrorSummary",
    "GridFunction1D",
    "apply_sk",
    "apply_sk_function",
    "cell_index_range",
    "compute_cell_means",
    "error_summary",
    "pointwise_error",
    "sample_function",
    "MonteCarloEstimate",
    "NoiseModel",
    "TrialContext",
    "apply_psk",
    "apply_psk_from_means",
    "expected_error",
    "expected_error_summary",
    "gaussian_field",
    "normal_draws",
    "perturb_cell_means",
    "MetricsReport",
    "SsimConfig",
    "compare_images",
    "expected_metric",
    "mae",
    "mse",
    "psnr",
    "psnr_from_mse",
    "ssim",
    "ssim_global",
    "variance_abs_error",
    "ExpectedImageMetrics",
    "apply_psk_image",
    "block_means",
    "classical_reconstruction_metrics",
    "expected_reconstruction_metrics",
    "reconstruct_sk",
    "sk_reconstruct",
    "synthetic_test_image",
    "PgmParseError",
    "load_pgm",
    "quantization_bound",
    "save_pgm",
    "format_value",
    "write_csv_report",
    "__version__",
]
