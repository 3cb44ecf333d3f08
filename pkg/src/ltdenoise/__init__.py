"""Low-dimension tridiagonal (LTD) denoising with baselines and a benchmark harness."""
from .baselines import SsaParams, moving_average, ssa_denoise
from .detection import DetectionResult, second_differences, select_noisy_indices
from .experiments import (
    ProfileCurve,
    TrialRecord,
    add_noise,
    aggregate,
    dolan_more_profile,
    generate_exact,
    run_suite,
)
from .ltd import (
    DenoiseResult,
    LtdParams,
    NoiseDistribution,
    build_tridiagonal_model,
    default_params,
    denoise,
    finalize,
    hybrid_denoise,
    initialize,
    pdf_grid,
)
from .tridiagonal import TridiagonalSystem, is_strictly_diagonally_dominant, multiply, solve

__version__ = "0.1.0"
