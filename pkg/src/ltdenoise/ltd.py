"""Low-dimension tridiagonal (LTD) denoiser.

Each outer pass picks the most noisy samples by their second differences,
models them with a small random tridiagonal system whose right-hand side is
built from the fitted noise pdf, and keeps the best of ``kmax`` random models.
The accepted solution overwrites the selected samples.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .baselines import moving_average
from .detection import DEFAULT_RATIO, select_noisy_indices
from .errors import (
    BadParamsError,
    DegenerateDistributionError,
    DimensionMismatchError,
    EmptySystemError,
    TooShortError,
    ZeroPivotError,
)
from .tridiagonal import TridiagonalSystem, multiply, solve

# (n, kmax, delta) rows of the suggested-parameter table
SUGGESTED_PARAMS = (
    (100, 10, 1e-6),
    (500, 10, 1e-5),
    (1000, 100, 1e-4),
    (5000, 100, 1e-4),
    (10000, 200, 1e-3),
)

OFF_DIAGONAL_HALF_WIDTH = 0.5
DIAGONAL_SLACK = 0.5
DEFAULT_HIGH_NOISE_THRESHOLD = 0.075


@dataclass(frozen=True)
class LtdParams:
    """Knobs of the LTD loop.

    ``discrepancy`` stops the outer loop once the mean squared change made to
    the signal reaches ``discrepancy`` times the noise variance estimated at
    initialization. ``None`` disables the rule.
    """

    kmax: int
    delta: float
    ratio: float = DEFAULT_RATIO
    window: int = 3
    max_outer: int = 50
    seed: int = 0
    discrepancy: float | None = 1.0

    def __post_init__(self):
        if self.kmax < 1:
            raise BadParamsError(f"kmax must be >= 1, got {self.kmax}")
        if not self.delta > 0:
            raise BadParamsError(f"delta must be > 0, got {self.delta}")
        if not 0.0 < self.ratio <= 1.0:
            raise BadParamsError(f"ratio must lie in (0, 1], got {self.ratio}")
        if self.window < 3 or self.window % 2 == 0:
            raise BadParamsError(f"window must be odd and >= 3, got {self.window}")
        if self.max_outer < 1:
            raise BadParamsError(f"max_outer must be >= 1, got {self.max_outer}")
        if not 0 <= self.seed < 2**64:
            raise BadParamsError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.discrepancy is not None and not self.discrepancy > 0:
            raise BadParamsError(f"discrepancy must be > 0 or None, got {self.discrepancy}")


def default_params(n: int, **overrides) -> LtdParams:
    """Table-driven ``kmax``/``delta`` for data size ``n``.

    The nearest tabulated size wins; ties go to the smaller size.
    """
    if n < 1:
        raise BadParamsError(f"n must be positive, got {n}")
    _, kmax, delta = min(SUGGESTED_PARAMS, key=lambda row: (abs(n - row[0]), row[0]))
    return LtdParams(kmax=kmax, delta=delta, **overrides)


@dataclass(frozen=True)
class NoiseDistribution:
    mean: float
    std: float

    def pdf(self, x) -> np.ndarray:
        z = (np.asarray(x, dtype=np.float64) - self.mean) / self.std
        return np.exp(-0.5 * z * z) / (self.std * np.sqrt(2.0 * np.pi))


def initialize(signal, window: int = 3) -> NoiseDistribution:
    """Fit a normal distribution to the moving-average residuals ``gm - signal``."""
    x = np.asarray(signal, dtype=np.float64).ravel()
    if x.size < window:
        raise TooShortError(f"signal of length {x.size} is shorter than window {window}")
    resid = moving_average(x, window) - x
    return NoiseDistribution(mean=float(resid.mean()), std=float(resid.std(ddof=1)))


def pdf_grid(dist: NoiseDistribution, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the fitted pdf on ``n`` points evenly spread over mean +/- 3 std."""
    if n < 1:
        raise BadParamsError(f"grid size must be positive, got {n}")
    if not dist.std > 0 or not np.isfinite(dist.std):
        raise DegenerateDistributionError(f"fitted noise std is {dist.std}")
    if n == 1:
        grid = np.array([dist.mean])
    else:
        grid = np.linspace(dist.mean - 3.0 * dist.std, dist.mean + 3.0 * dist.std, n)
    return grid, dist.pdf(grid)


def build_tridiagonal_model(gt, pdf_values, rng: np.random.Generator, anchor=None) -> TridiagonalSystem:
    """Draw one random, strictly diagonally dominant model for the selected samples.

    Off-diagonals are uniform on [-0.5, 0.5] and ``d_i = 1 + |mu_i| + |rho_{i-1}| + u_i``
    with ``u_i`` uniform on [0, 0.5]. The right-hand side is ``T @ anchor`` plus
    each sample's deviation from its anchor weighted by its share of the peak
    pdf value, so the solution is ``anchor + T^{-1} (w * (gt - anchor))``.
    ``anchor`` defaults to zero.
    """
    gt = np.asarray(gt, dtype=np.float64).ravel()
    pdf_values = np.asarray(pdf_values, dtype=np.float64).ravel()
    n = gt.size
    if n == 0:
        raise EmptySystemError("no samples selected")
    if pdf_values.size != n:
        raise DimensionMismatchError(f"gt has {n} entries but pdf values have {pdf_values.size}")
    anchor = np.zeros(n) if anchor is None else np.asarray(anchor, dtype=np.float64).ravel()
    if anchor.size != n:
        raise DimensionMismatchError(f"gt has {n} entries but anchor has {anchor.size}")

    mu = rng.uniform(-OFF_DIAGONAL_HALF_WIDTH, OFF_DIAGONAL_HALF_WIDTH, n - 1)
    rho = rng.uniform(-OFF_DIAGONAL_HALF_WIDTH, OFF_DIAGONAL_HALF_WIDTH, n - 1)
    d = 1.0 + rng.uniform(0.0, DIAGONAL_SLACK, n)
    d[:-1] += np.abs(mu)
    d[1:] += np.abs(rho)

    peak = np.max(np.abs(pdf_values))
    weights = pdf_values / peak if peak > 0 else np.zeros(n)
    model = TridiagonalSystem(d=d, mu=mu, rho=rho, rhs=np.zeros(n))
    rhs = multiply(model, anchor) + weights * (gt - anchor)
    return TridiagonalSystem(d=d, mu=mu, rho=rho, rhs=rhs)


class TraceRecord(NamedTuple):
    outer_pass: int
    k: int
    error: float
    accepted: bool


@dataclass
class LtdState:
    working: np.ndarray
    f: np.ndarray = field(default_factory=lambda: np.zeros(0))
    error: float = np.inf
    k: int = 0
    error_trace: list[TraceRecord] = field(default_factory=list)


@dataclass
class DenoiseResult:
    denoised: np.ndarray
    iterations_total: int
    error_trace: list[TraceRecord]
    elapsed_seconds: float
    stop_reason: str = ""
    metadata: dict = field(default_factory=dict)

    def accepted_trace(self) -> list[TraceRecord]:
        return [rec for rec in self.error_trace if rec.accepted]


def _check_signal(signal) -> np.ndarray:
    x = np.array(signal, dtype=np.float64).ravel()
    if x.size < 3:
        raise TooShortError(f"denoising needs at least 3 samples, got {x.size}")
    return x


def denoise(signal, params: LtdParams | None = None) -> DenoiseResult:
    x = _check_signal(signal)
    if params is None:
        params = default_params(x.size)
    if x.size < params.window:
        raise TooShortError(f"signal of length {x.size} is shorter than window {params.window}")
    start = time.perf_counter()
    result = _ltd_loop(x, x, initialize(x, params.window), params)
    result.elapsed_seconds = time.perf_counter() - start
    return result


def _ltd_loop(start_signal, reference, dist: NoiseDistribution, params: LtdParams) -> DenoiseResult:
    """Run the outer/inner LTD loop from ``start_signal``.

    ``dist`` is the noise fit of ``reference`` and the change budget of the
    ``discrepancy`` rule is measured against ``reference``.
    """
    rng = np.random.default_rng(params.seed)
    state = LtdState(working=np.array(start_signal, dtype=np.float64))
    if not dist.std > 0 or not np.isfinite(dist.std):
        return DenoiseResult(state.working, 0, state.error_trace, 0.0, "degenerate_distribution")
    # residual of a window-w moving average has variance sigma^2 (w - 1) / w
    noise_var = dist.std ** 2 * params.window / (params.window - 1)

    reason = "max_outer"
    for outer in range(params.max_outer):
        if params.discrepancy is not None:
            change = np.mean((state.working - reference) ** 2)
            if change >= params.discrepancy * noise_var:
                reason = "noise_level"
                break
        det = select_noisy_indices(state.working, params.ratio)
        if det.empty:
            reason = "empty_selection"
            break
        idx, gt = det.indices, det.gt
        anchor = 0.5 * (state.working[idx - 1] + state.working[idx + 1])
        _, pdf_values = pdf_grid(dist, gt.size)

        best_err, best_f = np.inf, None
        for k in range(1, params.kmax + 1):
            state.k += 1
            system = build_tridiagonal_model(gt, pdf_values, rng, anchor)
            try:
                f = solve(system)
            except ZeroPivotError:
                continue
            err = float(np.linalg.norm(f - gt))
            accepted = err < best_err
            if accepted:
                best_err, best_f = err, f
            state.error_trace.append(TraceRecord(outer, k, err, accepted))
            if err <= params.delta:
                break

        if best_f is None:
            reason = "no_acceptance"
            break
        state.working[idx] = best_f
        state.f, state.error = best_f, best_err
        if best_err <= params.delta:
            reason = "tolerance"
            break

    return DenoiseResult(
        denoised=state.working,
        iterations_total=state.k,
        error_trace=state.error_trace,
        elapsed_seconds=0.0,
        stop_reason=reason,
    )


def hybrid_denoise(signal, params: LtdParams | None = None,
                   high_noise_threshold: float = DEFAULT_HIGH_NOISE_THRESHOLD) -> DenoiseResult:
    """LTD preceded by a moving average when the fitted noise is large.

    The smoothing branch runs when the fitted residual std exceeds
    ``high_noise_threshold`` times the signal's peak-to-peak range. Either
    way the noise fit and the change budget come from the raw input, so the
    moving average spends part of the same budget LTD would.
    """
    x = _check_signal(signal)
    if params is None:
        params = default_params(x.size)
    if high_noise_threshold < 0:
        raise BadParamsError(f"high_noise_threshold must be >= 0, got {high_noise_threshold}")
    start = time.perf_counter()
    dist = initialize(x, params.window)
    spread = float(np.ptp(x)) + 1e-12
    smoothed = dist.std > high_noise_threshold * spread
    source = moving_average(x, params.window) if smoothed else x
    result = _ltd_loop(source, x, dist, params)
    result.elapsed_seconds = time.perf_counter() - start
    result.metadata.update(
        branch="smoothed" if smoothed else "plain",
        fitted_std=dist.std,
        spread=spread,
        first_stage=source,
    )
    return result


def mse(a, b) -> float:
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size != b.size:
        raise DimensionMismatchError(f"length {a.size} vs {b.size}")
    return float(np.mean((a - b) ** 2))


def finalize(exact, noisy, denoised) -> tuple[float, float]:
    """Return ``(mse1, mse2)``: noisy-vs-exact and denoised-vs-exact."""
    exact = np.asarray(exact, dtype=np.float64).ravel()
    noisy = np.asarray(noisy, dtype=np.float64).ravel()
    denoised = np.asarray(denoised, dtype=np.float64).ravel()
    if not exact.size == noisy.size == denoised.size:
        raise DimensionMismatchError(
            f"lengths differ: exact={exact.size}, noisy={noisy.size}, denoised={denoised.size}")
    return mse(exact, noisy), mse(exact, denoised)
