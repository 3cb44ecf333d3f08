"""Seeded random test problems, timed paired trials, averages and performance profiles."""
from __future__ import annotations

import math
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .baselines import SsaParams, moving_average, ssa_denoise
from .errors import BadKindError, BadParamsError, EmptyRecordsError, IncompleteMatrixError
from .ltd import default_params, denoise, hybrid_denoise, mse

KINDS = ("sine", "uniform", "gaussian")

# stream tags mixed into the per-problem seed
_EXACT, _NOISE, _ALGO = 0, 1, 2


def derive_seed(base_seed: int, size: int, trial: int, stream: int = 0) -> int:
    """Mix ``(base_seed, size, trial, stream)`` into a 64-bit seed.

    Each problem's seed depends only on its own coordinates, so adding sizes
    or trials leaves the existing problems untouched.
    """
    ss = np.random.SeedSequence([base_seed, size, trial, stream])
    return int(ss.generate_state(1, np.uint64)[0])


def generate_exact(kind: str, n: int, seed: int) -> np.ndarray:
    if kind not in KINDS:
        raise BadKindError(f"unknown signal kind {kind!r}; choose from {', '.join(KINDS)}")
    if n < 3:
        raise BadParamsError(f"n must be >= 3, got {n}")
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        return rng.uniform(0.0, 1.0, n)
    if kind == "gaussian":
        return rng.standard_normal(n)
    return np.sin(2.0 * np.pi * 3.0 * np.arange(n) / n)


def add_noise(signal, std: float, seed: int) -> np.ndarray:
    x = np.array(signal, dtype=np.float64).ravel()
    if std < 0:
        raise BadParamsError(f"noise std must be >= 0, got {std}")
    if std == 0:
        return x
    return x + np.random.default_rng(seed).normal(0.0, std, x.size)


def _run_ltd(noisy, seed):
    return denoise(noisy, default_params(noisy.size, seed=seed)).denoised


def _run_hybrid(noisy, seed):
    return hybrid_denoise(noisy, default_params(noisy.size, seed=seed)).denoised


def _run_ma(noisy, seed):
    return moving_average(noisy, 3)


def _run_ssa(noisy, seed):
    return ssa_denoise(noisy, SsaParams.default_for(noisy.size))


# name -> callable(noisy, seed) returning the denoised signal
ALGORITHMS: dict[str, Callable[[np.ndarray, int], np.ndarray]] = {
    "ltd": _run_ltd,
    "hybrid": _run_hybrid,
    "ma": _run_ma,
    "ssa": _run_ssa,
}


@dataclass(frozen=True)
class TrialRecord:
    algorithm: str
    n: int
    trial: int
    seed: int
    elapsed_seconds: float
    mse1: float
    mse2: float
    failed: bool = False
    error: str | None = None

    @property
    def problem(self) -> tuple[int, int]:
        # the seed is derived from (base_seed, n, trial), so it names the problem
        return (self.n, self.seed)


def _resolve(algorithms) -> list[tuple[str, Callable]]:
    resolved = []
    for algo in algorithms:
        if isinstance(algo, str):
            if algo not in ALGORITHMS:
                raise BadParamsError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")
            resolved.append((algo, ALGORITHMS[algo]))
        else:
            resolved.append(tuple(algo))
    if not resolved:
        raise BadParamsError("at least one algorithm is required")
    return resolved


def _run_problem(size, trial, algos, noise_std, base_seed, kind):
    seed = derive_seed(base_seed, size, trial)
    exact = generate_exact(kind, size, derive_seed(base_seed, size, trial, _EXACT))
    noisy = add_noise(exact, noise_std, derive_seed(base_seed, size, trial, _NOISE))
    algo_seed = derive_seed(base_seed, size, trial, _ALGO)
    mse1 = mse(exact, noisy)
    records = []
    for name, fn in algos:
        start = time.perf_counter()
        try:
            out = fn(noisy.copy(), algo_seed)
            elapsed = time.perf_counter() - start
            records.append(TrialRecord(name, size, trial, seed, elapsed, mse1, mse(exact, out)))
        except Exception as exc:  # a failing algorithm is recorded, not fatal
            records.append(TrialRecord(name, size, trial, seed, math.inf, mse1, math.nan,
                                       failed=True, error=f"{type(exc).__name__}: {exc}"))
    return records


def run_suite(sizes, trials_per_size: int, algorithms, noise_std: float = 0.1,
              base_seed: int = 0, kind: str = "sine", workers: int = 1) -> list[TrialRecord]:
    """Run every algorithm on the same noisy input for each (size, trial) problem.

    Records come back sorted by ``(n, trial, algorithm)`` whatever ``workers`` is.
    """
    if trials_per_size < 1:
        raise BadParamsError(f"trials_per_size must be >= 1, got {trials_per_size}")
    if kind not in KINDS:
        raise BadKindError(f"unknown signal kind {kind!r}")
    algos = _resolve(algorithms)
    problems = [(size, trial) for size in sizes for trial in range(trials_per_size)]
    args = [(s, t, algos, noise_std, base_seed, kind) for s, t in problems]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(lambda a: _run_problem(*a), args))
    else:
        batches = [_run_problem(*a) for a in args]
    records = [rec for batch in batches for rec in batch]
    return sorted(records, key=lambda r: (r.n, r.trial, r.algorithm))


@dataclass(frozen=True)
class AggregateRow:
    algorithm: str
    n: int
    mean_time: float
    mean_mse1: float
    mean_mse2: float
    trials: int
    failures: int


def aggregate(records) -> list[AggregateRow]:
    """Average time and MSE per ``(algorithm, n)``; failed trials only count as failures."""
    records = list(records)
    if not records:
        raise EmptyRecordsError("nothing to aggregate")
    groups = defaultdict(list)
    for rec in records:
        groups[(rec.algorithm, rec.n)].append(rec)
    rows = []
    for (algo, n), group in groups.items():
        ok = [r for r in group if not r.failed]
        rows.append(AggregateRow(
            algorithm=algo,
            n=n,
            mean_time=float(np.mean([r.elapsed_seconds for r in ok])) if ok else math.nan,
            mean_mse1=float(np.mean([r.mse1 for r in group])),
            mean_mse2=float(np.mean([r.mse2 for r in ok])) if ok else math.nan,
            trials=len(group),
            failures=len(group) - len(ok),
        ))
    return sorted(rows, key=lambda r: (r.n, r.algorithm))


@dataclass(frozen=True)
class ProfileCurve:
    algorithm: str
    points: tuple[tuple[float, float], ...]

    def rho(self, tau: float) -> float:
        value = 0.0
        for t, r in self.points:
            if t > tau:
                break
            value = r
        return value


def _ratio(t: float, best: float) -> float:
    if not math.isfinite(t):
        return math.inf
    if best == 0.0:
        return 1.0 if t == 0.0 else math.inf
    return t / best


def dolan_more_profile(records) -> list[ProfileCurve]:
    """Time performance profiles over the problems present in ``records``.

    A problem is one ``(n, seed)`` pair. Failed runs count as infinitely slow.
    Each curve carries a point at every finite ratio reached by any algorithm.
    """
    records = list(records)
    if not records:
        raise EmptyRecordsError("no records to profile")
    algos = sorted({r.algorithm for r in records})
    times: dict[tuple, dict[str, float]] = defaultdict(dict)
    for r in records:
        times[r.problem][r.algorithm] = math.inf if r.failed else r.elapsed_seconds
    for prob, row in times.items():
        missing = [a for a in algos if a not in row]
        if missing:
            raise IncompleteMatrixError(f"problem {prob} has no record for {', '.join(missing)}")
        if not any(math.isfinite(t) for t in row.values()):
            raise IncompleteMatrixError(f"problem {prob} has no successful run")

    ratios = {a: [] for a in algos}
    for row in times.values():
        best = min(row.values())
        for a in algos:
            ratios[a].append(_ratio(row[a], best))
    taus = sorted({r for rs in ratios.values() for r in rs if math.isfinite(r)} | {1.0})
    n_prob = len(times)
    curves = []
    for a in algos:
        rs = np.sort(np.array(ratios[a]))
        counts = np.searchsorted(rs, taus, side="right")
        curves.append(ProfileCurve(a, tuple((float(t), float(c) / n_prob) for t, c in zip(taus, counts))))
    return curves
