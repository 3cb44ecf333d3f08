"""Second-difference detection of the most noisy samples."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParamsError, TooShortError

DEFAULT_RATIO = 0.7


@dataclass(frozen=True, eq=False)
class DetectionResult:
    """Outcome of one detection sweep.

    ``indices`` are 0-based positions in the signal; position ``j`` is judged
    by ``dd[j - 1]``, the centred second difference around it, so the first
    and last samples are never selected.
    """

    dd: np.ndarray
    max_abs: float
    indices: np.ndarray
    gt: np.ndarray

    @property
    def empty(self) -> bool:
        return self.indices.size == 0


def second_differences(signal) -> np.ndarray:
    x = np.asarray(signal, dtype=np.float64).ravel()
    if x.size < 3:
        raise TooShortError(f"second differences need at least 3 samples, got {x.size}")
    return x[2:] - 2.0 * x[1:-1] + x[:-2]


def select_noisy_indices(signal, ratio: float = DEFAULT_RATIO) -> DetectionResult:
    """Select interior samples whose ``|dd|`` strictly exceeds ``ratio * max|dd|``."""
    if not 0.0 < ratio <= 1.0:
        raise BadParamsError(f"ratio must lie in (0, 1], got {ratio}")
    x = np.asarray(signal, dtype=np.float64).ravel()
    dd = second_differences(x)
    mag = np.abs(dd)
    max_abs = float(mag.max())
    indices = np.flatnonzero(mag - ratio * max_abs > 0) + 1
    return DetectionResult(dd=dd, max_abs=max_abs, indices=indices, gt=x[indices].copy())
