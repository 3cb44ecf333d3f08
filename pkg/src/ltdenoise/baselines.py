"""Reference denoisers: centred moving average and singular spectrum analysis."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParamsError, BadWindowError


def moving_average(signal, window: int = 3) -> np.ndarray:
    """Centred moving average that keeps the input length.

    Near the ends the window is truncated to the samples that exist, so with
    ``window=3`` the first output is the mean of the first two samples.
    """
    x = np.asarray(signal, dtype=np.float64).ravel()
    n = x.size
    if window < 3 or window % 2 == 0 or window > n:
        raise BadWindowError(f"window must be odd and in [3, {n}], got {window}")
    half = window // 2
    csum = np.concatenate(([0.0], np.cumsum(x)))
    pos = np.arange(n)
    lo = np.maximum(pos - half, 0)
    hi = np.minimum(pos + half + 1, n)
    return (csum[hi] - csum[lo]) / (hi - lo)


@dataclass(frozen=True)
class SsaParams:
    embed_dim: int
    rank: int = 2

    def check(self, n: int) -> None:
        if not 2 <= self.embed_dim <= n // 2:
            raise BadParamsError(f"embed_dim must be in [2, {n // 2}] for n={n}, got {self.embed_dim}")
        if not 1 <= self.rank <= self.embed_dim:
            raise BadParamsError(f"rank must be in [1, {self.embed_dim}], got {self.rank}")

    @classmethod
    def default_for(cls, n: int) -> "SsaParams":
        return cls(embed_dim=max(2, min(n // 4, 50)), rank=2)


def hankel_embed(x: np.ndarray, embed_dim: int) -> np.ndarray:
    k = x.size - embed_dim + 1
    return np.lib.stride_tricks.sliding_window_view(x, k)[:embed_dim].copy()


def diagonal_average(mat: np.ndarray) -> np.ndarray:
    """Average each anti-diagonal of ``mat`` back into a series."""
    rows, cols = mat.shape
    n = rows + cols - 1
    out = np.zeros(n)
    counts = np.zeros(n)
    for i in range(rows):
        out[i:i + cols] += mat[i]
        counts[i:i + cols] += 1
    return out / counts


def ssa_denoise(signal, params: SsaParams | None = None) -> np.ndarray:
    """Rank-truncated SSA reconstruction of a 1-D series."""
    x = np.asarray(signal, dtype=np.float64).ravel()
    if params is None:
        params = SsaParams.default_for(x.size)
    params.check(x.size)
    traj = hankel_embed(x, params.embed_dim)
    u, s, vt = np.linalg.svd(traj, full_matrices=False)
    r = params.rank
    low_rank = (u[:, :r] * s[:r]) @ vt[:r]
    return diagonal_average(low_rank)
