"""Small tridiagonal systems and their O(n) solve.

Row ``i`` of the matrix reads ``rho[i-1] * x[i-1] + d[i] * x[i] + mu[i] * x[i+1]``,
so ``mu`` is the super-diagonal and ``rho`` the sub-diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DimensionMismatchError, EmptySystemError, ZeroPivotError

PIVOT_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class TridiagonalSystem:
    d: np.ndarray
    mu: np.ndarray
    rho: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.float64).ravel()
        mu = np.asarray(self.mu, dtype=np.float64).ravel()
        rho = np.asarray(self.rho, dtype=np.float64).ravel()
        rhs = np.asarray(self.rhs, dtype=np.float64).ravel()
        n = d.size
        if n == 0:
            raise EmptySystemError("tridiagonal system needs at least one row")
        if rhs.size != n or mu.size != n - 1 or rho.size != n - 1:
            raise DimensionMismatchError(
                f"expected d/rhs of length {n} and mu/rho of length {n - 1}, got "
                f"d={d.size}, mu={mu.size}, rho={rho.size}, rhs={rhs.size}"
            )
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "rhs", rhs)

    @property
    def n(self) -> int:
        return self.d.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.d) + np.diag(self.mu, 1) + np.diag(self.rho, -1)


@njit(cache=True)
def _thomas(rho, d, mu, rhs, tol):
    n = d.size
    c = np.empty(n)
    y = np.empty(n)
    if abs(d[0]) < tol:
        return y, 0
    c[0] = mu[0] / d[0] if n > 1 else 0.0
    y[0] = rhs[0] / d[0]
    for i in range(1, n):
        piv = d[i] - rho[i - 1] * c[i - 1]
        if abs(piv) < tol:
            return y, i
        if i < n - 1:
            c[i] = mu[i] / piv
        y[i] = (rhs[i] - rho[i - 1] * y[i - 1]) / piv
    for i in range(n - 2, -1, -1):
        y[i] -= c[i] * y[i + 1]
    return y, -1


def solve(system: TridiagonalSystem) -> np.ndarray:
    """Solve ``T f = rhs`` by forward elimination and back substitution.

    No pivoting is done. Raises ZeroPivotError when a pivot falls below
    ``1e-12 * (1 + max|d|)``; strictly diagonally dominant systems never do.
    """
    tol = PIVOT_RTOL * (1.0 + float(np.max(np.abs(system.d))))
    f, bad_row = _thomas(system.rho, system.d, system.mu, system.rhs, tol)
    if bad_row >= 0:
        raise ZeroPivotError(f"pivot below {tol:.3g} at row {bad_row}")
    return f


def multiply(system: TridiagonalSystem, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size != system.n:
        raise DimensionMismatchError(f"vector of length {x.size} for a system of size {system.n}")
    y = system.d * x
    y[:-1] += system.mu * x[1:]
    y[1:] += system.rho * x[:-1]
    return y


def off_diagonal_row_sums(system: TridiagonalSystem) -> np.ndarray:
    s = np.zeros(system.n)
    s[:-1] += np.abs(system.mu)
    s[1:] += np.abs(system.rho)
    return s


def is_strictly_diagonally_dominant(system: TridiagonalSystem) -> bool:
    return bool(np.all(np.abs(system.d) > off_diagonal_row_sums(system)))
