"""Derivative-free minimisation over density matrices.

States are parametrised by a complex lower-triangular Cholesky factor
(``d**2`` real numbers), so every parameter vector maps to a valid density
matrix; probability vectors use a softmax map. The simplex search is scipy's
Nelder-Mead, restarted from the incumbent until a restart gains less than
``ftol``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize


def cholesky_size(d: int) -> int:
    return d * d


def params_to_density(x, d: int) -> np.ndarray:
    """Map ``d**2`` reals to L L^dagger / Tr(L L^dagger)."""
    x = np.asarray(x, dtype=float)
    low = np.zeros((d, d), dtype=complex)
    low[np.diag_indices(d)] = x[:d]
    rows, cols = np.tril_indices(d, -1)
    n_off = rows.size
    low[rows, cols] = x[d:d + n_off] + 1j * x[d + n_off:d + 2 * n_off]
    m = low @ low.conj().T
    tr = np.trace(m).real
    if tr <= 0:
        return np.eye(d) / d
    return m / tr


def density_to_params(rho, jitter: float = 1e-9) -> np.ndarray:
    """Inverse of :func:`params_to_density` up to normalisation (jitter keeps Cholesky defined)."""
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    low = np.linalg.cholesky(0.5 * (rho + rho.conj().T) + jitter * np.eye(d))
    rows, cols = np.tril_indices(d, -1)
    return np.concatenate([low[np.diag_indices(d)].real, low[rows, cols].real, low[rows, cols].imag])


def softmax(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    e = np.exp(z - np.max(z))
    return e / e.sum()


@dataclass(frozen=True)
class OptimizeOutcome:
    x: np.ndarray
    fun: float
    converged: bool
    restarts: int
    nfev: int


def minimize_restarted(fun, x0, *, restarts: int = 200, ftol: float = 1e-9,
                       fatol: float = 1e-13, xatol: float = 1e-10,
                       maxfev: int | None = None) -> OptimizeOutcome:
    """Nelder-Mead from ``x0``, restarted at the incumbent until a restart improves by <= ftol."""
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    opts = {"xatol": xatol, "fatol": fatol, "adaptive": n > 4,
            "maxfev": maxfev or 2000 * max(n, 1)}
    res = minimize(fun, x0, method="Nelder-Mead", options=opts)
    best_x, best_f, nfev = res.x, float(res.fun), int(res.nfev)
    converged = False
    used = 0
    for used in range(1, restarts + 1):
        res = minimize(fun, best_x, method="Nelder-Mead", options=opts)
        nfev += int(res.nfev)
        gain = best_f - float(res.fun)
        if res.fun < best_f:
            best_x, best_f = res.x, float(res.fun)
        if gain <= ftol:
            converged = True
            break
    return OptimizeOutcome(np.asarray(best_x), best_f, converged, used, nfev)
