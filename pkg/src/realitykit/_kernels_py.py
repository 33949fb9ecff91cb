"""NumPy implementations of the inner loops; used when the compiled module is absent.

Every function here has a line-for-line counterpart in ``_kernels.pyx`` and
must return the same values to rounding.
"""
import numpy as np


def expm1_overlap_sum(r, log_r, log_s, w, beta):
    """Return sum_ij w_ij r_i expm1(beta (log s_j - log r_i)).

    Columns with ``log_s == -inf`` are null directions of sigma: they
    contribute ``-r_i w_ij`` when ``beta > 0`` (0**beta == 0) and are skipped
    otherwise (pseudo-inverse convention).
    """
    null = np.isneginf(log_s)
    with np.errstate(invalid="ignore", over="ignore"):
        t = np.expm1(beta * (log_s[None, :] - log_r[:, None]))
    t[:, null] = -1.0 if beta > 0 else 0.0
    return float(np.sum(w * r[:, None] * t))


def log_ratio_sum(r, log_r, log_s, w):
    """Return sum_ij w_ij r_i (log r_i - log s_j), skipping null columns of sigma."""
    keep = ~np.isneginf(log_s)
    diff = log_r[:, None] - log_s[None, keep]
    return float(np.sum(w[:, keep] * r[:, None] * diff))


def pinch(m, stride, d):
    """Zero every entry whose row and column differ in the digit ``(k // stride) % d``."""
    n = m.shape[0]
    digit = (np.arange(n) // stride) % d
    return np.where(digit[:, None] == digit[None, :], m, 0.0)


def trace_middle(m, left, mid, right):
    """Trace out the middle factor of a (left x mid x right) tensor-product matrix."""
    t = m.reshape(left, mid, right, left, mid, right)
    return np.einsum("ajbcjd->abcd", t).reshape(left * right, left * right)
