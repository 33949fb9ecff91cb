"""Scalar closed forms for the two-qubit Werner family.

These use only :mod:`math` and share no code with the matrix pipeline, so
they serve as independent oracles. ``A`` is any spin component of the first
qubit; the Werner state is rotationally invariant.
"""
from __future__ import annotations

import math

LN2 = math.log(2.0)


def ln_q(x: float, q: float) -> float:
    if q == 1.0:
        return math.log(x)
    return math.expm1((1.0 - q) * math.log(x)) / (1.0 - q)


def _xlnx(x: float) -> float:
    return x * math.log(x) if x > 0 else 0.0


def werner_reality_vn(eps: float) -> float:
    """ln 2 - [S(Phi_A rho_eps) - S(rho_eps)] from the two spectra."""
    s_rho = -(_xlnx((1 + 3 * eps) / 4) + 3 * _xlnx((1 - eps) / 4))
    s_phi = -(2 * _xlnx((1 - eps) / 4) + 2 * _xlnx((1 + eps) / 4))
    return LN2 - (s_phi - s_rho)


def werner_renyi_down(alpha: float, eps: float) -> float:
    """Petz-Renyi reality of the Werner state, alpha in (0,1) or (1,inf).

    The weights (1-eps)/4, (1+3eps)/4, (1-eps)/2 sum to one, so the trace term
    is written as 1 + sum_k w_k expm1((alpha-1) ln r_k), which keeps full
    precision as alpha approaches 1.
    """
    beta = alpha - 1
    excess = 0.0
    for w, r in (((1 - eps) / 4, (1 - eps) / (1 + eps)), ((1 + 3 * eps) / 4, (1 + 3 * eps) / (1 + eps))):
        if w > 0:
            excess += w * math.expm1(beta * math.log(r))
    return LN2 - math.log1p(excess) / beta


def werner_chi_derived(alpha: float, eps: float) -> float:
    """chi obtained from Tr_E(upsilon^alpha) = Phi_A(rho^alpha)."""
    bracket = ((1 - eps) ** alpha + (1 + 3 * eps) ** alpha) / 2 ** (alpha + 1)
    return (1 - eps) / 2 + bracket ** (1 / alpha)


def werner_chi_printed(alpha: float, eps: float) -> float:
    """chi with (1+eps)^alpha in the bracket, as it appears in print."""
    bracket = ((1 + eps) ** alpha + (1 + 3 * eps) ** alpha) / 2 ** (alpha + 1)
    return (1 - eps) / 2 + bracket ** (1 / alpha)


def werner_renyi_up(alpha: float, eps: float, chi: str = "derived") -> float:
    """ln 2 - alpha/(alpha-1) ln chi, alpha in (0,1)."""
    c = werner_chi_derived(alpha, eps) if chi == "derived" else werner_chi_printed(alpha, eps)
    return LN2 - alpha / (alpha - 1) * math.log(c)


def werner_tsallis(q: float, eps: float) -> float:
    """Tsallis reality of the Werner state, q in (0,1) or (1,2].

    Dividing the power terms by (1+eps)^(q-1) leaves coefficients
    (1-eps), -2(1+eps), (1+3eps) that sum to zero, so each power is replaced
    by its expm1 excess for precision near q = 1.
    """
    beta = q - 1
    bracket = 0.0
    for w, r in ((1 - eps, (1 - eps) / (1 + eps)), (1 + 3 * eps, (1 + 3 * eps) / (1 + eps))):
        if w > 0:
            bracket += w * math.expm1(beta * math.log(r))
    return ln_q(2.0, q) - bracket / (4 * beta * 2.0 ** beta)


def werner_min_rel(eps: float) -> float:
    """alpha -> 0 member: ln 2 while rho_eps is full rank, 0 at eps = 1."""
    return 0.0 if eps >= 1.0 else LN2


def werner_max_rel(eps: float) -> float:
    """alpha -> inf member."""
    return LN2 - math.log((1 + 3 * eps) / (1 + eps))
