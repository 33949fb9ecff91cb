"""Measurement channels and their unitary dilation.

``observables`` arguments accept either one ProjectiveObservable or a
sequence of them acting on distinct subsystems; a sequence is applied as the
product of the individual dephasing maps (used for copies of a state).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import kernels
from .errors import CannotDiscardObservableSubsystem, EpsilonOutOfRange, LayoutMismatch
from .qstate import (
    DensityOperator,
    Ensemble,
    ProjectiveObservable,
    SubsystemLayout,
    as_layout,
    embed,
    partial_trace,
)

Observables = Union[ProjectiveObservable, Sequence[ProjectiveObservable]]


def as_observables(obs: Observables) -> tuple[ProjectiveObservable, ...]:
    if isinstance(obs, ProjectiveObservable):
        return (obs,)
    obs = tuple(obs)
    if len({o.subsystem for o in obs}) != len(obs):
        raise LayoutMismatch("observables in a product must act on distinct subsystems")
    return obs


def measured_dim(obs: Observables) -> int:
    """Product of the dimensions of the measured subsystems."""
    return math.prod(o.dim for o in as_observables(obs))


def _check_fit(layout: SubsystemLayout, obs: ProjectiveObservable):
    if obs.subsystem >= len(layout.dims) or layout.dims[obs.subsystem] != obs.dim:
        raise LayoutMismatch(f"observable of dimension {obs.dim} on subsystem {obs.subsystem} "
                             f"does not fit layout {layout.dims}")


def dephase(matrix, dims, obs: Observables) -> np.ndarray:
    """Sum_i (A_i x 1) M (A_i x 1) on a bare matrix; linear in M."""
    layout = as_layout(dims)
    m = np.asarray(matrix, dtype=complex)
    for o in as_observables(obs):
        _check_fit(layout, o)
        u = embed(o.basis, layout, o.subsystem)
        rotated = u.conj().T @ m @ u
        rotated = kernels.pinch(rotated, layout.stride(o.subsystem), o.dim)
        m = u @ rotated @ u.conj().T
    return m


def phi_A(rho: DensityOperator, obs: Observables) -> DensityOperator:
    """Unrevealed projective measurement of ``obs``."""
    m = dephase(rho.matrix, rho.layout, obs)
    return DensityOperator._trusted(0.5 * (m + m.conj().T), rho.layout)


def monitoring(rho: DensityOperator, obs: Observables, eps: float) -> DensityOperator:
    """(1 - eps) rho + eps Phi_A(rho)."""
    if not 0.0 <= eps <= 1.0:
        raise EpsilonOutOfRange(f"monitoring strength {eps} outside [0, 1]")
    m = (1 - eps) * rho.matrix + eps * phi_A(rho, obs).matrix
    return DensityOperator._trusted(m, rho.layout)


def shift_operator(d: int, k: int = 1) -> np.ndarray:
    """k-th power of the cyclic shift T|e_i> = |e_{i+1 mod d}>."""
    t = np.roll(np.eye(d), 1, axis=0)
    return np.linalg.matrix_power(t, k % d) if d > 1 else np.eye(1)


@dataclass(frozen=True, eq=False)
class DilationUnitary:
    """U = sum_k P_k (x) T_k on system (x) environment, with d_E = d_A."""

    matrix: np.ndarray
    observable: ProjectiveObservable
    layout: SubsystemLayout

    @property
    def env_dim(self) -> int:
        return self.observable.dim

    @property
    def joint_layout(self) -> SubsystemLayout:
        return self.layout.appended(self.env_dim)


def stinespring_unitary(obs: ProjectiveObservable, dims) -> DilationUnitary:
    """Unitary whose action on rho (x) |e0><e0| followed by Tr_E realises Phi_A."""
    layout = as_layout(dims)
    _check_fit(layout, obs)
    d_e = obs.dim
    u = sum(np.kron(embed(p, layout, obs.subsystem), shift_operator(d_e, k))
            for k, p in enumerate(obs.projectors))
    u = np.asarray(u, dtype=complex)
    u.setflags(write=False)
    return DilationUnitary(u, obs, layout)


def env_ground(d_e: int) -> np.ndarray:
    e0 = np.zeros((d_e, d_e), dtype=complex)
    e0[0, 0] = 1.0
    return e0


def dilate(rho: DensityOperator, unitary: DilationUnitary) -> DensityOperator:
    """U (rho (x) |e0><e0|) U^dagger on system (x) environment."""
    if rho.layout != unitary.layout:
        raise LayoutMismatch(f"state layout {rho.dims} does not match dilation layout {unitary.layout.dims}")
    u = unitary.matrix
    joint = np.kron(rho.matrix, env_ground(unitary.env_dim))
    m = u @ joint @ u.conj().T
    return DensityOperator._trusted(0.5 * (m + m.conj().T), unitary.joint_layout)


def trace_environment(upsilon: DensityOperator) -> DensityOperator:
    """Trace out the last layout slot."""
    return partial_trace(upsilon, keep=range(len(upsilon.dims) - 1))


def flag(ens: Ensemble) -> DensityOperator:
    """sum_i p_i rho_i (x) |i><i| with the flag appended as the last subsystem."""
    n = len(ens.states)
    m = np.zeros((ens.states[0].dim * n,) * 2, dtype=complex)
    for i, (p, s) in enumerate(zip(ens.weights, ens.states)):
        x = np.zeros((n, n))
        x[i, i] = 1.0
        m += p * np.kron(s.matrix, x)
    return DensityOperator._trusted(m, ens.states[0].layout.appended(n))


def attach(rho: DensityOperator, omega: DensityOperator) -> DensityOperator:
    """rho (x) omega with the layouts concatenated."""
    return DensityOperator._trusted(np.kron(rho.matrix, omega.matrix), rho.dims + omega.dims)


def discard(rho: DensityOperator, subsystem: int, observable: Observables | None = None):
    """Trace out one subsystem.

    With ``observable`` given, refuses to discard a measured subsystem and
    returns ``(state, observable_reindexed)``.
    """
    layout = rho.layout
    layout._check_index(subsystem)
    if len(layout.dims) == 1:
        raise LayoutMismatch("cannot discard the only subsystem")
    keep = [k for k in range(len(layout.dims)) if k != subsystem]
    out = partial_trace(rho, keep=keep)
    if observable is None:
        return out
    moved = []
    for o in as_observables(observable):
        if o.subsystem == subsystem:
            raise CannotDiscardObservableSubsystem(f"subsystem {subsystem} carries the observable")
        moved.append(o if o.subsystem < subsystem else o.on_subsystem(o.subsystem - 1))
    return out, (moved[0] if isinstance(observable, ProjectiveObservable) else tuple(moved))


def copies(rho: DensityOperator, obs: ProjectiveObservable, n: int = 2):
    """rho^{(x) n} together with the observable acting on every copy."""
    state = rho
    for _ in range(n - 1):
        state = attach(state, rho)
    width = len(rho.dims)
    return state, tuple(obs.on_subsystem(obs.subsystem + c * width) for c in range(n))
