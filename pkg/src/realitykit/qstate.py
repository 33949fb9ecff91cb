"""Dense Hermitian linear algebra, states, observables and seeded sampling.

Everything here works on small dense matrices (total dimension up to about
64). Density operators and observables are immutable; their arrays are
marked read-only at construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Sequence

import numpy as np
from scipy.stats import unitary_group

from . import kernels
from .errors import (
    BadRank,
    DomainError,
    InvalidObservable,
    LayoutMismatch,
    NotHermitian,
    NotNormalized,
    NotPositive,
)

HERMITIAN_TOL = 1e-12
PSD_CLIP = 1e-10
SUPPORT_CUTOFF = 1e-10
TRACE_TOL = 1e-10
PROJECTOR_TOL = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _check_square(m):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LayoutMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def _as_matrix(m):
    return getattr(m, "matrix", m)


def hermiticity_error(m):
    m = _check_square(_as_matrix(m))
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _require_hermitian(m, tol=HERMITIAN_TOL):
    m = _check_square(_as_matrix(m))
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    err = hermiticity_error(m)
    if err > tol * scale:
        raise NotHermitian(f"max |M - M^dagger| = {err:.3e} exceeds {tol * scale:.1e}")
    return m


# ---------------------------------------------------------------------------
# Layouts, states, observables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered tensor-factor dimensions of a composite Hilbert space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise LayoutMismatch(f"invalid subsystem dimensions {self.dims!r}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def __len__(self):
        return len(self.dims)

    def stride(self, k: int) -> int:
        """Index stride of subsystem ``k`` in the row-major product basis."""
        self._check_index(k)
        return math.prod(self.dims[k + 1:])

    def without(self, k: int) -> "SubsystemLayout":
        self._check_index(k)
        return SubsystemLayout(self.dims[:k] + self.dims[k + 1:])

    def appended(self, *dims: int) -> "SubsystemLayout":
        return SubsystemLayout(self.dims + tuple(dims))

    def _check_index(self, k):
        if not 0 <= k < len(self.dims):
            raise LayoutMismatch(f"subsystem {k} not in layout {self.dims}")


def as_layout(dims) -> SubsystemLayout:
    if isinstance(dims, SubsystemLayout):
        return dims
    if isinstance(dims, (int, np.integer)):
        return SubsystemLayout((int(dims),))
    return SubsystemLayout(tuple(dims))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Unit-trace positive semidefinite operator on a tensor-product space.

    Construction validates Hermiticity, clips eigenvalues in ``[-1e-10, 0)``
    to zero and renormalises the trace.
    """

    matrix: np.ndarray
    layout: SubsystemLayout

    def __init__(self, matrix, dims=None):
        m = _require_hermitian(np.asarray(matrix, dtype=complex))
        layout = as_layout(dims if dims is not None else (m.shape[0],))
        if layout.total != m.shape[0]:
            raise LayoutMismatch(f"layout {layout.dims} does not match dimension {m.shape[0]}")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise NotNormalized(f"trace {tr!r} differs from 1")
        w = np.linalg.eigvalsh(m)
        if w[0] < -PSD_CLIP:
            raise NotPositive(f"eigenvalue {w[0]:.3e} below -{PSD_CLIP}")
        if w[0] < 0:
            vals, vecs = np.linalg.eigh(m)
            vals = np.clip(vals, 0.0, None)
            m = (vecs * vals) @ vecs.conj().T
            tr = float(np.trace(m).real)
        if tr != 1.0:
            m = m / tr
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "layout", layout)

    @classmethod
    def _trusted(cls, matrix, layout):
        # Skips validation; callers guarantee a valid density matrix.
        obj = object.__new__(cls)
        object.__setattr__(obj, "matrix", _frozen(matrix))
        object.__setattr__(obj, "layout", as_layout(layout))
        return obj

    @classmethod
    def from_ket(cls, psi, dims=None) -> "DensityOperator":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), dims if dims is not None else (psi.size,))

    @property
    def dims(self) -> tuple[int, ...]:
        return self.layout.dims

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def with_layout(self, dims) -> "DensityOperator":
        layout = as_layout(dims)
        if layout.total != self.dim:
            raise LayoutMismatch(f"layout {layout.dims} does not match dimension {self.dim}")
        return DensityOperator._trusted(self.matrix, layout)

    def __repr__(self):
        return f"DensityOperator(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class ProjectiveObservable:
    """Nondegenerate observable given by rank-1 orthogonal projectors on one subsystem."""

    subsystem: int
    projectors: tuple[np.ndarray, ...]
    eigenvalues: tuple[float, ...] | None = None

    def __post_init__(self):
        projs = tuple(_frozen(p) for p in self.projectors)
        if not projs:
            raise InvalidObservable("an observable needs at least one projector")
        d = projs[0].shape[0]
        if len(projs) != d or any(p.shape != (d, d) for p in projs):
            raise InvalidObservable(f"need {d} projectors of shape ({d}, {d})")
        eye = np.eye(d)
        if np.max(np.abs(sum(projs) - eye)) > PROJECTOR_TOL:
            raise InvalidObservable("projectors do not sum to the identity")
        for i, p in enumerate(projs):
            if hermiticity_error(p) > PROJECTOR_TOL:
                raise InvalidObservable(f"projector {i} is not Hermitian")
            if abs(np.trace(p).real - 1.0) > PROJECTOR_TOL:
                raise InvalidObservable(f"projector {i} is not rank 1")
            for j, q in enumerate(projs):
                target = p if i == j else 0.0
                if np.max(np.abs(p @ q - target)) > PROJECTOR_TOL:
                    raise InvalidObservable(f"projectors {i}, {j} violate A_i A_j = delta_ij A_i")
        if self.eigenvalues is not None:
            ev = tuple(float(x) for x in self.eigenvalues)
            if len(ev) != d:
                raise InvalidObservable("one eigenvalue per projector is required")
            if len(set(ev)) != d:
                raise InvalidObservable("degenerate observables are not supported")
            object.__setattr__(self, "eigenvalues", ev)
        if self.subsystem < 0:
            raise InvalidObservable("subsystem index must be non-negative")
        object.__setattr__(self, "projectors", projs)
        # Columns are the eigenvectors |a_i>; fixed phase taken from each projector.
        basis = np.empty((d, d), dtype=complex)
        for i, p in enumerate(projs):
            k = int(np.argmax(np.abs(p).sum(axis=0)))
            col = p[:, k]
            basis[:, i] = col / np.linalg.norm(col)
        object.__setattr__(self, "_basis", _frozen(basis))

    @classmethod
    def from_basis(cls, basis, subsystem=0, eigenvalues=None) -> "ProjectiveObservable":
        """Observable whose eigenvectors are the columns of a unitary ``basis``."""
        u = np.asarray(basis, dtype=complex)
        projs = tuple(np.outer(u[:, i], u[:, i].conj()) for i in range(u.shape[1]))
        return cls(subsystem, projs, eigenvalues)

    @classmethod
    def from_hermitian(cls, h, subsystem=0) -> "ProjectiveObservable":
        vals, vecs = eig_hermitian(h)
        return cls.from_basis(vecs, subsystem, tuple(vals))

    @classmethod
    def spin(cls, theta, phi, subsystem=0) -> "ProjectiveObservable":
        plus, minus = spin_projectors(theta, phi)
        return cls(subsystem, (plus, minus), (1.0, -1.0))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def basis(self) -> np.ndarray:
        return self._basis

    def on_subsystem(self, k: int) -> "ProjectiveObservable":
        return ProjectiveObservable(k, self.projectors, self.eigenvalues)

    def matrix(self) -> np.ndarray:
        ev = self.eigenvalues or tuple(range(self.dim))
        return sum(a * p for a, p in zip(ev, self.projectors))

    def __repr__(self):
        return f"ProjectiveObservable(subsystem={self.subsystem}, dim={self.dim})"


@dataclass(frozen=True)
class Ensemble:
    """Weighted collection of states sharing one layout."""

    weights: tuple[float, ...]
    states: tuple[DensityOperator, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        states = tuple(self.states)
        if len(w) != len(states) or not states:
            raise LayoutMismatch("weights and states must be non-empty and of equal length")
        if any(x < 0 for x in w) or abs(sum(w) - 1.0) > 1e-12:
            raise NotNormalized(f"weights {w} are not a probability vector")
        if any(s.dims != states[0].dims for s in states):
            raise LayoutMismatch("ensemble members must share one layout")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", states)

    def mixture(self) -> DensityOperator:
        m = sum(p * s.matrix for p, s in zip(self.weights, self.states))
        return DensityOperator(m, self.states[0].layout)


# ---------------------------------------------------------------------------
# Spectral calculus
# ---------------------------------------------------------------------------


def eig_hermitian(m):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.

    Returns ``(vals, vecs)`` with ``m = vecs @ diag(vals) @ vecs^dagger``.
    """
    m = _require_hermitian(m)
    vals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def _clipped_spectrum(m):
    vals, vecs = eig_hermitian(m)
    vals = np.where((vals < 0) & (vals >= -PSD_CLIP), 0.0, vals)
    return vals, vecs


def _zero_mask(vals):
    top = float(np.max(np.abs(vals))) if vals.size else 0.0
    return np.abs(vals) <= SUPPORT_CUTOFF * top


def matrix_function(m, f: Callable, *, at_zero=None):
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Eigenvalues in ``[-1e-10, 0)`` are clipped to 0. When ``at_zero`` is
    given, eigenvalues at or below the support cutoff (relative to the largest
    one) are mapped to ``at_zero`` instead of being passed to ``f``.
    """
    vals, vecs = _clipped_spectrum(_as_matrix(m))
    if at_zero is None:
        zero = np.zeros(vals.shape, dtype=bool)
    else:
        zero = _zero_mask(vals)
    fv = np.empty(vals.shape, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        try:
            fv[~zero] = [f(float(x)) for x in vals[~zero]]
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"function undefined on the spectrum {vals}: {exc}") from exc
    fv[zero] = at_zero if at_zero is not None else 0.0
    if not np.all(np.isfinite(fv)):
        bad = vals[~np.isfinite(fv)]
        raise DomainError(f"function undefined at eigenvalue(s) {bad}")
    if np.all(fv.imag == 0):
        fv = fv.real
    return (vecs * fv) @ vecs.conj().T


def matrix_power(m, exponent: float):
    """Spectral power with 0**x := 0; negative exponents act as a pseudo-inverse on the support."""
    vals, vecs = _clipped_spectrum(_as_matrix(m))
    zero = _zero_mask(vals)
    if np.any(vals[~zero] < 0):
        raise DomainError("matrix_power needs a positive semidefinite argument")
    fv = np.zeros_like(vals)
    fv[~zero] = vals[~zero] ** exponent
    if exponent == 0:
        fv[~zero] = 1.0
    return (vecs * fv) @ vecs.conj().T


def xlogx(m):
    """``rho ln rho`` with 0 ln 0 := 0."""
    return matrix_function(m, lambda x: x * math.log(x), at_zero=0.0)


def support_projector(m):
    """Projector onto eigenvectors whose eigenvalue exceeds the relative support cutoff."""
    vals, vecs = _clipped_spectrum(_as_matrix(m))
    keep = ~_zero_mask(vals) & (vals > 0)
    v = vecs[:, keep]
    return v @ v.conj().T


def operator_norm(m) -> float:
    """Largest eigenvalue magnitude of a Hermitian matrix."""
    vals, _ = eig_hermitian(_as_matrix(m))
    return float(np.max(np.abs(vals)))


def kron(*ops):
    """Tensor product of two or more matrices (density operators keep their layouts)."""
    if len(ops) == 1 and isinstance(ops[0], (list, tuple)):
        ops = tuple(ops[0])
    if all(isinstance(o, DensityOperator) for o in ops):
        m = reduce(np.kron, [o.matrix for o in ops])
        dims = sum((o.dims for o in ops), ())
        return DensityOperator._trusted(m, dims)
    return reduce(np.kron, [np.asarray(_as_matrix(o)) for o in ops])


def partial_trace(m, dims=None, keep=None):
    """Trace out every subsystem not listed in ``keep``.

    ``m`` may be a DensityOperator (its layout is used and a DensityOperator
    is returned) or a square array with explicit ``dims``.
    """
    is_state = isinstance(m, DensityOperator)
    if is_state:
        layout = m.layout if dims is None else as_layout(dims)
        mat = m.matrix
    else:
        if dims is None:
            raise LayoutMismatch("dims are required for a bare matrix")
        layout = as_layout(dims)
        mat = _check_square(m)
    if layout.total != mat.shape[0]:
        raise LayoutMismatch(f"layout {layout.dims} does not match dimension {mat.shape[0]}")
    if keep is None:
        raise LayoutMismatch("keep must list the subsystems to retain")
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = tuple(sorted(set(int(k) for k in keep)))
    for k in keep:
        layout._check_index(k)
    cur_dims = list(layout.dims)
    cur = np.asarray(mat, dtype=complex)
    # Trace from the right so earlier indices stay valid.
    for k in reversed(range(len(layout.dims))):
        if k in keep:
            continue
        left = math.prod(cur_dims[:k])
        right = math.prod(cur_dims[k + 1:])
        cur = kernels.trace_middle(cur, left, cur_dims[k], right)
        del cur_dims[k]
    if is_state:
        return DensityOperator._trusted(0.5 * (cur + cur.conj().T), tuple(cur_dims) or (1,))
    return cur


def embed(op, dims, k):
    """Lift a local operator on subsystem ``k`` to the full space."""
    layout = as_layout(dims)
    layout._check_index(k)
    op = np.asarray(op, dtype=complex)
    if op.shape != (layout.dims[k],) * 2:
        raise LayoutMismatch(f"operator of shape {op.shape} does not fit subsystem {k} of {layout.dims}")
    left = np.eye(math.prod(layout.dims[:k]))
    right = np.eye(math.prod(layout.dims[k + 1:]))
    return np.kron(np.kron(left, op), right)


def trace_distance(a, b) -> float:
    vals = np.linalg.eigvalsh(_as_matrix(a) - _as_matrix(b))
    return 0.5 * float(np.sum(np.abs(vals)))


# ---------------------------------------------------------------------------
# Named states and observables
# ---------------------------------------------------------------------------


def spin_projectors(theta: float, phi: float):
    """Projectors (1 +/- u.sigma)/2 with u = (cos t sin p, sin t sin p, cos p)."""
    u = (math.cos(theta) * math.sin(phi), math.sin(theta) * math.sin(phi), math.cos(phi))
    us = u[0] * SIGMA_X + u[1] * SIGMA_Y + u[2] * SIGMA_Z
    eye = np.eye(2)
    return 0.5 * (eye + us), 0.5 * (eye - us)


def computational_observable(d, subsystem=0) -> ProjectiveObservable:
    return ProjectiveObservable.from_basis(np.eye(d), subsystem, tuple(range(d)))


def fourier_observable(d, subsystem=0) -> ProjectiveObservable:
    """Observable diagonal in the discrete Fourier basis (unbiased to the computational basis)."""
    j = np.arange(d)
    f = np.exp(2j * np.pi * np.outer(j, j) / d) / math.sqrt(d)
    return ProjectiveObservable.from_basis(f, subsystem, tuple(range(d)))


def maximally_mixed(dims) -> DensityOperator:
    layout = as_layout(dims)
    return DensityOperator._trusted(np.eye(layout.total) / layout.total, layout)


def singlet() -> DensityOperator:
    psi = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
    return DensityOperator.from_ket(psi, (2, 2))


def bell_phi_plus() -> DensityOperator:
    psi = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    return DensityOperator.from_ket(psi, (2, 2))


def werner_state(eps: float) -> DensityOperator:
    """(1 - eps) 1/4 + eps psi_s on two qubits."""
    m = (1 - eps) * np.eye(4) / 4 + eps * singlet().matrix
    return DensityOperator(m, (2, 2))


def mu_state(mu: float) -> DensityOperator:
    """1/4 + mu/4 (XX - YY) + (2 mu - 1)/4 ZZ on two qubits."""
    m = (np.eye(4) + mu * (np.kron(SIGMA_X, SIGMA_X) - np.kron(SIGMA_Y, SIGMA_Y))
         + (2 * mu - 1) * np.kron(SIGMA_Z, SIGMA_Z)) / 4
    return DensityOperator(m, (2, 2))


# ---------------------------------------------------------------------------
# Seeded sampling
# ---------------------------------------------------------------------------


def _rng(seed):
    return np.random.default_rng(seed)


def random_density(dim, rank=None, seed=None, dims=None) -> DensityOperator:
    """Induced-measure random state G G^dagger / Tr with a dim x rank Ginibre G.

    The same ``(seed, dim, rank)`` always yields the same matrix.
    """
    layout = as_layout(dims if dims is not None else dim)
    if layout.total != dim:
        raise LayoutMismatch(f"layout {layout.dims} does not match dimension {dim}")
    rank = dim if rank is None else int(rank)
    if not 1 <= rank <= dim:
        raise BadRank(f"rank {rank} outside [1, {dim}]")
    rng = _rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityOperator._trusted(m / np.trace(m).real, layout)


def haar_pure(dim, seed=None, dims=None) -> DensityOperator:
    return random_density(dim, 1, seed, dims)


def random_unitary(dim, seed=None) -> np.ndarray:
    """Haar-random unitary."""
    if dim == 1:
        return np.ones((1, 1), dtype=complex)
    return unitary_group.rvs(dim, random_state=_rng(seed))


def random_observable(d, subsystem=0, seed=None) -> ProjectiveObservable:
    """Observable with a Haar-random eigenbasis."""
    return ProjectiveObservable.from_basis(random_unitary(d, seed), subsystem, tuple(range(d)))


def random_mub_pair(d, subsystem=0, seed=None):
    """Two observables with mutually unbiased eigenbases, randomly rotated together."""
    u = random_unitary(d, seed)
    x = ProjectiveObservable.from_basis(u, subsystem, tuple(range(d)))
    j = np.arange(d)
    f = np.exp(2j * np.pi * np.outer(j, j) / d) / math.sqrt(d)
    y = ProjectiveObservable.from_basis(u @ f, subsystem, tuple(range(d)))
    return x, y


def classical_quantum_state(weights, conditionals: Sequence[DensityOperator],
                            observable: ProjectiveObservable) -> DensityOperator:
    """sum_i p_i A_i (x) rho_{B|i} with A on the first subsystem."""
    if observable.subsystem != 0:
        raise LayoutMismatch("classical_quantum_state places the observable on subsystem 0")
    m = sum(p * np.kron(a, c.matrix) for p, a, c in zip(weights, observable.projectors, conditionals))
    dims = (observable.dim,) + conditionals[0].dims
    return DensityOperator(m, dims)
