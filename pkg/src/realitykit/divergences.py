"""Entropies, relative entropies and conditional-information functionals.

Every quantity is in nats and uses the trace-normalised convention, so
``divergence(c*rho, c*sigma)`` equals ``divergence(rho, sigma)``.

Petz-Renyi and Tsallis values are computed from the two spectra and the
overlap weights ``w_ij = |<r_i|s_j>|**2``. The difference
``Tr(rho^a sigma^(1-a)) - Tr(rho)`` is accumulated with ``expm1`` so that
parameters close to 1 do not lose digits to cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .channels import Observables, as_observables, phi_A
from .errors import AlphaOutOfRange, DomainError, KernelViolation, LayoutMismatch, QOutOfRange
from .optimize import density_to_params, minimize_restarted, params_to_density
from .qstate import (
    PSD_CLIP,
    SUPPORT_CUTOFF,
    DensityOperator,
    ProjectiveObservable,
    as_layout,
    eig_hermitian,
    matrix_power,
    partial_trace,
)

LIMIT_TOL = 1e-6
KERNEL_TOL = 1e-10
# relative singular-value floor, about 1e3 above double-precision SVD noise
SV_FLOOR = 1e-13

FAMILIES = ("vonNeumann", "renyi", "sandwiched", "minRel", "maxRel", "collision", "tsallis")
_ALIASES = {
    "vn": "vonNeumann", "vonneumann": "vonNeumann", "umegaki": "vonNeumann",
    "renyi": "renyi", "petz": "renyi", "sandwiched": "sandwiched",
    "minrel": "minRel", "min": "minRel", "maxrel": "maxRel", "max": "maxRel",
    "collision": "collision", "tsallis": "tsallis",
}
_PARAMETRIC = ("renyi", "sandwiched", "tsallis")


def _canonical_family(name: str) -> str:
    try:
        return _ALIASES[name.replace("_", "").replace("-", "").lower()]
    except KeyError:
        raise ValueError(f"unknown divergence family {name!r}") from None


@dataclass(frozen=True)
class DivergenceSpec:
    """Family name plus its order parameter (alpha or q)."""

    family: str
    parameter: float | None = None

    def __post_init__(self):
        fam = _canonical_family(self.family)
        object.__setattr__(self, "family", fam)
        if fam in _PARAMETRIC:
            if self.parameter is None:
                raise ValueError(f"{fam} needs a parameter")
            p = float(self.parameter)
            if not (p > 0) or math.isnan(p):
                err = QOutOfRange if fam == "tsallis" else AlphaOutOfRange
                raise err(f"{fam} parameter {p} must be positive")
            object.__setattr__(self, "parameter", p)
        else:
            object.__setattr__(self, "parameter", None)

    @classmethod
    def vn(cls):
        return cls("vonNeumann")

    @classmethod
    def renyi(cls, alpha):
        return cls("renyi", alpha)

    @classmethod
    def sandwiched(cls, alpha):
        return cls("sandwiched", alpha)

    @classmethod
    def min_rel(cls):
        return cls("minRel")

    @classmethod
    def max_rel(cls):
        return cls("maxRel")

    @classmethod
    def collision(cls):
        return cls("collision")

    @classmethod
    def tsallis(cls, q):
        return cls("tsallis", q)

    @property
    def effective(self) -> tuple[str, float | None]:
        """(family, parameter) after collision expansion and limit routing."""
        if self.family == "collision":
            return "sandwiched", 2.0
        if self.family in _PARAMETRIC and abs(self.parameter - 1.0) < LIMIT_TOL:
            return "vonNeumann", None
        return self.family, self.parameter

    @property
    def label(self) -> str:
        return self.family if self.parameter is None else f"{self.family}({self.parameter:g})"


def as_spec(spec) -> DivergenceSpec:
    if isinstance(spec, DivergenceSpec):
        return spec
    if isinstance(spec, str):
        return DivergenceSpec(spec)
    family, parameter = spec
    return DivergenceSpec(family, parameter)


# ---------------------------------------------------------------------------
# Divergence property table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = False

    def __contains__(self, x) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def __str__(self):
        hi = "inf" if math.isinf(self.hi) else f"{self.hi:g}"
        return f"{'[' if self.lo_closed else '('}{self.lo:g},{hi}{']' if self.hi_closed else ')'}"


@dataclass(frozen=True)
class ParameterSet:
    """Union of intervals, or the trivial always/never sets for unparametrised families."""

    intervals: tuple[Interval, ...] = ()
    always: bool = False

    def contains(self, x) -> bool:
        if self.always:
            return True
        if x is None:
            return False
        return any(x in iv for iv in self.intervals)

    __contains__ = contains

    @property
    def empty(self) -> bool:
        return not self.always and not self.intervals

    def __str__(self):
        if self.always:
            return "all"
        if not self.intervals:
            return "none"
        return "∪".join(str(iv) for iv in self.intervals)


ALL = ParameterSet(always=True)
NONE = ParameterSet()
OPEN_UNIT = ParameterSet((Interval(0, 1),))
POSITIVE = ParameterSet((Interval(0, 1), Interval(1, math.inf)))
HALF_TO_ONE = ParameterSet((Interval(0.5, 1, lo_closed=True),))
PETZ_DPI = ParameterSet((Interval(0, 1), Interval(1, 2, hi_closed=True)))
SANDWICHED_DPI = ParameterSet((Interval(0.5, 1, lo_closed=True), Interval(1, math.inf)))

PROPERTIES = ("continuity", "positiveDefiniteness", "unitaryInvariance", "additivity",
              "jointConvexity", "DPI")
TABLE_FAMILIES = ("vonNeumann", "renyi", "minRel", "sandwiched", "maxRel", "tsallis")


@dataclass(frozen=True)
class PropertyRange:
    property: str
    family: str
    valid: ParameterSet

    def holds(self, parameter=None) -> bool:
        return self.valid.contains(parameter)


def _row(vn, renyi, min_, sand, max_, ts):
    return dict(zip(TABLE_FAMILIES, (vn, renyi, min_, sand, max_, ts)))


# Tsallis additivity is replaced by pseudo-additivity.
TABLE_I: dict[str, dict[str, ParameterSet]] = {
    "continuity": _row(ALL, POSITIVE, NONE, POSITIVE, NONE, POSITIVE),
    "positiveDefiniteness": _row(ALL, POSITIVE, NONE, POSITIVE, ALL, POSITIVE),
    "unitaryInvariance": _row(ALL, POSITIVE, ALL, POSITIVE, ALL, POSITIVE),
    "additivity": _row(ALL, POSITIVE, ALL, POSITIVE, ALL, NONE),
    "jointConvexity": _row(ALL, OPEN_UNIT, ALL, HALF_TO_ONE, NONE, PETZ_DPI),
    "DPI": _row(ALL, PETZ_DPI, ALL, SANDWICHED_DPI, ALL, PETZ_DPI),
}


def property_range(prop: str, family: str) -> PropertyRange:
    family = _canonical_family(family)
    if family == "collision":
        valid = ALL if TABLE_I[prop]["sandwiched"].contains(2.0) else NONE
        return PropertyRange(prop, family, valid)
    return PropertyRange(prop, family, TABLE_I[prop][family])


def property_holds(prop: str, spec) -> bool:
    spec = as_spec(spec)
    return property_range(prop, spec.family).holds(spec.parameter)


# ---------------------------------------------------------------------------
# Spectral data
# ---------------------------------------------------------------------------


def _as_array(x) -> np.ndarray:
    if isinstance(x, DensityOperator):
        return x.matrix
    if isinstance(x, Spectrum):
        return x.matrix
    return np.asarray(x, dtype=complex)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Clipped eigen-decomposition of a positive semidefinite operator.

    ``support`` marks eigenvalues above the relative cutoff; ``log`` is
    ``-inf`` off the support.
    """

    matrix: np.ndarray
    vals: np.ndarray
    vecs: np.ndarray
    support: np.ndarray
    log: np.ndarray
    trace: float = field(default=0.0)

    @classmethod
    def of(cls, m) -> "Spectrum":
        if isinstance(m, Spectrum):
            return m
        mat = _as_array(m)
        vals, vecs = eig_hermitian(mat)
        if vals.size and vals[-1] < -PSD_CLIP * max(1.0, float(vals[0])):
            raise DomainError(f"operator has a negative eigenvalue {vals[-1]:.3e}")
        vals = np.clip(vals, 0.0, None)
        top = float(vals[0]) if vals.size else 0.0
        support = vals > SUPPORT_CUTOFF * top
        log = np.full(vals.shape, -np.inf)
        log[support] = np.log(vals[support])
        return cls(mat, vals, vecs, support, log, float(vals.sum()))

    def power(self, exponent: float) -> np.ndarray:
        """Spectral power on the support (0 elsewhere)."""
        fv = np.zeros_like(self.vals)
        fv[self.support] = np.exp(exponent * self.log[self.support])
        return (self.vecs * fv) @ self.vecs.conj().T

    @property
    def projector(self) -> np.ndarray:
        v = self.vecs[:, self.support]
        return v @ v.conj().T


def _overlaps(rs: Spectrum, ss: Spectrum) -> np.ndarray:
    vr = rs.vecs[:, rs.support]
    return np.abs(vr.conj().T @ ss.vecs) ** 2


def _kernel_leak(rs: Spectrum, ss: Spectrum, w: np.ndarray) -> float:
    null = ~ss.support
    if not np.any(null):
        return 0.0
    return float(rs.vals[rs.support] @ w[:, null].sum(axis=1))


def _kernel_ok(rs, ss, w) -> bool:
    return _kernel_leak(rs, ss, w) <= KERNEL_TOL * rs.trace


def _infinite(strict: bool, what: str) -> float:
    if strict:
        raise KernelViolation(f"{what}: ker sigma is not contained in ker rho")
    return math.inf


# ---------------------------------------------------------------------------
# Entropies
# ---------------------------------------------------------------------------


def _entropy_kind(kind):
    if isinstance(kind, DivergenceSpec):
        return kind
    if isinstance(kind, str):
        return DivergenceSpec(kind)
    return DivergenceSpec(*kind)


def entropy(rho, kind="vN") -> float:
    """von Neumann, Renyi or Tsallis entropy in nats.

    ``kind`` is ``"vN"``, ``("renyi", alpha)``, ``("tsallis", q)`` or a
    :class:`DivergenceSpec` of one of those families.
    """
    spec = _entropy_kind(kind)
    family, p = spec.effective
    s = Spectrum.of(rho)
    r = s.vals[s.support]
    lr = s.log[s.support]
    tr = s.trace
    if family == "vonNeumann":
        return float(-(r @ lr) / tr)
    # sum r^p - sum r, accumulated without cancellation near p = 1
    delta = float(r @ np.expm1((p - 1.0) * lr))
    if family == "renyi":
        return -math.log1p(delta / tr) / (p - 1.0)
    if family == "tsallis":
        return delta / ((1.0 - p) * tr)
    raise ValueError(f"entropy is not defined for family {spec.family}")


def ln_q(x: float, q: float) -> float:
    """q-logarithm (x^(1-q) - 1)/(1 - q), equal to ln x at q = 1."""
    if abs(q - 1.0) < LIMIT_TOL:
        return math.log(x)
    return math.expm1((1.0 - q) * math.log(x)) / (1.0 - q)


# ---------------------------------------------------------------------------
# Divergences
# ---------------------------------------------------------------------------


def _umegaki(rs, ss, strict):
    w = _overlaps(rs, ss)
    if not _kernel_ok(rs, ss, w):
        return _infinite(strict, "relative entropy")
    r = rs.vals[rs.support]
    return kernels.log_ratio_sum(r, rs.log[rs.support], ss.log, w) / rs.trace


def _petz_delta(rs, ss, beta, w):
    """Tr(rho^(1-beta) sigma^beta) - Tr(rho)."""
    r = rs.vals[rs.support]
    return kernels.expm1_overlap_sum(r, rs.log[rs.support], ss.log, w, beta)


def _petz(rs, ss, alpha, strict):
    w = _overlaps(rs, ss)
    if alpha > 1 and not _kernel_ok(rs, ss, w):
        return _infinite(strict, f"Renyi divergence at alpha={alpha}")
    ratio = _petz_delta(rs, ss, 1.0 - alpha, w) / rs.trace
    if ratio <= -1.0:
        return _infinite(strict, f"Renyi divergence at alpha={alpha} (orthogonal supports)")
    return math.log1p(ratio) / (alpha - 1.0)


def _tsallis(rs, ss, q, strict):
    w = _overlaps(rs, ss)
    if q > 1 and not _kernel_ok(rs, ss, w):
        return _infinite(strict, f"Tsallis divergence at q={q}")
    delta = _petz_delta(rs, ss, 1.0 - q, w)
    return -delta / ((1.0 - q) * rs.trace)


def _sandwiched(rs, ss, alpha, strict):
    if alpha > 1:
        w = _overlaps(rs, ss)
        if not _kernel_ok(rs, ss, w):
            return _infinite(strict, f"sandwiched divergence at alpha={alpha}")
    gamma = (1.0 - alpha) / (2.0 * alpha)
    side = ss.power(gamma)
    # sigma^g rho sigma^g = B B^dagger. Small genuine eigenvalues matter for
    # alpha < 1 (mu^alpha amplifies them), so only singular values at the
    # rounding floor of the SVD are treated as zero.
    b = side @ (rs.vecs[:, rs.support] * np.sqrt(rs.vals[rs.support]))
    s = np.linalg.svd(b, compute_uv=False)
    s = s[s > SV_FLOOR * max(float(s.max(initial=0.0)), 1e-300)]
    mu = s * s
    if mu.size == 0:
        return _infinite(strict, f"sandwiched divergence at alpha={alpha} (orthogonal supports)")
    # (1/(a-1)) ln(sum mu^a / Tr rho), written to keep digits near a = 1
    lm = np.log(mu)
    ratio = (float(mu @ np.expm1((alpha - 1.0) * lm)) + float(mu.sum()) - rs.trace) / rs.trace
    if ratio <= -1.0:
        return _infinite(strict, f"sandwiched divergence at alpha={alpha}")
    return math.log1p(ratio) / (alpha - 1.0)


def _min_rel(rs, ss, strict):
    val = float(np.real(np.trace(rs.projector @ ss.matrix))) / rs.trace
    if val <= 0.0:
        return _infinite(strict, "min-relative entropy (orthogonal supports)")
    return -math.log(val)


def _max_rel(rs, ss, strict):
    w = _overlaps(rs, ss)
    if not _kernel_ok(rs, ss, w):
        return _infinite(strict, "max-relative entropy")
    side = ss.power(-0.5)
    mid = side @ rs.matrix @ side
    top = float(np.linalg.eigvalsh(0.5 * (mid + mid.conj().T))[-1])
    return math.log(top)


def divergence(rho, sigma, spec="vN", strict: bool = True) -> float:
    """Relative entropy of ``rho`` with respect to ``sigma``.

    Parameters
    ----------
    rho, sigma : DensityOperator, ndarray or Spectrum
        Positive semidefinite operators of the same size. They need not have
        unit trace.
    spec : DivergenceSpec, str or (family, parameter)
    strict : bool
        When the kernel condition fails (or supports are orthogonal) raise
        :class:`KernelViolation` if True, otherwise return ``math.inf``.
    """
    spec = as_spec(spec)
    rs, ss = Spectrum.of(rho), Spectrum.of(sigma)
    if rs.matrix.shape != ss.matrix.shape:
        raise LayoutMismatch(f"shapes {rs.matrix.shape} and {ss.matrix.shape} differ")
    if rs.trace <= 0:
        raise DomainError("rho has zero trace")
    family, p = spec.effective
    if family == "vonNeumann":
        return _umegaki(rs, ss, strict)
    if family == "renyi":
        return _petz(rs, ss, p, strict)
    if family == "tsallis":
        return _tsallis(rs, ss, p, strict)
    if family == "sandwiched":
        return _sandwiched(rs, ss, p, strict)
    if family == "minRel":
        return _min_rel(rs, ss, strict)
    if family == "maxRel":
        return _max_rel(rs, ss, strict)
    raise ValueError(family)


# ---------------------------------------------------------------------------
# Conditional and mutual information
# ---------------------------------------------------------------------------


def _split_dims(rho: DensityOperator, split: int):
    dims = rho.dims
    if not 1 <= split < len(dims):
        raise LayoutMismatch(f"split {split} does not cut layout {dims} into two parts")
    return math.prod(dims[:split]), math.prod(dims[split:])


def _reduced_b(rho: DensityOperator, split: int) -> np.ndarray:
    return partial_trace(rho, keep=range(split, len(rho.dims))).matrix


def conditional_information(rho: DensityOperator, spec="vN", split: int = 1,
                            optimized: bool = False) -> float:
    """I_{A|B}, with A the first ``split`` subsystems and B the rest.

    The reference operator is ``1_A/d_A (x) rho_B``. Tsallis carries the
    extra ``d_A**(1-q)`` factor. ``optimized=True`` selects the Sibson
    (down-arrow) variant for Renyi, and the numerical probe for Tsallis.
    """
    spec = as_spec(spec)
    d_a, _ = _split_dims(rho, split)
    if optimized:
        family, p = spec.effective
        if family == "renyi":
            return math.log(d_a) + sibson_optimized_conditional(rho, p, split)
        if family == "tsallis":
            return optimized_tsallis_conditional_probe(rho, p, split).value
        if family == "vonNeumann":
            return conditional_information(rho, spec, split)
        raise ValueError(f"no optimized variant for {spec.family}")
    ref = np.kron(np.eye(d_a) / d_a, _reduced_b(rho, split))
    value = divergence(rho, ref, spec)
    family, p = spec.effective
    if family == "tsallis":
        value *= d_a ** (1.0 - p)
    return value


def sibson_optimized_conditional(rho: DensityOperator, alpha: float, split: int = 1) -> float:
    """inf over sigma_B of D_alpha(rho || 1_A (x) sigma_B), in closed form."""
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRange(f"Sibson identity used for alpha in (0,1), got {alpha}")
    dims = rho.dims
    _split_dims(rho, split)
    s = Spectrum.of(rho)
    tr_a = partial_trace(s.power(alpha), dims, keep=range(split, len(dims)))
    inner = np.trace(matrix_power(tr_a, 1.0 / alpha)).real
    return alpha / (alpha - 1.0) * math.log(inner)


@dataclass(frozen=True)
class MinimizationResult:
    value: float
    argmin: np.ndarray
    converged: bool
    restarts: int


def sibson_minimize(rho: DensityOperator, alpha: float, split: int = 1, seed=None,
                    restarts: int = 200, ftol: float = 1e-9) -> MinimizationResult:
    """Direct numerical inf over sigma_B of D_alpha(rho || 1_A (x) sigma_B).

    Independent of the closed form: sigma_B is Cholesky-parametrised and the
    divergence is evaluated through the generic spectral path. Starts from
    ``rho_B`` and from a seeded random point; keeps the better one.
    """
    d_a, d_b = _split_dims(rho, split)
    rs = Spectrum.of(rho)
    eye_a = np.eye(d_a)

    def objective(x):
        sig = np.kron(eye_a, params_to_density(x, d_b))
        return _petz(rs, Spectrum.of(sig), alpha, False)

    opts = {"restarts": restarts, "ftol": ftol, "fatol": 1e-12, "xatol": 1e-8}
    best = minimize_restarted(objective, density_to_params(_reduced_b(rho, split)), **opts)
    if not best.converged:
        rng = np.random.default_rng(seed)
        alt = minimize_restarted(objective, rng.standard_normal(d_b * d_b), **opts)
        best = min((best, alt), key=lambda o: o.fun)
    return MinimizationResult(best.fun, params_to_density(best.x, d_b), best.converged, best.restarts)


def optimized_tsallis_conditional_probe(rho: DensityOperator, q: float, split: int = 1,
                                        seed=None, restarts: int = 50) -> MinimizationResult:
    """Experimental: ln_q d_A - inf_{sigma_B} d_A^(1-q) D_q(rho || 1_A/d_A (x) sigma_B).

    No properties are claimed for this quantity; it exists for numerical
    exploration only.
    """
    d_a, d_b = _split_dims(rho, split)
    if abs(q - 1.0) < LIMIT_TOL:
        raise QOutOfRange("use the von Neumann conditional information at q = 1")
    rs = Spectrum.of(rho)
    eye_a = np.eye(d_a) / d_a

    def objective(x):
        sig = np.kron(eye_a, params_to_density(x, d_b))
        return d_a ** (1.0 - q) * _tsallis(rs, Spectrum.of(sig), q, False)

    x0 = density_to_params(_reduced_b(rho, split))
    out = minimize_restarted(objective, x0, restarts=restarts)
    return MinimizationResult(out.fun, params_to_density(out.x, d_b), out.converged, out.restarts)


def mutual_information(rho: DensityOperator, split: int = 1) -> float:
    """D(rho || rho_A (x) rho_B)."""
    _split_dims(rho, split)
    n = len(rho.dims)
    rho_a = partial_trace(rho, keep=range(split)).matrix
    rho_b = partial_trace(rho, keep=range(split, n)).matrix
    return divergence(rho, np.kron(rho_a, rho_b), "vN")


def _check_observable_in_a(obs: Observables, split: int):
    for o in as_observables(obs):
        if o.subsystem >= split:
            raise LayoutMismatch(f"observable on subsystem {o.subsystem} is not inside A (first {split})")


def discord_A(rho: DensityOperator, obs: Observables, split: int = 1) -> float:
    """Non-optimised discord I(rho) - I(Phi_A(rho))."""
    _check_observable_in_a(obs, split)
    return mutual_information(rho, split) - mutual_information(phi_A(rho, obs), split)


@dataclass(frozen=True)
class DiscordResult:
    value: float
    observable: ProjectiveObservable


def _unitary_from_params(x, d):
    h = np.zeros((d, d), dtype=complex)
    iu = np.triu_indices(d, 1)
    n = iu[0].size
    h[np.diag_indices(d)] = x[:d]
    h[iu] = x[d:d + n] + 1j * x[d + n:d + 2 * n]
    h = h + np.triu(h, 1).conj().T
    vals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(1j * vals)) @ vecs.conj().T


def one_sided_discord(rho: DensityOperator, subsystem: int = 0, split: int = 1,
                      grid: int = 64, seed=None, restarts: int = 8) -> DiscordResult:
    """min over nondegenerate observables on ``subsystem`` of discord_A.

    Qubits use a ``grid x grid`` sweep of spin directions followed by a
    simplex polish; larger dimensions use seeded random starts over a
    Hermitian-generator parametrisation of the eigenbasis.
    """
    d = rho.dims[subsystem]
    i_rho = mutual_information(rho, split)

    def d_of(o):
        return i_rho - mutual_information(phi_A(rho, o), split)

    if d == 2:
        def f(x):
            return d_of(ProjectiveObservable.spin(x[0], x[1], subsystem))

        thetas = np.linspace(0, 2 * np.pi, grid, endpoint=False)
        phis = np.linspace(0, np.pi, grid)
        best = min(((f((t, p)), (t, p)) for t in thetas for p in phis), key=lambda z: z[0])
        out = minimize_restarted(f, np.array(best[1]), restarts=20, ftol=1e-12)
        x = out.x if out.fun < best[0] else np.array(best[1])
        return DiscordResult(min(out.fun, best[0]), ProjectiveObservable.spin(x[0], x[1], subsystem))

    rng = np.random.default_rng(seed)

    def g(x):
        return d_of(ProjectiveObservable.from_basis(_unitary_from_params(x, d), subsystem))

    best_val, best_x = math.inf, None
    for k in range(restarts):
        x0 = np.zeros(d * d) if k == 0 else rng.standard_normal(d * d)
        out = minimize_restarted(g, x0, restarts=10, ftol=1e-10)
        if out.fun < best_val:
            best_val, best_x = out.fun, out.x
    return DiscordResult(best_val, ProjectiveObservable.from_basis(_unitary_from_params(best_x, d), subsystem))
