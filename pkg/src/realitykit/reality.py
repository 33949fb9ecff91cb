"""Reality quantifiers for a projective observable.

Every quantifier has the shape ``max - (distance of rho from Phi_A(rho))``
with ``max = ln d_A`` (``ln_q d_A`` for Tsallis). Monotone mode enforces the
parameter ranges on which the quantifier is a reality monotone; exploratory
mode evaluates anywhere the formula is defined and marks the result as
carrying no guarantee.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import divergences as dv
from .channels import (
    Observables,
    as_observables,
    dilate,
    measured_dim,
    phi_A,
    stinespring_unitary,
)
from .divergences import LIMIT_TOL, ParameterSet, Interval, Spectrum, divergence, entropy, ln_q
from .errors import AlphaOutOfRange, LayoutMismatch, OptimizerNonConvergence, QOutOfRange
from .optimize import density_to_params, minimize_restarted, params_to_density, softmax
from .qstate import DensityOperator, ProjectiveObservable, embed, matrix_power, partial_trace

MODES = ("monotone", "exploratory")
KINDS = ("vN", "renyiDown", "renyiUp", "renyiBar", "tsallis", "minRel", "maxRel", "sandwiched")

_RENYI_MONOTONE = ParameterSet((Interval(0, 1),))
_SANDWICHED_MONOTONE = ParameterSet((Interval(0.5, 1, lo_closed=True),))
_TSALLIS_MONOTONE = ParameterSet((Interval(0, 1), Interval(1, 2, hi_closed=True)))

# Where the formula is defined at all (exploratory mode).
_DEFINED = {
    "renyiDown": ParameterSet((Interval(0, 1), Interval(1, math.inf))),
    "renyiUp": _RENYI_MONOTONE,
    "renyiBar": _RENYI_MONOTONE,
    "sandwiched": ParameterSet((Interval(0, 1), Interval(1, math.inf))),
    "tsallis": ParameterSet((Interval(0, 1), Interval(1, math.inf))),
}
_MONOTONE = {
    "renyiDown": _RENYI_MONOTONE,
    "renyiUp": _RENYI_MONOTONE,
    "renyiBar": _RENYI_MONOTONE,
    "sandwiched": _SANDWICHED_MONOTONE,
    "tsallis": _TSALLIS_MONOTONE,
}


@dataclass(frozen=True)
class RealityQuantifierSpec:
    """Quantifier kind, its parameter and the guarantee mode."""

    kind: str
    parameter: float | None = None
    mode: str = "monotone"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown reality quantifier {self.kind!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.kind not in _MONOTONE:
            object.__setattr__(self, "parameter", None)
            return
        if self.parameter is None:
            raise ValueError(f"{self.kind} needs a parameter")
        p = float(self.parameter)
        object.__setattr__(self, "parameter", p)
        err = QOutOfRange if self.kind == "tsallis" else AlphaOutOfRange
        near_one = abs(p - 1.0) < LIMIT_TOL and self.kind != "renyiUp" and self.kind != "renyiBar"
        allowed = _MONOTONE[self.kind] if self.mode == "monotone" else _DEFINED[self.kind]
        if not (allowed.contains(p) or (near_one and p > 0)):
            raise err(f"{self.kind} parameter {p} outside {allowed} in {self.mode} mode")

    @property
    def guaranteed(self) -> bool:
        """True when the quantifier satisfies the monotone axioms at this parameter."""
        if self.kind == "vN":
            return True
        if self.kind in ("minRel", "maxRel"):
            return False
        p = self.parameter
        return _MONOTONE[self.kind].contains(p) or abs(p - 1.0) < LIMIT_TOL

    @property
    def label(self) -> str:
        return self.kind if self.parameter is None else f"{self.kind}({self.parameter:g})"

    @property
    def divergence_spec(self) -> dv.DivergenceSpec:
        """Divergence whose distance to Phi_A(rho) defines the quantifier."""
        family = {"vN": "vonNeumann", "renyiDown": "renyi", "renyiUp": "renyi",
                  "renyiBar": "renyi", "tsallis": "tsallis", "minRel": "minRel",
                  "maxRel": "maxRel", "sandwiched": "sandwiched"}[self.kind]
        return dv.DivergenceSpec(family, self.parameter)


@dataclass(frozen=True)
class RealityValue:
    value: float
    max_value: float
    spec: RealityQuantifierSpec
    guaranteed: bool = True
    converged: bool = True

    def __float__(self):
        return float(self.value)

    @property
    def deficit(self) -> float:
        return self.max_value - self.value


def _value(value, max_value, spec, converged=True):
    return RealityValue(float(value), float(max_value), spec, spec.guaranteed, converged)


def _d_a(rho: DensityOperator, obs: Observables) -> int:
    for o in as_observables(obs):
        if o.subsystem >= len(rho.dims) or rho.dims[o.subsystem] != o.dim:
            raise LayoutMismatch(f"observable on subsystem {o.subsystem} does not fit layout {rho.dims}")
    return measured_dim(obs)


def reality_vn(rho: DensityOperator, obs: Observables) -> RealityValue:
    """ln d_A - D(rho || Phi_A rho)."""
    d = _d_a(rho, obs)
    spec = RealityQuantifierSpec("vN")
    return _value(math.log(d) - divergence(rho, phi_A(rho, obs), "vN"), math.log(d), spec)


def irreality(rho: DensityOperator, obs: Observables) -> float:
    """S(Phi_A rho) - S(rho)."""
    _d_a(rho, obs)
    return entropy(phi_A(rho, obs)) - entropy(rho)


def reality_renyi_down(rho: DensityOperator, obs: Observables, alpha: float,
                       mode: str = "monotone") -> RealityValue:
    """ln d_A - D_alpha(rho || Phi_A rho)."""
    spec = RealityQuantifierSpec("renyiDown", alpha, mode)
    d = _d_a(rho, obs)
    value = math.log(d) - divergence(rho, phi_A(rho, obs), dv.DivergenceSpec.renyi(alpha), strict=False)
    return _value(value, math.log(d), spec)


def _sibson_value(env_traced_power: np.ndarray, alpha: float) -> float:
    inner = np.trace(matrix_power(env_traced_power, 1.0 / alpha)).real
    return alpha / (alpha - 1.0) * math.log(inner)


def reality_renyi_up(rho: DensityOperator, obs: Observables, alpha: float,
                     mode: str = "monotone", via: str = "identity") -> RealityValue:
    """ln d_A - (alpha/(alpha-1)) ln Tr{[Tr_E(upsilon^alpha)]^(1/alpha)}.

    ``via="identity"`` uses Tr_E(upsilon^alpha) = Phi_A(rho^alpha);
    ``via="dilation"`` builds the dilated state and traces the environment
    (single observable only).
    """
    spec = RealityQuantifierSpec("renyiUp", alpha, mode)
    d = _d_a(rho, obs)
    if via == "identity":
        powered = Spectrum.of(rho).power(alpha)
        m = phi_A(DensityOperator._trusted(powered, rho.layout), obs).matrix
    elif via == "dilation":
        (o,) = as_observables(obs)
        ups = dilate(rho, stinespring_unitary(o, rho.layout))
        powered = Spectrum.of(ups).power(alpha)
        m = partial_trace(powered, ups.layout, keep=range(len(rho.dims)))
    else:
        raise ValueError(f"unknown evaluation path {via!r}")
    return _value(math.log(d) - _sibson_value(m, alpha), math.log(d), spec)


def _move_first_to(m: np.ndarray, dims: tuple[int, ...], k: int) -> np.ndarray:
    """Reorder a matrix on (d_k, rest...) so the first factor sits at slot k."""
    if k == 0:
        return m
    order = [dims[k]] + [d for i, d in enumerate(dims) if i != k]
    n = len(dims)
    t = m.reshape(order + order)
    # axis i of the target comes from source axis perm[i]
    perm = list(range(1, k + 1)) + [0] + list(range(k + 1, n))
    t = t.transpose(perm + [p + n for p in perm])
    return t.reshape(m.shape)


def cq_state(weights, conditionals, obs: ProjectiveObservable, dims) -> np.ndarray:
    """sum_i p_i A_i (x) tau_i with A_i placed on ``obs.subsystem`` of ``dims``."""
    m = sum(p * np.kron(a, c) for p, a, c in zip(weights, obs.projectors, conditionals))
    return _move_first_to(np.asarray(m), tuple(dims), obs.subsystem)


def _cq_start(rho: DensityOperator, obs: ProjectiveObservable):
    """(p_i, rho_{B|i}) of Phi_A(rho), with A moved to the front."""
    k = obs.subsystem
    n = len(rho.dims)
    keep = [i for i in range(n) if i != k]
    d_rest = rho.dim // obs.dim
    ps, conds = [], []
    for a in obs.projectors:
        proj = embed(a, rho.layout, k)
        block = proj @ rho.matrix @ proj
        cond = partial_trace(block, rho.layout, keep=keep)
        p = float(np.trace(cond).real)
        ps.append(max(p, 1e-300))
        conds.append(cond / p if p > 1e-14 else np.eye(d_rest) / d_rest)
    return np.array(ps) / sum(ps), conds


def reality_renyi_bar(rho: DensityOperator, obs: ProjectiveObservable, alpha: float,
                      mode: str = "monotone", seed=None, restarts: int = 50,
                      strict: bool = False) -> RealityValue:
    """ln d_A - inf over A-reality states sigma of D_alpha(rho || sigma).

    The search space is ``sum_i p_i A_i (x) tau_i`` with a softmax map for
    ``p`` and Cholesky factors for each ``tau_i``. The first start is
    ``sigma = Phi_A(rho)`` so the result never falls below the down-arrow
    quantifier. With ``strict=True`` non-convergence raises
    :class:`OptimizerNonConvergence`; otherwise it is flagged on the result.
    """
    spec = RealityQuantifierSpec("renyiBar", alpha, mode)
    d = _d_a(rho, obs)
    if not isinstance(obs, ProjectiveObservable):
        (obs,) = as_observables(obs)
    rs = Spectrum.of(rho)
    d_rest = rho.dim // d
    n_tau = d_rest * d_rest
    dims = rho.dims

    def unpack(x):
        p = softmax(x[:d])
        taus = [params_to_density(x[d + i * n_tau:d + (i + 1) * n_tau], d_rest) for i in range(d)]
        return p, taus

    def objective(x):
        p, taus = unpack(x)
        sig = cq_state(p, taus, obs, dims)
        return dv._petz(rs, Spectrum.of(sig), alpha, False)

    p0, c0 = _cq_start(rho, obs)
    x0 = np.concatenate([np.log(p0)] + [density_to_params(c, jitter=1e-12) for c in c0])
    base = objective(x0)
    best = minimize_restarted(objective, x0, restarts=restarts, ftol=1e-9)
    if not best.converged:
        rng = np.random.default_rng(seed)
        alt = minimize_restarted(objective, rng.standard_normal(x0.size), restarts=restarts, ftol=1e-9)
        best = min((best, alt), key=lambda o: o.fun)
    fun = min(best.fun, base)
    converged = best.converged
    if strict and not converged:
        raise OptimizerNonConvergence("cq-state search did not converge", math.log(d) - fun)
    return _value(math.log(d) - fun, math.log(d), spec, converged)


def reality_tsallis(rho: DensityOperator, obs: Observables, q: float,
                    mode: str = "monotone") -> RealityValue:
    """ln_q d_A - d_A^(1-q) D_q(rho || Phi_A rho)."""
    spec = RealityQuantifierSpec("tsallis", q, mode)
    d = _d_a(rho, obs)
    dq = divergence(rho, phi_A(rho, obs), dv.DivergenceSpec.tsallis(q), strict=False)
    scale = 1.0 if abs(q - 1.0) < LIMIT_TOL else d ** (1.0 - q)
    top = ln_q(d, q)
    return _value(top - scale * dq, top, spec)


def reality_special(rho: DensityOperator, obs: Observables, kind: str, alpha: float | None = None,
                    mode: str = "monotone") -> RealityValue:
    """ln d_A - D_kind(rho || Phi_A rho) for kind in {minRel, maxRel, sandwiched}."""
    if kind not in ("minRel", "maxRel", "sandwiched"):
        raise ValueError(f"special quantifier must be minRel, maxRel or sandwiched, got {kind!r}")
    spec = RealityQuantifierSpec(kind, alpha, mode)
    d = _d_a(rho, obs)
    value = math.log(d) - divergence(rho, phi_A(rho, obs), spec.divergence_spec, strict=False)
    return _value(value, math.log(d), spec)


def reality(rho: DensityOperator, obs: Observables, spec: RealityQuantifierSpec, **kw) -> RealityValue:
    """Dispatch on ``spec.kind``."""
    k, p, mode = spec.kind, spec.parameter, spec.mode
    if k == "vN":
        return reality_vn(rho, obs)
    if k == "renyiDown":
        return reality_renyi_down(rho, obs, p, mode)
    if k == "renyiUp":
        return reality_renyi_up(rho, obs, p, mode, **kw)
    if k == "renyiBar":
        return reality_renyi_bar(rho, obs, p, mode, **kw)
    if k == "tsallis":
        return reality_tsallis(rho, obs, p, mode)
    return reality_special(rho, obs, k, p, mode)


def max_value(spec: RealityQuantifierSpec, d_a: int) -> float:
    if spec.kind == "tsallis":
        return ln_q(d_a, spec.parameter)
    return math.log(d_a)


@dataclass(frozen=True)
class UncertaintyBound:
    lhs: float
    bound: float
    discord_bound: float
    discord: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.bound + 1e-9 and self.lhs <= self.discord_bound + 1e-9


def uncertainty_bound(rho: DensityOperator, x: ProjectiveObservable, y: ProjectiveObservable,
                      spec: RealityQuantifierSpec | None = None, grid: int = 64,
                      seed=None) -> UncertaintyBound:
    """R_X + R_Y against 2 max and the discord-strengthened 2 (ln d_A - D_A).

    The one-sided discord is the minimum of a grid-plus-polish search and the
    discords of ``x`` and ``y`` themselves.
    """
    if x.subsystem != y.subsystem:
        raise LayoutMismatch("X and Y must act on the same subsystem")
    spec = spec or RealityQuantifierSpec("vN")
    d = _d_a(rho, x)
    _d_a(rho, y)
    lhs = reality(rho, x, spec).value + reality(rho, y, spec).value
    top = max_value(spec, d)
    split = x.subsystem + 1
    if split >= len(rho.dims):
        raise LayoutMismatch("discord bound needs a subsystem B after the measured one")
    search = dv.one_sided_discord(rho, x.subsystem, split, grid=grid, seed=seed).value
    disc = min(search, dv.discord_A(rho, x, split), dv.discord_A(rho, y, split))
    return UncertaintyBound(lhs, 2 * top, 2 * (math.log(d) - disc), disc)


# ---------------------------------------------------------------------------
# Axiom table: which axioms each quantifier family satisfies
# ---------------------------------------------------------------------------

OPEN = "open"
AXIOMS = ("axiom1", "axiom2", "axiom3a", "axiom3b", "axiom4", "axiom5", "axiom6", "axiom7")
TABLE_COLUMNS = ("vN", "renyi", "minRel", "sandwiched", "maxRel", "tsallis")

_ALL = dv.ALL
_NONE = dv.NONE


def _ii(vn, renyi, min_, sand, max_, ts):
    return dict(zip(TABLE_COLUMNS, (vn, renyi, min_, sand, max_, ts)))


TABLE_II = {
    "axiom1": _ii(_ALL, _ALL, _ALL, _ALL, _ALL, _ALL),
    "axiom2": _ii(_ALL, _ALL, _NONE, _ALL, _ALL, _ALL),
    "axiom3a": _ii(_ALL, dv.PETZ_DPI, _ALL, dv.SANDWICHED_DPI, _ALL, dv.PETZ_DPI),
    "axiom3b": _ii(_ALL, _ALL, _ALL, _ALL, _ALL, _ALL),
    "axiom4": _ii(_ALL, _ALL, _NONE, _ALL, _ALL, _ALL),
    "axiom5": _ii(_ALL, dv.OPEN_UNIT, _ALL, dv.HALF_TO_ONE, _NONE, dv.PETZ_DPI),
    "axiom6": _ii(_ALL, _ALL, _ALL, _ALL, _ALL, _NONE),
    "axiom7": _ii(_ALL, OPEN, OPEN, OPEN, _NONE, OPEN),
}


def table_column(spec: RealityQuantifierSpec) -> str:
    return {"renyiDown": "renyi", "renyiUp": "renyi", "renyiBar": "renyi"}.get(spec.kind, spec.kind)


def table_ii_expectation(axiom: str, spec: RealityQuantifierSpec) -> str:
    """"holds", "fails" or "open" for one axiom-table cell at the spec's parameter."""
    cell = TABLE_II[axiom][table_column(spec)]
    if cell == OPEN:
        return OPEN
    p = spec.parameter
    if p is not None and abs(p - 1.0) < LIMIT_TOL:
        return "holds"
    return "holds" if cell.contains(p) else "fails"
