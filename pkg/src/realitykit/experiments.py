"""Parameter sweeps over the Werner and mu families, and the axiom-suite runner.

Every sweep evaluates the matrix pipeline next to the scalar closed forms of
:mod:`realitykit.closed_forms`, writes a CSV whose comment header fully
determines the run, and writes a gnuplot script next to it.
"""
from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import closed_forms as cf
from .errors import ConfigError, ParameterOutOfRange
from .harness import run_all, write_jsonl
from .qstate import ProjectiveObservable, computational_observable, mu_state, werner_state
from .reality import (
    RealityQuantifierSpec,
    reality_renyi_down,
    reality_renyi_up,
    reality_special,
    reality_tsallis,
    reality_vn,
)

EXPERIMENTS = ("werner-sweep", "mu-sweep", "updown-gap", "tsallis-sweep", "axiom-suite")

NEAR_ONE = 1 - 1e-6
DEFAULT_ALPHAS = (1 / 8, 1 / 4, 1 / 2, NEAR_ONE)
DEFAULT_QS = (1 / 2, NEAR_ONE, 3 / 2, 2.0)
DEFAULT_PHIS = (0.0, math.pi / 4, math.pi / 2)
DEFAULT_THETAS = tuple(2 * math.pi * k / 8 for k in range(8))
PUBLISHED_GAP = {"alpha": 0.24, "epsilon": 0.89, "max": 0.0044}

AGREE_TOL = 1e-10
ORDER_TOL = 1e-9


def parse_number(text: str) -> float:
    """Float from decimal, fraction ("1/8") or "inf" notation."""
    t = text.strip().lower()
    if t in ("inf", "infinity"):
        return math.inf
    try:
        return float(Fraction(t))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse number {text!r}") from None


@dataclass
class ExperimentConfig:
    experiment: str
    alphas: tuple[float, ...] | None = None
    qs: tuple[float, ...] | None = None
    steps: int | None = None
    seed: int = 0
    out: str | None = None
    mode: str = "monotone"
    phis: tuple[float, ...] = DEFAULT_PHIS
    thetas: tuple[float, ...] = DEFAULT_THETAS
    batch: int = 500
    only: tuple[str, ...] = ()

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.mode not in ("monotone", "exploratory"):
            raise ConfigError(f"mode must be monotone or exploratory, not {self.mode!r}")
        if self.steps is not None and self.steps < 2:
            raise ConfigError("steps must be at least 2")
        if self.batch < 1:
            raise ConfigError("batch must be positive")
        kind = {"werner-sweep": "renyiDown", "mu-sweep": "renyiDown", "updown-gap": "renyiUp"}.get(self.experiment)
        try:
            if kind is not None:
                for a in self.alphas or ():
                    RealityQuantifierSpec(kind, a, self.mode)
            if self.experiment == "tsallis-sweep":
                for q in self.qs or ():
                    RealityQuantifierSpec("tsallis", q, self.mode)
        except ParameterOutOfRange as exc:
            raise ConfigError(str(exc)) from exc

    def identity(self) -> dict:
        """Everything that determines the output (the output path excluded)."""
        d = asdict(self)
        d.pop("out")
        return d

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.identity(), sort_keys=True, default=repr).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def output_path(self, suffix: str) -> Path:
        return Path(self.out) if self.out else Path(f"{self.experiment}{suffix}")


@dataclass
class ExperimentResult:
    experiment: str
    path: Path | None
    columns: tuple[str, ...]
    rows: list[tuple]
    checks: dict[str, bool]
    summary: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def header_lines(cfg: ExperimentConfig) -> list[str]:
    return [
        f"# realitykit {__version__} experiment={cfg.experiment}",
        f"# seed={cfg.seed} config_hash={cfg.config_hash}",
        f"# config={json.dumps(cfg.identity(), sort_keys=True, default=repr)}",
    ]


def write_csv(path: Path, cfg: ExperimentConfig, columns, rows) -> int:
    """Write comment header, column names and rows; return the number of lines before data."""
    head = header_lines(cfg)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        for line in head:
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return len(head) + 1


def write_gnuplot(csv_path: Path, skip: int, body: list[str], title: str) -> Path:
    gp = csv_path.with_suffix(".gp")
    lines = [
        f"# gnuplot script for {csv_path.name}",
        "set datafile separator ','",
        f"file = '{csv_path.name}'",
        f"set title '{title}'",
        "set key outside right",
        *[line.replace("SKIP", str(skip)) for line in body],
    ]
    gp.write_text("\n".join(lines) + "\n")
    return gp


def _series_plot(x_col: int, y_col: int, sel_col: int, values, label: str, xlabel: str, ylabel: str):
    parts = []
    for v in values:
        key = _fmt(v)
        sel = f"(strcol({sel_col}) eq '{key}' ? ${y_col} : 1/0)"
        parts.append(f"file skip SKIP using {x_col}:{sel} with lines title '{label}={v:.6g}'")
    return [f"set xlabel '{xlabel}'", f"set ylabel '{ylabel}'", "plot " + ", \\\n     ".join(parts)]


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

SIGMA_Z = computational_observable(2)


def _grid(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def run_werner_sweep(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    alphas = tuple(cfg.alphas or DEFAULT_ALPHAS)
    eps_grid = _grid(cfg.steps or 201)
    rows = []
    worst_diff, endpoint_err, concavity = 0.0, 0.0, -math.inf
    for eps in eps_grid:
        rho = werner_state(float(eps))
        for a in alphas:
            num = reality_renyi_down(rho, SIGMA_Z, a, cfg.mode).value
            closed = cf.werner_renyi_down(a, float(eps))
            diff = abs(num - closed)
            worst_diff = max(worst_diff, diff)
            concavity = max(concavity, (1 - eps) * cf.LN2 - num)
            if eps == 0.0:
                endpoint_err = max(endpoint_err, abs(num - cf.LN2))
            if eps == 1.0 and a < 1:
                endpoint_err = max(endpoint_err, abs(num))
            rows.append((eps, a, num, closed, diff, int(0 < a < 1)))
        # limiting members, not monotones
        rows.append((eps, 0.0, reality_special(rho, SIGMA_Z, "minRel", mode="exploratory").value,
                     cf.werner_min_rel(float(eps)), 0.0, 0))
        rows.append((eps, math.inf, reality_special(rho, SIGMA_Z, "maxRel", mode="exploratory").value,
                     cf.werner_max_rel(float(eps)), 0.0, 0))
    for i, r in enumerate(rows):
        if r[1] in (0.0, math.inf):
            rows[i] = r[:4] + (abs(r[2] - r[3]),) + r[5:]
    limit_diff = max(r[4] for r in rows if r[1] in (0.0, math.inf))
    cols = ("epsilon", "alpha", "R_numeric", "R_closed_form", "abs_diff", "monotone")
    checks = {
        "closed_form_agreement": worst_diff <= AGREE_TOL,
        "endpoints": endpoint_err <= AGREE_TOL,
        "concavity_lower_bound": concavity <= ORDER_TOL,
        "limit_members_agreement": limit_diff <= AGREE_TOL,
    }
    summary = {"max_abs_diff": worst_diff, "endpoint_error": endpoint_err,
               "limit_members_max_abs_diff": limit_diff}
    path = None
    if write:
        path = cfg.output_path(".csv")
        skip = write_csv(path, cfg, cols, rows)
        body = _series_plot(1, 3, 2, alphas + (0.0, math.inf), "alpha", "epsilon", "R_A down (nats)")
        write_gnuplot(path, skip, body, "Renyi reality of the Werner state")
    return ExperimentResult(cfg.experiment, path, cols, rows, checks, summary)


def run_mu_sweep(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    alphas = tuple(cfg.alphas or DEFAULT_ALPHAS)
    mus = _grid(cfg.steps or 201)
    rows = []
    worst_spread, worst_order = 0.0, -math.inf
    for mu in mus:
        rho = mu_state(float(mu))
        for phi in cfg.phis:
            vals = []
            for a in alphas:
                per_theta = [reality_renyi_down(rho, ProjectiveObservable.spin(t, phi), a, cfg.mode).value
                             for t in cfg.thetas]
                spread = max(per_theta) - min(per_theta)
                worst_spread = max(worst_spread, spread)
                vals.append(per_theta[0])
                rows.append((mu, phi, a, per_theta[0], spread))
            order = np.argsort(alphas)
            ordered = np.asarray(vals)[order]
            worst_order = max(worst_order, float(np.max(np.diff(ordered))) if len(vals) > 1 else -math.inf)
    bell = mu_state(1.0)
    direct = reality_vn(bell, ProjectiveObservable.spin(0.0, 0.0)).value
    near_one = [r for r in rows if r[0] == 1.0 and r[1] == 0.0 and abs(r[2] - 1) < 1e-3]
    bell_err = max((abs(r[3] - direct) for r in near_one), default=0.0)
    cols = ("mu", "phi", "alpha", "R", "theta_spread")
    checks = {
        "theta_independence": worst_spread <= ORDER_TOL,
        "alpha_ordering": worst_order <= ORDER_TOL,
        "bell_endpoint_vs_vN": bell_err <= 1e-4 and abs(direct) <= AGREE_TOL,
    }
    summary = {"max_theta_spread": worst_spread, "max_order_violation": worst_order,
               "bell_R_vN": direct, "bell_near_one_error": bell_err}
    path = None
    if write:
        path = cfg.output_path(".csv")
        skip = write_csv(path, cfg, cols, rows)
        body = []
        for k, phi in enumerate(cfg.phis):
            body.append(f"# panel {k}: phi = {phi:.6g}")
            parts = [f"file skip SKIP using 1:((strcol(2) eq '{_fmt(phi)}' && strcol(3) eq '{_fmt(a)}') ? $4 : 1/0) "
                     f"with lines title 'alpha={a:.6g}'" for a in alphas]
            body += ["set xlabel 'mu'", "set ylabel 'R_A down (nats)'",
                     f"set title 'phi = {phi:.4g}'", "plot " + ", \\\n     ".join(parts), "pause -1"]
        write_gnuplot(path, skip, body, "Renyi reality of rho_mu")
    return ExperimentResult(cfg.experiment, path, cols, rows, checks, summary)


def _argmax(rows, col):
    best = max(rows, key=lambda r: r[col])
    return {"alpha": best[0], "epsilon": best[1], "max": best[col]}


def run_updown_gap(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    n = cfg.steps or 99
    interior = np.arange(1, n + 1) / (n + 1)
    alphas = tuple(cfg.alphas) if cfg.alphas else tuple(interior)
    rows = []
    for a in alphas:
        for eps in interior:
            rho = werner_state(float(eps))
            up = reality_renyi_up(rho, SIGMA_Z, a, cfg.mode).value
            down = reality_renyi_down(rho, SIGMA_Z, a, cfg.mode).value
            up_d = cf.werner_renyi_up(a, float(eps), "derived")
            up_p = cf.werner_renyi_up(a, float(eps), "printed")
            down_c = cf.werner_renyi_down(a, float(eps))
            rows.append((a, eps, up, up_d, up_p, down, down_c, up_d - down_c, up_p - down_c, up - down))
    cols = ("alpha", "epsilon", "R_up_numeric", "R_up_derived_chi", "R_up_printed_chi", "R_down_numeric",
            "R_down_closed_form", "gap_derived", "gap_printed", "gap_numeric")
    arr = np.array(rows, dtype=float)
    checks = {
        "gap_derived_nonnegative": float(arr[:, 7].min()) >= -ORDER_TOL,
        "ordering_up_ge_down": float(arr[:, 9].min()) >= -ORDER_TOL,
        "derived_chi_matches_numeric": float(np.abs(arr[:, 2] - arr[:, 3]).max()) <= AGREE_TOL,
    }
    summary = {
        "derived": _argmax(rows, 7),
        "printed": _argmax(rows, 8),
        "numeric": _argmax(rows, 9),
        "published": PUBLISHED_GAP,
        "min_gap_derived": float(arr[:, 7].min()),
        "min_gap_printed": float(arr[:, 8].min()),
        "max_abs_numeric_minus_derived": float(np.abs(arr[:, 2] - arr[:, 3]).max()),
        "max_abs_numeric_minus_printed": float(np.abs(arr[:, 2] - arr[:, 4]).max()),
    }
    path = None
    if write:
        path = cfg.output_path(".csv")
        skip = write_csv(path, cfg, cols, rows)
        body = ["set xlabel 'alpha'", "set ylabel 'epsilon'", "set zlabel 'gap (nats)'",
                "splot file skip SKIP using 1:2:8 with points palette pt 5 ps 0.5 title 'gap, derived chi'"]
        write_gnuplot(path, skip, body, "R_up - R_down for the Werner state")
        path.with_name(path.stem + "_summary.txt").write_text(gap_table(summary))
    return ExperimentResult(cfg.experiment, path, cols, rows, checks, summary)


def gap_table(summary: dict) -> str:
    lines = ["source,alpha,epsilon,max_gap"]
    for key in ("published", "derived", "printed", "numeric"):
        s = summary[key]
        lines.append(f"{key},{_fmt(s['alpha'])},{_fmt(s['epsilon'])},{_fmt(s['max'])}")
    lines.append(f"# min gap derived chi: {_fmt(summary['min_gap_derived'])}")
    lines.append(f"# min gap printed chi: {_fmt(summary['min_gap_printed'])}")
    lines.append(f"# max |numeric - derived chi|: {_fmt(summary['max_abs_numeric_minus_derived'])}")
    lines.append(f"# max |numeric - printed chi|: {_fmt(summary['max_abs_numeric_minus_printed'])}")
    return "\n".join(lines) + "\n"


def run_tsallis_sweep(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    qs = tuple(cfg.qs or DEFAULT_QS)
    eps_grid = _grid(cfg.steps or 201)
    rows = []
    worst_diff, worst_order = 0.0, -math.inf
    order = sorted(qs)
    for eps in eps_grid:
        rho = werner_state(float(eps))
        vals = {}
        for q in qs:
            num = reality_tsallis(rho, SIGMA_Z, q, cfg.mode).value
            closed = cf.werner_tsallis(q, float(eps))
            diff = abs(num - closed)
            worst_diff = max(worst_diff, diff)
            vals[q] = num
            rows.append((eps, q, num, closed, diff))
        for lo, hi in zip(order, order[1:]):
            worst_order = max(worst_order, vals[hi] - vals[lo])
    cols = ("epsilon", "q", "R_numeric", "R_closed_form", "abs_diff")
    checks = {
        "closed_form_agreement": worst_diff <= AGREE_TOL,
        "q_monotonicity": worst_order <= ORDER_TOL,
    }
    summary = {"max_abs_diff": worst_diff, "max_order_violation": worst_order}
    path = None
    if write:
        path = cfg.output_path(".csv")
        skip = write_csv(path, cfg, cols, rows)
        write_gnuplot(path, skip, _series_plot(1, 3, 2, qs, "q", "epsilon", "R_A^q"),
                      "Tsallis reality of the Werner state")
    return ExperimentResult(cfg.experiment, path, cols, rows, checks, summary)


def run_axiom_suite(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    t0 = time.perf_counter()
    reports = run_all(batch=cfg.batch, seed=cfg.seed, only=cfg.only or None)
    if cfg.only and not reports:
        raise ConfigError(f"no check id starts with any of {cfg.only}")
    path = None
    if write:
        path = cfg.output_path(".jsonl")
        path.parent.mkdir(parents=True, exist_ok=True)
        write_jsonl(reports, path)
    checks = {r.id: r.ok for r in reports}
    summary = {"checks": len(reports), "not_ok": [r.id for r in reports if not r.ok],
               "elapsed_s": time.perf_counter() - t0}
    rows = [(r.id, r.passed, r.worst_violation, r.expect, r.ok) for r in reports]
    return ExperimentResult(cfg.experiment, path, ("id", "pass", "worst_violation", "expect", "ok"),
                            rows, checks, summary)


RUNNERS = {
    "werner-sweep": run_werner_sweep,
    "mu-sweep": run_mu_sweep,
    "updown-gap": run_updown_gap,
    "tsallis-sweep": run_tsallis_sweep,
    "axiom-suite": run_axiom_suite,
}


def run(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    return RUNNERS[cfg.experiment](cfg, write)
