"""Sweep orchestration: matched solver pairs over an aspect-ratio ladder,
rate fitting, and CSV/SVG reporting.

Config grammar: flat ``key = value`` lines, ``#`` comments, and repeated
``eps`` keys building the ladder.  Unknown keys are errors.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import math
import os

import numpy as np

from .constraints import SpectrumParams, VectorState, generate_initial_data
from .diagnostics import DiffRecord, difference_metrics, energy_ledger, gamma_of_alpha
from .grid import GridSpec
from .pehm import PehmState
from .pehm import run as pehm_run
from .shmhd import BlowUpError, ElsasserState, ShmhdParams
from .shmhd import run as shmhd_run


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    n1: int = 32
    n2: int = 32
    n3: int = 32
    l1: float = 2.0 * math.pi
    l2: float = 2.0 * math.pi
    alpha: float = 4.0
    eps_ladder: tuple[float, ...] = (0.2, 0.1, 0.05, 0.025)
    dt: float = 2e-3
    t_end: float = 0.5
    seed: int = 7
    amplitude: float = 0.1
    m0: float = 2.5
    sample_every: int = 10
    mode: str = "l2"

    def validate(self) -> None:
        if not self.eps_ladder:
            raise ConfigError("eps: ladder must be nonempty")
        if any(e <= 0 for e in self.eps_ladder):
            raise ConfigError("eps: all ladder values must be positive")
        if any(a <= b for a, b in zip(self.eps_ladder, self.eps_ladder[1:])):
            raise ConfigError("eps: ladder must be strictly decreasing")
        if self.mode not in ("l2", "h1"):
            raise ConfigError(f"mode: must be 'l2' or 'h1', got {self.mode!r}")
        if self.alpha < 2:
            raise ConfigError(f"alpha: must be >= 2, got {self.alpha}")
        if self.mode == "h1" and self.alpha <= 2:
            raise ConfigError(f"alpha: must exceed 2 in h1 mode, got {self.alpha}")
        if self.dt <= 0:
            raise ConfigError(f"dt: must be positive, got {self.dt}")
        if self.t_end <= 0:
            raise ConfigError(f"t_end: must be positive, got {self.t_end}")
        if self.sample_every < 1:
            raise ConfigError(f"sample_every: must be >= 1, got {self.sample_every}")
        GridSpec(self.n1, self.n2, self.n3, self.l1, self.l2)

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.n1, self.n2, self.n3, self.l1, self.l2)

    @property
    def spectrum(self) -> SpectrumParams:
        return SpectrumParams(self.amplitude, self.m0)


_INT_KEYS = {"n1", "n2", "n3", "seed", "sample_every"}
_FLOAT_KEYS = {"l1", "l2", "alpha", "dt", "t_end", "amplitude", "m0"}


def load_config(path) -> SweepConfig:
    """Parse and validate a flat key = value config file."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    values: dict = {}
    eps: list[float] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            try:
                if key == "eps":
                    eps.append(float(val))
                elif key in _INT_KEYS:
                    values[key] = int(val)
                elif key in _FLOAT_KEYS:
                    values[key] = float(val)
                elif key == "mode":
                    values[key] = val
                else:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            except ValueError as e:
                if isinstance(e, ConfigError):
                    raise
                raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {val!r}") from None
    if eps:
        values["eps_ladder"] = tuple(eps)
    cfg = SweepConfig(**values)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# matched pair runs

@dataclass
class RunRow:
    run_id: str
    system: str
    eps: float
    alpha: float
    t: float
    e_l2: float
    dissipation_accum: float
    d_l2: float | None
    d_diss_accum: float | None
    d_h1: float | None
    parity_defect: float
    div_defect: float


@dataclass
class PairSummary:
    eps: float
    sup_d_l2: float
    sup_d_h1: float
    final_d_diss: float
    energy_pass: bool
    status: str


@dataclass
class PairResult:
    eps: float
    diffs: list[DiffRecord]
    rows: list[RunRow]
    summary: PairSummary


def initial_states(cfg: SweepConfig) -> tuple[ElsasserState, PehmState]:
    """Seed-deterministic shared initial data, lifted to both systems."""
    data = generate_initial_data(cfg.seed, cfg.spectrum, cfg.grid)
    s_eps = ElsasserState(
        VectorState(data.a_h[0].copy(), data.a_h[1].copy(), data.a3.copy()),
        VectorState(data.b_h[0].copy(), data.b_h[1].copy(), data.b3.copy()),
        0.0,
    )
    s_lim = PehmState(
        (data.a_h[0].copy(), data.a_h[1].copy()),
        (data.b_h[0].copy(), data.b_h[1].copy()),
        0.0,
    )
    return s_eps, s_lim


def run_pair(cfg: SweepConfig, eps: float) -> PairResult:
    """Run SHMHD and PEHM from identical data; emit difference records."""
    s_eps0, s_lim0 = initial_states(cfg)
    params = ShmhdParams(eps=eps, alpha=cfg.alpha, dt=cfg.dt, t_end=cfg.t_end)
    run_id = f"seed{cfg.seed}-eps{eps:g}-alpha{cfg.alpha:g}"
    try:
        traj_eps = shmhd_run(s_eps0, params, cfg.sample_every)
        traj_lim = pehm_run(s_lim0, cfg.dt, cfg.t_end, cfg.sample_every)
    except BlowUpError as e:
        summary = PairSummary(eps, math.nan, math.nan, math.nan, False, f"blowup:{e}")
        return PairResult(eps, [], [], summary)

    diffs: list[DiffRecord] = []
    accum = 0.0
    prev = None
    for se, sl in zip(traj_eps, traj_lim):
        rec = difference_metrics(se.state, sl.state, eps, cfg.alpha)
        if prev is not None:
            accum += 0.5 * (rec.t - prev.t) * (rec.d_diss_rate + prev.d_diss_rate)
        rec.d_diss_accum = accum
        diffs.append(rec)
        prev = rec

    rows: list[RunRow] = []
    for se, rec in zip(traj_eps, diffs):
        r = se.record
        rows.append(
            RunRow(run_id, "shmhd", eps, cfg.alpha, r.t, r.e_l2, r.dissipation_accum,
                   rec.d_l2, rec.d_diss_accum, rec.d_h1, r.parity_defect, r.div_defect)
        )
    for sl in traj_lim:
        r = sl.record
        rows.append(
            RunRow(run_id, "pehm", eps, cfg.alpha, r.t, r.e_l2, r.dissipation_accum,
                   None, None, None, r.parity_defect, r.div_defect)
        )

    ledger = energy_ledger([s.record for s in traj_eps])
    summary = PairSummary(
        eps=eps,
        sup_d_l2=max(d.d_l2 for d in diffs),
        sup_d_h1=max(d.d_h1 for d in diffs),
        final_d_diss=diffs[-1].d_diss_accum,
        energy_pass=ledger.passed,
        status="ok",
    )
    return PairResult(eps, diffs, rows, summary)


# ---------------------------------------------------------------------------
# rate fitting

@dataclass
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    gamma_half_predicted: float


def fit_rate(eps_values, errors, gamma_half: float) -> RateFit:
    """Least-squares fit of log(error) against log(eps)."""
    x = np.log(np.asarray(eps_values, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return RateFit(float(slope), float(intercept), max(0.0, min(1.0, r_squared)), gamma_half)


@dataclass
class SweepResult:
    config: SweepConfig
    cells: list[PairResult]
    fit: RateFit | None
    errors: list[tuple[float, float]] = field(default_factory=list)


def _run_cell(args) -> PairResult:
    cfg, eps = args
    return run_pair(cfg, eps)


def sweep_errors(result_cells, mode: str) -> list[tuple[float, float]]:
    out = []
    for cell in result_cells:
        if cell.summary.status != "ok":
            continue
        sup = cell.summary.sup_d_l2 if mode == "l2" else cell.summary.sup_d_h1
        out.append((cell.eps, math.sqrt(sup)))
    return out


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> SweepResult:
    """Run all ladder cells (optionally in parallel) and fit the rate."""
    cfg.validate()
    if cfg.alpha <= 2:
        raise ConfigError(f"alpha: must exceed 2 for the convergence study, got {cfg.alpha}")
    if len(cfg.eps_ladder) < 3:
        raise ConfigError("eps: at least 3 ladder points are required for a sweep")
    tasks = [(cfg, eps) for eps in cfg.eps_ladder]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_run_cell, tasks))
    else:
        cells = [_run_cell(t) for t in tasks]
    cells.sort(key=lambda c: -c.eps)
    errors = sweep_errors(cells, cfg.mode)
    gamma_half = gamma_of_alpha(cfg.alpha) / 2.0
    fit = None
    if len(errors) >= 2 and all(e > 0 for _, e in errors):
        fit = fit_rate([e for e, _ in errors], [v for _, v in errors], gamma_half)
    return SweepResult(cfg, cells, fit, errors)


# ---------------------------------------------------------------------------
# reporting

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return repr(x)
    return str(x)


RUNS_COLUMNS = [
    "run_id", "system", "eps", "alpha", "t", "e_l2", "dissipation_accum",
    "d_l2", "d_diss_accum", "d_h1", "parity_defect", "div_defect",
]


def runs_csv_text(cells: list[PairResult]) -> str:
    lines = [",".join(RUNS_COLUMNS)]
    for cell in cells:
        for r in cell.rows:
            lines.append(",".join(_fmt(getattr(r, c)) for c in RUNS_COLUMNS))
    return "\n".join(lines) + "\n"


def sweep_csv_text(result: SweepResult) -> str:
    lines = ["eps,sup_err_l2,sup_err_h1,status"]
    for cell in result.cells:
        s = cell.summary
        err_l2 = math.sqrt(s.sup_d_l2) if s.status == "ok" else math.nan
        err_h1 = math.sqrt(s.sup_d_h1) if s.status == "ok" else math.nan
        lines.append(f"{_fmt(cell.eps)},{_fmt(err_l2)},{_fmt(err_h1)},{s.status}")
    return "\n".join(lines) + "\n"


def summary_text(result: SweepResult) -> str:
    lines = []
    cfg = result.config
    lines.append(f"sweep: alpha={cfg.alpha:g} mode={cfg.mode} seed={cfg.seed} "
                 f"grid={cfg.n1}x{cfg.n2}x{cfg.n3} dt={cfg.dt:g} t_end={cfg.t_end:g}")
    ok = [c for c in result.cells if c.summary.status == "ok"]
    if not result.cells:
        lines.append("no ladder cells were run")
    for cell in result.cells:
        s = cell.summary
        if s.status == "ok":
            lines.append(
                f"eps={cell.eps:g}: err_l2={math.sqrt(s.sup_d_l2):.6e} "
                f"err_h1={math.sqrt(s.sup_d_h1):.6e} energy={'PASS' if s.energy_pass else 'FAIL'}"
            )
        else:
            lines.append(f"eps={cell.eps:g}: {s.status}")
    if result.fit is not None:
        f = result.fit
        lines.append(
            f"fitted slope={f.slope:.6f} (predicted gamma/2={f.gamma_half_predicted:g}) "
            f"r_squared={f.r_squared:.6f}"
        )
        if f.slope > f.gamma_half_predicted:
            lines.append("note: observed rate exceeds the predicted upper-bound rate")
    elif len(ok) < 2:
        lines.append("fewer than 2 successful cells: no rate fit, partial report only")
    return "\n".join(lines) + "\n"


def rate_svg_text(result: SweepResult) -> str:
    """Deterministic log-log scatter of error vs eps with the fitted line."""
    w, h, pad = 480, 360, 50
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<text x="{w // 2}" y="20" text-anchor="middle" font-size="14">'
        "convergence rate: log error vs log eps</text>",
    ]
    pts = [(e, v) for e, v in result.errors if v > 0]
    if pts:
        xs = [math.log10(e) for e, _ in pts]
        ys = [math.log10(v) for _, v in pts]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        xr = (x1 - x0) or 1.0
        yr = (y1 - y0) or 1.0

        def px(x):
            return pad + (x - x0) / xr * (w - 2 * pad)

        def py(y):
            return h - pad - (y - y0) / yr * (h - 2 * pad)

        if result.fit is not None and len(pts) >= 2:
            ln10 = math.log(10.0)
            ya = (result.fit.slope * (x0 * ln10) + result.fit.intercept) / ln10
            yb = (result.fit.slope * (x1 * ln10) + result.fit.intercept) / ln10
            parts.append(
                f'<line x1="{px(x0):.2f}" y1="{py(ya):.2f}" x2="{px(x1):.2f}" '
                f'y2="{py(yb):.2f}" stroke="steelblue" stroke-width="1.5"/>'
            )
        for x, y in zip(xs, ys):
            parts.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="4" fill="black"/>')
        if result.fit is not None:
            parts.append(
                f'<text x="{w // 2}" y="{h - 12}" text-anchor="middle" font-size="12">'
                f"slope={result.fit.slope:.4f} r2={result.fit.r_squared:.4f}</text>"
            )
    else:
        parts.append(f'<text x="{w // 2}" y="{h // 2}" text-anchor="middle">no data</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_report(result: SweepResult, out_dir) -> None:
    """Write runs.csv, sweep.csv, summary.txt, rate.svg; byte-stable for
    identical results."""
    try:
        os.makedirs(out_dir, exist_ok=True)
        probe = os.path.join(out_dir, ".write_probe")
        with open(probe, "w"):
            pass
        os.remove(probe)
    except OSError as e:
        raise OSError(f"output directory not writable: {out_dir} ({e})") from e
    with open(os.path.join(out_dir, "runs.csv"), "w", newline="\n") as fh:
        fh.write(runs_csv_text(result.cells))
    with open(os.path.join(out_dir, "sweep.csv"), "w", newline="\n") as fh:
        fh.write(sweep_csv_text(result))
    with open(os.path.join(out_dir, "summary.txt"), "w", newline="\n") as fh:
        fh.write(summary_text(result))
    with open(os.path.join(out_dir, "rate.svg"), "w", newline="\n") as fh:
        fh.write(rate_svg_text(result))
