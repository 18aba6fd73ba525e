"""Command-line entry points: simulate, sweep, verify."""

import argparse
import os
import sys

from .constraints import SpectrumParams
from .shmhd import BlowUpError, ShmhdParams
from .shmhd import run as shmhd_run
from .pehm import run as pehm_run
from .sweep import (
    ConfigError,
    SweepConfig,
    PairResult,
    PairSummary,
    RunRow,
    emit_report,
    initial_states,
    load_config,
    run_pair,
    run_sweep,
    runs_csv_text,
)
from .verify import run_battery

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BLOWUP = 3


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="path to a key = value config file")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweep cells")
    p.add_argument("--mode", choices=["l2", "h1"], default=None, help="override config mode")


def _load(args) -> SweepConfig:
    cfg = load_config(args.config)
    if args.mode is not None:
        cfg = SweepConfig(**{**cfg.__dict__, "mode": args.mode})
        cfg.validate()
    return cfg


def cmd_simulate(args) -> int:
    cfg = _load(args)
    eps = args.eps if args.eps is not None else cfg.eps_ladder[0]
    s_eps0, s_lim0 = initial_states(cfg)
    os.makedirs(args.out, exist_ok=True)
    run_id = f"seed{cfg.seed}-eps{eps:g}-alpha{cfg.alpha:g}"
    try:
        if args.system == "shmhd":
            params = ShmhdParams(eps=eps, alpha=cfg.alpha, dt=cfg.dt, t_end=cfg.t_end)
            traj = shmhd_run(s_eps0, params, cfg.sample_every)
        else:
            traj = pehm_run(s_lim0, cfg.dt, cfg.t_end, cfg.sample_every)
    except BlowUpError as e:
        print(f"solver blow-up at step {e.step_index}: {e}", file=sys.stderr)
        return EXIT_BLOWUP
    rows = [
        RunRow(run_id, args.system, eps, cfg.alpha, s.record.t, s.record.e_l2,
               s.record.dissipation_accum, None, None, None,
               s.record.parity_defect, s.record.div_defect)
        for s in traj
    ]
    cell = PairResult(eps, [], rows, PairSummary(eps, 0.0, 0.0, 0.0, True, "ok"))
    with open(os.path.join(args.out, "runs.csv"), "w", newline="\n") as fh:
        fh.write(runs_csv_text([cell]))
    print(f"{args.system} run complete: {len(traj)} samples, final t={traj[-1].record.t:g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args)
    result = run_sweep(cfg, jobs=args.jobs)
    emit_report(result, args.out)
    if result.fit is not None:
        print(f"fitted slope {result.fit.slope:.4f} "
              f"(predicted {result.fit.gamma_half_predicted:g}), "
              f"r^2 {result.fit.r_squared:.4f}")
    else:
        print("no rate fit (fewer than 2 successful cells); partial report emitted")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load(args)
    seeds = range(cfg.seed, cfg.seed + args.states)
    results = run_battery(cfg.grid, seeds, SpectrumParams(cfg.amplitude, cfg.m0))
    ok = True
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        print(f"{verdict} {r.name}: worst {r.worst:.3e} (tol {r.tol:.0e})")
        ok = ok and r.passed
    return EXIT_OK if ok else EXIT_VALIDATION


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hydrolimit",
        description="Pseudo-spectral thin-domain MHD / hydrostatic-limit convergence suite",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a single system at a single eps")
    _add_common(p_sim)
    p_sim.add_argument("--system", choices=["shmhd", "pehm"], default="shmhd")
    p_sim.add_argument("--eps", type=float, default=None, help="aspect ratio (default: first ladder value)")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run the eps-ladder convergence-rate study")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="constraint + invariant battery on seeded fixtures")
    _add_common(p_verify)
    p_verify.add_argument("--states", type=int, default=20, help="number of seeded states")
    p_verify.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
