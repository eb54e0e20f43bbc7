"""Command-line entry point: sweeps, slope reports, and a self-check.

Subcommands:
  run       Monte-Carlo sweep from a JSON config, persisted as CSV + meta.
  dof       per-strategy slope report for the config's grid, as JSON.
  validate  quick invariant suite on small instances.

Exit codes: 0 on success, 1 on failed validation, 2 on config errors,
3 on I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, dof
from .ao import AoConfig, solve as ao_solve
from .harness import (
    ExperimentConfig,
    config_from_json,
    generate_channels,
    persist,
    run_sweep,
)
from .model import PrecoderSet, Strategy, SystemConfig
from .wmmse import rate_wmmse_check


def _parse_strategies(text: str) -> tuple[Strategy, ...]:
    return tuple(Strategy.parse(part) for part in text.split(",") if part.strip())


def _apply_overrides(ec: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    if args.seed is not None:
        ec = replace(ec, master_seed=args.seed)
    if args.strategies is not None:
        ec = replace(ec, strategies=_parse_strategies(args.strategies))
    if args.out is not None:
        out_dir = Path(args.out)
        ec = replace(ec, output_path=str(out_dir / Path(ec.output_path).name))
    return ec


def _cmd_run(args: argparse.Namespace) -> int:
    ec = _apply_overrides(config_from_json(args.config), args)
    result = run_sweep(ec, jobs=args.jobs)
    try:
        path = persist(result, ec.output_path)
    except OSError as err:
        print(f"error: could not write results: {err}", file=sys.stderr)
        return 3
    n_bad = sum(not row.converged for row in result.rows)
    print(f"wrote {len(result.rows)} rows to {path} ({n_bad} unconverged cells)")
    print(f"total solve time: {result.total_wall_time_ms} ms")
    for (snr_db, strategy), mean in sorted(result.mean_rates().items()):
        print(f"  {snr_db:6.1f} dB  {strategy:<5} mean MMF rate {mean:.4f} bits")
    return 0


def _cmd_dof(args: argparse.Namespace) -> int:
    ec = config_from_json(args.config)
    dof.n_min(ec.system.at_power(1.0))  # unequal groups have no threshold; fail early
    result = run_sweep(ec, jobs=args.jobs)
    means = result.mean_rates()
    reports = []
    for strategy in ec.strategies:
        curve = [
            (ec.system.noise_power * 10.0 ** (snr / 10.0), means[(snr, strategy.value)])
            for snr in ec.snr_grid_db
        ]
        rep = dof.report(ec.system.at_power(curve[-1][0]), strategy, curve)
        reports.append(
            {
                "strategy": rep.strategy.value,
                "n_min": rep.n_min,
                "overloaded": rep.overloaded,
                "empirical_slope": rep.empirical_slope,
                "predicted_dof": rep.predicted_dof,
            }
        )
    print(json.dumps(reports, indent=2))
    return 0


def _check(name: str, ok: bool, detail: str = "") -> bool:
    tag = "PASS" if ok else "FAIL"
    print(f"{tag}  {name}" + (f"  ({detail})" if detail else ""))
    return ok


def _cmd_validate(args: argparse.Namespace) -> int:
    ok = True

    worst_gap = 0.0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        cfg = SystemConfig(2, ((0, 1), (2, 3)), 1.0, 10.0)
        ch = generate_channels(2, 4, seed)
        pre_raw = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
        pre_raw *= np.sqrt(cfg.power_budget / (2 * np.sum(np.abs(pre_raw) ** 2)))
        pre = PrecoderSet(pre_raw[0], pre_raw[1:])
        worst_gap = max(worst_gap, rate_wmmse_check(cfg, ch, pre))
    ok &= _check("rate-WMMSE identity gap <= 1e-9", worst_gap <= 1e-9, f"max {worst_gap:.2e}")

    cfg = SystemConfig(2, ((0, 1), (2, 3)), 1.0, 100.0)
    ch = generate_channels(2, 4, 7)
    results = {}
    for mode in Strategy:
        res = ao_solve(cfg, ch, AoConfig(mode=mode, seed=7))
        trace = np.array(res.objective_trace)
        monotone = bool(np.all(np.diff(trace) >= -1e-6))
        ok &= _check(f"{mode.value} objective trace non-decreasing", monotone)
        results[mode] = res.solution.mmf_rate
    dominance = results[Strategy.RS] >= max(results[Strategy.NORS], results[Strategy.SS]) - 5e-3
    ok &= _check("RS dominates both baselines", dominance)

    cfg = SystemConfig(3, ((0, 1), (2, 3)), 1.0, 10.0)
    ch = generate_channels(3, 4, 11)
    nulling = dof.nulling_precoders(cfg, ch)
    if nulling is None:
        ok &= _check("nulling beams exist at the antenna threshold", False)
    else:
        leak = 0.0
        for m, group in enumerate(cfg.groups):
            others = [i for i in range(cfg.n_users) if i not in group]
            h = ch.vectors[others]
            num = np.abs(h.conj() @ nulling.designated[m])
            den = np.linalg.norm(h, axis=1) * np.linalg.norm(nulling.designated[m])
            leak = max(leak, float((num / den).max()))
        ok &= _check("nulling residual <= 1e-9", leak <= 1e-9, f"max {leak:.2e}")

    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsbeam",
        description="Max-min fair multigroup multicast beamforming simulator",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a Monte-Carlo sweep from a JSON config")
    run_p.add_argument("--config", required=True, help="path to the JSON config")
    run_p.add_argument("--out", default=None, help="directory for the output CSV")
    run_p.add_argument("--seed", type=int, default=None, help="override the master seed")
    run_p.add_argument(
        "--strategies", default=None, help="comma-separated subset of rs,nors,ss"
    )
    run_p.add_argument("--jobs", type=int, default=1, help="parallel worker count")
    run_p.set_defaults(handler=_cmd_run)

    dof_p = sub.add_parser("dof", help="per-strategy rate-slope report")
    dof_p.add_argument("--config", required=True, help="path to the JSON config")
    dof_p.add_argument("--jobs", type=int, default=1, help="parallel worker count")
    dof_p.set_defaults(handler=_cmd_dof)

    val_p = sub.add_parser("validate", help="run the invariant suite on small instances")
    val_p.set_defaults(handler=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
