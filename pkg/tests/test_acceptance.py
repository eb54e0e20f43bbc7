"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``).

The Monte-Carlo criteria run at desk scale (25 realizations) with fixed
seeds; thresholds are unchanged from the full-scale protocol.
"""

import time

import numpy as np
import pytest

from conftest import make_instance
from oracles import two_user_grid_mmf
from rsbeam import dof
from rsbeam.ao import AoConfig, best_of_starts, solve as ao_solve
from rsbeam.harness import (
    ExperimentConfig,
    SystemTemplate,
    generate_channels,
    persist,
    run_sweep,
)
from rsbeam.model import ChannelSet, Strategy, SystemConfig
from rsbeam.wmmse import rate_wmmse_check

SNR_GRID = tuple(float(s) for s in range(0, 45, 5))


def report(name: str, ok: bool, detail: str, started: float, budget_s: float):
    elapsed = time.perf_counter() - started
    print(f"\n{'PASS' if ok else 'FAIL'}  {name}: {detail}  [{elapsed:.1f}s]")
    assert ok, f"{name}: {detail}"
    assert elapsed < budget_s, f"{name} exceeded its {budget_s:.0f}s budget"


def test_criterion_1_rate_wmmse_identity():
    started = time.perf_counter()
    worst = 0.0
    for seed in range(1000):
        cfg, ch, pre = make_instance(seed)
        worst = max(worst, rate_wmmse_check(cfg, ch, pre))
    report(
        "criterion 1 (rate-WMMSE identity)",
        worst <= 1e-9,
        f"max gap {worst:.2e} over 1000 instances (limit 1e-9)",
        started,
        budget_s=5.0,
    )


def test_criterion_2_ao_monotonicity():
    started = time.perf_counter()
    worst_drop = 0.0
    n_solves = 0
    modes = (Strategy.RS, Strategy.NORS, Strategy.SS)
    layouts = [
        (1, ((0,), (1,))),
        (2, ((0, 1), (2, 3))),
        (2, ((0,), (1, 2), (3,))),
        (3, ((0, 1, 2), (3, 4, 5))),
    ]
    powers = (1.0, 100.0, 1e4)
    seed = 0
    while n_solves < 100:
        n_tx, groups = layouts[seed % len(layouts)]
        power = powers[seed % len(powers)]
        cfg = SystemConfig(n_tx, groups, 1.0, power)
        ch = generate_channels(n_tx, cfg.n_users, seed)
        res = ao_solve(cfg, ch, AoConfig(mode=modes[seed % 3], seed=seed))
        steps = np.diff(np.array(res.objective_trace))
        if steps.size:
            worst_drop = max(worst_drop, float(-steps.min()))
        n_solves += 1
        seed += 1
    report(
        "criterion 2 (objective monotonicity)",
        worst_drop <= 1e-6,
        f"largest per-step drop {worst_drop:.2e} over {n_solves} solves (limit 1e-6)",
        started,
        budget_s=600.0,
    )


def test_criterion_3_brute_force_equivalence():
    started = time.perf_counter()
    cfg = lambda p: SystemConfig(1, ((0,), (1,)), 1.0, p)
    ch = ChannelSet([[1.0], [1.0]])
    worst = 0.0
    for power in (1.0, 10.0, 100.0):
        for mode in (Strategy.RS, Strategy.NORS):
            grid = two_user_grid_mmf(power, mode.value)
            res, _ = best_of_starts(cfg(power), ch, AoConfig(mode=mode, seed=5), 3)
            worst = max(worst, abs(res.solution.mmf_rate - grid))
    report(
        "criterion 3 (brute-force equivalence)",
        worst <= 2e-2,
        f"max |AO - grid| {worst:.2e} bits (limit 2e-2)",
        started,
        budget_s=120.0,
    )


def test_criterion_4_overloaded_saturation():
    started = time.perf_counter()
    ec = ExperimentConfig(
        system=SystemTemplate(2, ((0, 1), (2, 3))),
        snr_grid_db=SNR_GRID,
        n_realizations=25,
        strategies=(Strategy.RS, Strategy.NORS),
        master_seed=2024,
    )
    means = run_sweep(ec).mean_rates()
    rs = [means[(snr, "RS")] for snr in SNR_GRID]
    nors = [means[(snr, "NoRS")] for snr in SNR_GRID]
    nors_gain = means[(40.0, "NoRS")] - means[(30.0, "NoRS")]
    rs_gain = means[(40.0, "RS")] - means[(30.0, "RS")]
    dominance = all(r >= n for r, n in zip(rs, nors))
    ok = nors_gain <= 0.4 and rs_gain >= 1.0 and dominance
    report(
        "criterion 4 (overloaded saturation)",
        ok,
        f"NoRS 30->40dB gain {nors_gain:.3f} (<=0.4), RS gain {rs_gain:.3f} (>=1.0), "
        f"RS>=NoRS everywhere: {dominance}",
        started,
        budget_s=3600.0,
    )


def test_criterion_5_nulling_achievability():
    started = time.perf_counter()
    worst_leak = 0.0
    for seed in range(5):
        cfg = SystemConfig(3, ((0, 1), (2, 3)), 1.0, 1e3)
        ch = generate_channels(3, 4, seed)
        pre = dof.nulling_precoders(cfg, ch)
        assert pre is not None, "nulling infeasible at the antenna threshold"
        for m, group in enumerate(cfg.groups):
            others = [i for i in range(cfg.n_users) if i not in group]
            h = ch.vectors[others]
            leak = np.abs(h.conj() @ pre.designated[m]) / (
                np.linalg.norm(h, axis=1) * np.linalg.norm(pre.designated[m])
            )
            worst_leak = max(worst_leak, float(leak.max()))

    ec = ExperimentConfig(
        system=SystemTemplate(3, ((0, 1), (2, 3))),
        snr_grid_db=(30.0, 40.0),
        n_realizations=24,
        strategies=(Strategy.NORS,),
        master_seed=7,
    )
    means = run_sweep(ec).mean_rates()
    curve = [(10.0 ** (snr / 10.0), means[(snr, "NoRS")]) for snr in (30.0, 40.0)]
    slope = dof.empirical_dof(curve)
    ok = worst_leak <= 1e-9 and slope >= 0.85
    report(
        "criterion 5 (nulling achievability)",
        ok,
        f"max residual {worst_leak:.2e} (<=1e-9), NoRS slope {slope:.3f} (>=0.85)",
        started,
        budget_s=300.0,
    )


def test_criterion_6_partial_loading():
    started = time.perf_counter()
    ec = ExperimentConfig(
        system=SystemTemplate(4, ((0, 1, 2), (3, 4, 5), (6, 7, 8))),
        snr_grid_db=SNR_GRID,
        n_realizations=25,
        strategies=(Strategy.RS, Strategy.SS),
        ao=AoConfig(max_iters=2000),
        master_seed=99,
    )
    means = run_sweep(ec).mean_rates()
    curves = {
        s: [(10.0 ** (snr / 10.0), means[(snr, s)]) for snr in SNR_GRID]
        for s in ("RS", "SS")
    }
    ss_slope = dof.empirical_dof(curves["SS"])
    rs_slope = dof.empirical_dof(curves["RS"])
    low_snr_ok = all(means[(snr, "RS")] >= means[(snr, "SS")] for snr in (0.0, 5.0, 10.0))
    ok = (1 / 3 - 0.1 <= ss_slope <= 1 / 3 + 0.1) and rs_slope >= 1 / 3 - 0.1 and low_snr_ok
    report(
        "criterion 6 (partial loading)",
        ok,
        f"SS slope {ss_slope:.3f} (in [0.233, 0.433]), RS slope {rs_slope:.3f} (>=0.233), "
        f"RS>=SS at 0-10dB: {low_snr_ok}",
        started,
        budget_s=5400.0,
    )


def test_criterion_7_antenna_threshold_values():
    started = time.perf_counter()
    values = (
        dof.n_min(SystemConfig(2, ((0, 1), (2, 3)))),
        dof.n_min(SystemConfig(4, ((0, 1, 2), (3, 4, 5), (6, 7, 8)))),
        dof.n_min(SystemConfig(1, ((0,),))),
    )
    report(
        "criterion 7 (antenna threshold)",
        values == (3, 7, 1),
        f"(K=4,G=2)->{values[0]}, (K=9,G=3)->{values[1]}, (K=G)->{values[2]}",
        started,
        budget_s=5.0,
    )


def test_criterion_8_csv_determinism(tmp_path):
    started = time.perf_counter()
    ec = ExperimentConfig(
        system=SystemTemplate(2, ((0, 1), (2, 3))),
        snr_grid_db=(0.0, 20.0),
        n_realizations=3,
        strategies=(Strategy.RS, Strategy.NORS, Strategy.SS),
        ao=AoConfig(max_iters=100),
        master_seed=31,
        n_starts=2,
    )
    first = persist(run_sweep(ec), tmp_path / "a.csv").read_bytes()
    second = persist(run_sweep(ec), tmp_path / "b.csv").read_bytes()
    report(
        "criterion 8 (CSV determinism)",
        first == second,
        f"{len(first)} bytes, identical across two runs: {first == second}",
        started,
        budget_s=300.0,
    )
