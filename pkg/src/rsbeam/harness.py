"""Monte-Carlo sweeps over SNR and strategies, with reproducible persistence.

One channel set is drawn per realization and reused across every SNR point
and strategy so the curves are paired; seeds derive statelessly from the
master seed, which keeps parallel execution byte-reproducible. The CSV
output is a pure function of the experiment configuration; volatile
wall-clock timing therefore stays out of the rows and is reported in the
metadata sidecar instead.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .ao import AoConfig, InitScheme, SubproblemFailure, best_of_starts, derive_seed
from .model import ChannelSet, Strategy, SystemConfig

CSV_HEADER = "snr_db,realization,strategy,mmf_rate_bits,iterations,converged,wall_time_ms"


@dataclass(frozen=True)
class SystemTemplate:
    """System description without a power budget; the sweep sets the power
    per SNR point as noise_power * 10^(snr_db/10)."""

    n_tx: int
    groups: tuple[tuple[int, ...], ...]
    noise_power: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "groups", tuple(tuple(int(i) for i in g) for g in self.groups)
        )
        # reuse the full validation by instantiating a throwaway config
        self.at_power(1.0)

    @property
    def n_users(self) -> int:
        return sum(len(g) for g in self.groups)

    def at_power(self, power_budget: float) -> SystemConfig:
        return SystemConfig(self.n_tx, self.groups, self.noise_power, power_budget)


@dataclass(frozen=True)
class ExperimentConfig:
    system: SystemTemplate
    snr_grid_db: tuple[float, ...]
    n_realizations: int
    strategies: tuple[Strategy, ...]
    ao: AoConfig = AoConfig()
    master_seed: int = 0
    output_path: str = "sweep.csv"
    n_starts: int = 3

    def __post_init__(self) -> None:
        grid = tuple(float(s) for s in self.snr_grid_db)
        if not grid:
            raise ValueError("snr_grid_db must be non-empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("snr_grid_db must be strictly ascending")
        object.__setattr__(self, "snr_grid_db", grid)
        strategies = tuple(
            s if isinstance(s, Strategy) else Strategy.parse(s) for s in self.strategies
        )
        if not strategies:
            raise ValueError("at least one strategy is required")
        if len(set(strategies)) != len(strategies):
            raise ValueError("strategies must not repeat")
        object.__setattr__(self, "strategies", strategies)
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be at least 1")
        if self.n_starts < 1:
            raise ValueError("n_starts must be at least 1")


@dataclass(frozen=True)
class SweepRow:
    snr_db: float
    realization: int
    strategy: str
    mmf_rate_bits: float
    iterations: int
    converged: bool
    wall_time_ms: int = 0  # reserved: timing would break byte reproducibility


@dataclass
class SweepResult:
    config: ExperimentConfig
    rows: list[SweepRow]
    total_wall_time_ms: int = 0

    def mean_rates(self) -> dict[tuple[float, str], float]:
        """Arithmetic mean rate over realizations per (snr_db, strategy)."""
        sums: dict[tuple[float, str], list[float]] = {}
        for row in self.rows:
            sums.setdefault((row.snr_db, row.strategy), []).append(row.mmf_rate_bits)
        return {key: float(np.mean(vals)) for key, vals in sums.items()}


def generate_channels(n_tx: int, n_users: int, seed: int) -> ChannelSet:
    """Unit-variance complex Gaussian channels from a deterministic stream."""
    rng = np.random.default_rng(seed)
    draw = rng.standard_normal((n_users, n_tx, 2))
    return ChannelSet((draw[..., 0] + 1j * draw[..., 1]) / np.sqrt(2.0))


def _solve_cell(args: tuple[ExperimentConfig, int, float, Strategy]) -> tuple[SweepRow, int]:
    ec, realization, snr_db, strategy = args
    seed_r = derive_seed(ec.master_seed, realization)
    ch = generate_channels(ec.system.n_tx, ec.system.n_users, seed_r)
    power = ec.system.noise_power * 10.0 ** (snr_db / 10.0)
    cfg = ec.system.at_power(power)
    ao = replace(ec.ao, mode=strategy, seed=seed_r)
    started = time.perf_counter()
    try:
        result, _ = best_of_starts(cfg, ch, ao, ec.n_starts)
        row = SweepRow(
            snr_db=snr_db,
            realization=realization,
            strategy=strategy.value,
            mmf_rate_bits=result.solution.mmf_rate,
            iterations=result.iterations,
            converged=result.converged,
        )
    except SubproblemFailure as failure:
        partial = failure.last_result
        row = SweepRow(
            snr_db=snr_db,
            realization=realization,
            strategy=strategy.value,
            mmf_rate_bits=partial.solution.mmf_rate if partial else 0.0,
            iterations=partial.iterations if partial else 0,
            converged=False,
        )
    elapsed_ms = int(round(1000.0 * (time.perf_counter() - started)))
    return row, elapsed_ms


def run_sweep(ec: ExperimentConfig, jobs: int = 1) -> SweepResult:
    """Solve every (snr, realization, strategy) cell; never aborts the sweep."""
    tasks = [
        (ec, realization, snr_db, strategy)
        for snr_db in ec.snr_grid_db
        for realization in range(ec.n_realizations)
        for strategy in ec.strategies
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_solve_cell, tasks, chunksize=4))
    else:
        outcomes = [_solve_cell(task) for task in tasks]
    rows = [row for row, _ in outcomes]
    return SweepResult(ec, rows, total_wall_time_ms=sum(ms for _, ms in outcomes))


def config_to_dict(ec: ExperimentConfig) -> dict:
    return {
        "system": {
            "n_tx": ec.system.n_tx,
            "groups": [list(g) for g in ec.system.groups],
            "noise_power": ec.system.noise_power,
        },
        "snr_grid_db": list(ec.snr_grid_db),
        "n_realizations": ec.n_realizations,
        "strategies": [s.value for s in ec.strategies],
        "ao": {
            "epsilon": ec.ao.epsilon,
            "max_iters": ec.ao.max_iters,
            "init_scheme": ec.ao.init_scheme.value,
        },
        "master_seed": ec.master_seed,
        "output_path": str(ec.output_path),
        "n_starts": ec.n_starts,
    }


def config_from_dict(data: dict) -> ExperimentConfig:
    known = {
        "system",
        "snr_grid_db",
        "n_realizations",
        "strategies",
        "ao",
        "master_seed",
        "output_path",
        "n_starts",
    }
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    missing = {"system", "snr_grid_db", "n_realizations", "strategies"} - set(data)
    if missing:
        raise ValueError(f"missing config keys: {sorted(missing)}")
    system = data["system"]
    if not isinstance(system, dict) or {"n_tx", "groups"} - set(system):
        raise ValueError("system must be an object with n_tx and groups")
    template = SystemTemplate(
        n_tx=int(system["n_tx"]),
        groups=tuple(tuple(g) for g in system["groups"]),
        noise_power=float(system.get("noise_power", 1.0)),
    )
    ao_data = dict(data.get("ao", {}))
    ao_unknown = set(ao_data) - {"epsilon", "max_iters", "init_scheme", "seed"}
    if ao_unknown:
        raise ValueError(f"unknown ao keys: {sorted(ao_unknown)}")
    ao = AoConfig(
        epsilon=float(ao_data.get("epsilon", 1e-4)),
        max_iters=int(ao_data.get("max_iters", 200)),
        init_scheme=InitScheme(ao_data.get("init_scheme", "MRT_equal_power")),
        seed=int(ao_data.get("seed", 0)),
    )
    return ExperimentConfig(
        system=template,
        snr_grid_db=tuple(float(s) for s in data["snr_grid_db"]),
        n_realizations=int(data["n_realizations"]),
        strategies=tuple(Strategy.parse(s) for s in data["strategies"]),
        ao=ao,
        master_seed=int(data.get("master_seed", 0)),
        output_path=str(data.get("output_path", "sweep.csv")),
        n_starts=int(data.get("n_starts", 3)),
    )


def config_from_json(path: str | Path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as err:
            raise ValueError(f"config file {path} is not valid JSON: {err}") from err
    return config_from_dict(data)


def _format_row(row: SweepRow) -> str:
    return ",".join(
        [
            str(float(row.snr_db)),
            str(row.realization),
            row.strategy,
            f"{row.mmf_rate_bits:.6f}",
            str(row.iterations),
            "true" if row.converged else "false",
            str(row.wall_time_ms),
        ]
    )


def meta_path_for(path: str | Path) -> Path:
    return Path(path).with_suffix(".meta.json")


def persist(result: SweepResult, path: str | Path) -> Path:
    """Write the CSV and its metadata sidecar; returns the CSV path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [CSV_HEADER]
    lines.extend(_format_row(row) for row in result.rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    meta = {
        "artifact_version": __version__,
        "config": config_to_dict(result.config),
        "notes": {
            "channel_reuse": "one channel set per realization, reused across all "
            "SNR points and strategies for paired curves",
            "wall_time": "per-cell timing is volatile and excluded from the CSV "
            "to keep it a pure function of the config",
        },
        "total_wall_time_ms": result.total_wall_time_ms,
    }
    meta_path_for(path).write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path


def read_sweep_csv(path: str | Path) -> list[SweepRow]:
    """Parse a persisted CSV back into rows (the persist round trip)."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header in {path}")
    rows = []
    for line in lines[1:]:
        snr, realization, strategy, rate, iters, converged, wall = line.split(",")
        rows.append(
            SweepRow(
                snr_db=float(snr),
                realization=int(realization),
                strategy=strategy,
                mmf_rate_bits=float(rate),
                iterations=int(iters),
                converged=converged == "true",
                wall_time_ms=int(wall),
            )
        )
    return rows
