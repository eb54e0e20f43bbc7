"""Alternating optimization of the precoders via the weighted-MMSE loop.

One iteration updates the scalar equalizers to their MMSE values, the
weights to the reciprocal MMSEs, and then re-solves the convex precoder
subproblem; the surrogate objective is non-decreasing and bounded, so the
loop stops once its increments fall below a threshold. The same driver
covers the rate-splitting scheme and both baselines through the mode tag.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import subproblem
from .model import (
    ChannelSet,
    PrecoderSet,
    Strategy,
    SystemConfig,
    check_dimensions,
    mmf_objective,
    rates,
)
from .subproblem import SubproblemSolution, SubproblemSpec
from .wmmse import mmse_equalizers, mmse_errors, mmse_weights


class InitScheme(str, Enum):
    MRT_EQUAL_POWER = "MRT_equal_power"
    RANDOM_GAUSSIAN = "random_gaussian"


@dataclass(frozen=True)
class AoConfig:
    epsilon: float = 1e-4  # stop when the surrogate objective moves less than this
    max_iters: int = 200
    init_scheme: InitScheme = InitScheme.MRT_EQUAL_POWER
    mode: Strategy = Strategy.RS
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass(frozen=True)
class RsSolution:
    precoders: PrecoderSet
    common_alloc: np.ndarray
    mmf_rate: float


@dataclass(frozen=True)
class AoResult:
    solution: RsSolution
    iterations: int
    converged: bool
    objective_trace: tuple[float, ...]


class SubproblemFailure(RuntimeError):
    """Precoder update failed even after the rescaling retry."""

    def __init__(self, iteration: int, status: str, last_result: AoResult | None):
        super().__init__(
            f"precoder update failed with status {status!r} at iteration {iteration}"
        )
        self.iteration = iteration
        self.status = status
        self.last_result = last_result


def _unit_direction(v: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        v = rng.standard_normal(v.shape[0]) + 1j * rng.standard_normal(v.shape[0])
        norm = np.linalg.norm(v)
    return v / norm


def initialize(cfg: SystemConfig, ch: ChannelSet, ao: AoConfig) -> PrecoderSet:
    """Starting precoders with the power budget met with equality."""
    check_dimensions(cfg, ch)
    rng = np.random.default_rng(ao.seed)
    n, m = cfg.n_tx, cfg.n_groups
    if ao.mode is Strategy.SS:
        n_streams = 1
    elif ao.mode is Strategy.NORS:
        n_streams = m
    else:
        n_streams = m + 1
    share = cfg.power_budget / n_streams

    common = np.zeros(n, complex)
    designated = np.zeros((m, n), complex)
    if ao.init_scheme is InitScheme.RANDOM_GAUSSIAN:
        if ao.mode is not Strategy.NORS:
            common = np.sqrt(share) * _unit_direction(
                rng.standard_normal(n) + 1j * rng.standard_normal(n), rng
            )
        if ao.mode is not Strategy.SS:
            for g in range(m):
                designated[g] = np.sqrt(share) * _unit_direction(
                    rng.standard_normal(n) + 1j * rng.standard_normal(n), rng
                )
        return PrecoderSet(common, designated)

    if ao.mode is not Strategy.NORS:
        # common beam along the dominant direction of the channel second moment
        second_moment = ch.vectors.T @ ch.vectors.conj()
        eigvals, eigvecs = np.linalg.eigh(second_moment)
        direction = eigvecs[:, -1] if eigvals[-1] > 1e-12 else np.zeros(n, complex)
        common = np.sqrt(share) * _unit_direction(direction, rng)
    if ao.mode is not Strategy.SS:
        for g in range(m):
            summed = ch.vectors[list(cfg.groups[g])].sum(axis=0)
            designated[g] = np.sqrt(share) * _unit_direction(summed, rng)
    return PrecoderSet(common, designated)


def _precoder_update(
    cfg: SystemConfig, ch: ChannelSet, pre: PrecoderSet, mode: Strategy
) -> SubproblemSolution:
    """MMSE equalizer/weight refresh followed by the conic solve, with one retry.

    On a numerical failure the channels are rescaled to unit peak norm with
    the noise power rescaled to match; rates and MSE weights are invariant
    under that joint rescaling, and the returned precoders apply unchanged.
    """

    def run(cfg_s: SystemConfig, ch_s: ChannelSet) -> SubproblemSolution:
        eq = mmse_equalizers(cfg_s, ch_s, pre)
        eps_c, eps_d = mmse_errors(cfg_s, ch_s, pre)
        wt = mmse_weights(eps_c, eps_d)
        return subproblem.solve(SubproblemSpec(cfg_s, ch_s, eq, wt, mode))

    sol = run(cfg, ch)
    if sol.solver_status in ("optimal", "near_optimal"):
        return sol
    peak = float(np.max(np.linalg.norm(ch.vectors, axis=1)))
    if peak <= 0:
        return sol
    scale = 1.0 / peak
    cfg_scaled = replace(cfg, noise_power=cfg.noise_power * scale * scale)
    return run(cfg_scaled, ChannelSet(ch.vectors * scale))


def _finalize(
    cfg: SystemConfig,
    ch: ChannelSet,
    pre: PrecoderSet,
    alloc: np.ndarray,
    trace: list[float],
    iterations: int,
    converged: bool,
) -> AoResult:
    # report rates from the exact expressions, with the common-rate split
    # re-projected so it never claims more than the achievable common rate
    alloc = np.clip(np.asarray(alloc, dtype=float), 0.0, None)
    total = alloc.sum()
    if total > 0:
        common_rate = float(rates(cfg, ch, pre).common_user_rates.min())
        if common_rate <= 0:
            alloc = np.zeros_like(alloc)
        elif total > common_rate:
            alloc = alloc * (common_rate / total)
    breakdown = rates(cfg, ch, pre, alloc)
    return AoResult(
        solution=RsSolution(pre, alloc, mmf_objective(breakdown)),
        iterations=iterations,
        converged=converged,
        objective_trace=tuple(trace),
    )


def solve(cfg: SystemConfig, ch: ChannelSet, ao: AoConfig) -> AoResult:
    """Run the alternating loop until the surrogate objective settles."""
    check_dimensions(cfg, ch)
    pre = initialize(cfg, ch, ao)
    alloc = np.zeros(cfg.n_groups)
    trace: list[float] = []
    previous = 0.0
    converged = False
    iterations = 0
    for iterations in range(1, ao.max_iters + 1):
        sol = _precoder_update(cfg, ch, pre, ao.mode)
        if sol.solver_status not in ("optimal", "near_optimal"):
            last = (
                _finalize(cfg, ch, pre, alloc, trace, iterations - 1, False)
                if trace
                else None
            )
            raise SubproblemFailure(iterations, sol.solver_status, last)
        pre, alloc = sol.precoders, sol.common_alloc
        trace.append(sol.objective)
        if abs(sol.objective - previous) < ao.epsilon:
            converged = True
            break
        previous = sol.objective
    return _finalize(cfg, ch, pre, alloc, trace, iterations, converged)


def best_of_starts(
    cfg: SystemConfig, ch: ChannelSet, ao: AoConfig, n_starts: int = 3
) -> tuple[AoResult, int]:
    """Best of several seeded starts: the configured scheme first, then
    random directions with derived seeds. Returns the winner and its index."""
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    best: AoResult | None = None
    best_start = 0
    for start in range(n_starts):
        cfg_start = ao if start == 0 else replace(
            ao, init_scheme=InitScheme.RANDOM_GAUSSIAN, seed=derive_seed(ao.seed, start)
        )
        result = solve(cfg, ch, cfg_start)
        if best is None or result.solution.mmf_rate > best.solution.mmf_rate:
            best, best_start = result, start
    return best, best_start


def derive_seed(seed: int, index: int) -> int:
    """Stateless seed mixing (splitmix64 finalizer) for reproducible parallelism."""
    mask = (1 << 64) - 1
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & mask
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return (z ^ (z >> 31)) & mask
