"""High-SNR analysis: antenna thresholds, interference nulling, rate slopes.

With equal group sizes, full inter-group nulling needs at least
``1 + K - G`` transmit antennas; below that threshold the conventional
scheme's worst-group rate saturates while splitting off a common stream
keeps at least a ``1/M`` slope. The slope of measured rate-versus-power
curves is estimated here to check those predictions empirically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import ChannelSet, PrecoderSet, Strategy, SystemConfig, check_dimensions

NULL_RESIDUAL_TOL = 1e-9  # relative inner-product leakage allowed for a nulled beam
RANK_TOL = 1e-10  # singular values below this fraction of the largest count as zero


@dataclass(frozen=True)
class DofReport:
    """Measured high-SNR slope next to the predicted value for one strategy."""

    n_min: int
    overloaded: bool
    empirical_slope: float
    predicted_dof: float
    strategy: Strategy


def n_min(cfg: SystemConfig) -> int:
    """Minimum antenna count for full inter-group nulling (equal groups only)."""
    size = cfg.equal_group_size()
    if size is None:
        raise ValueError("the antenna threshold is defined for equal-size groups only")
    return 1 + cfg.n_users - size


def nulling_precoders(cfg: SystemConfig, ch: ChannelSet) -> PrecoderSet | None:
    """Beams placed in the null space of every unintended group's channels.

    Each beam carries an equal share of the power budget and is steered
    toward its group within the feasible null space. Returns None when any
    null space is empty, i.e. nulling is infeasible at this antenna count.
    """
    check_dimensions(cfg, ch)
    designated = np.zeros((cfg.n_groups, cfg.n_tx), complex)
    share = cfg.power_budget / cfg.n_groups
    for m, group in enumerate(cfg.groups):
        others = [i for i in range(cfg.n_users) if i not in group]
        if others:
            # rows are h_i^H, so the null space holds exactly the unseen beams
            a = ch.vectors[others].conj()
            _, s, vh = np.linalg.svd(a)
            rank = int(np.sum(s > RANK_TOL * s[0])) if s.size else 0
            if rank >= cfg.n_tx:
                return None
            basis = vh[rank:].conj().T  # (N, null-dim), orthonormal columns
        else:
            basis = np.eye(cfg.n_tx, dtype=complex)
        steer = ch.vectors[list(group)].sum(axis=0)
        beam = basis @ (basis.conj().T @ steer)
        if np.linalg.norm(beam) < 1e-12:
            beam = basis[:, 0]
        designated[m] = np.sqrt(share) * beam / np.linalg.norm(beam)
    return PrecoderSet(np.zeros(cfg.n_tx, complex), designated)


def empirical_dof(rate_curve: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of rate against log2(power) over the top half
    of the power grid, where the asymptotic behaviour dominates."""
    if len(rate_curve) < 2:
        raise ValueError("need at least two (power, rate) points")
    powers = np.array([p for p, _ in rate_curve], dtype=float)
    values = np.array([r for _, r in rate_curve], dtype=float)
    if np.any(np.diff(powers) <= 0):
        raise ValueError("powers must be strictly ascending")
    if powers[-1] < 1e3:
        raise ValueError("largest power must reach 1e3 for a meaningful slope")
    keep = max(2, (len(rate_curve) + 1) // 2)
    x = np.log2(powers[-keep:])
    y = values[-keep:]
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def predicted_dof(cfg: SystemConfig, strategy: Strategy) -> float:
    """Slope predicted (or lower-bounded, for the splitting scheme) by theory."""
    threshold = n_min(cfg)
    if strategy is Strategy.SS:
        return 1.0 / cfg.n_groups
    if cfg.n_tx >= threshold:
        return 1.0
    return 0.0 if strategy is Strategy.NORS else 1.0 / cfg.n_groups


def report(
    cfg: SystemConfig, strategy: Strategy, rate_curve: Sequence[tuple[float, float]]
) -> DofReport:
    threshold = n_min(cfg)
    return DofReport(
        n_min=threshold,
        overloaded=cfg.n_tx < threshold,
        empirical_slope=empirical_dof(rate_curve),
        predicted_dof=predicted_dof(cfg, strategy),
        strategy=strategy,
    )
