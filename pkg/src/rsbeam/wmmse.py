"""MSE layer linking achievable rates to weighted-MSE surrogates.

Each user runs a scalar equalizer per stream; the resulting MSEs are
quadratic in the precoders. Minimizing the weighted MSE plus the weight's
log-penalty over equalizer and weight recovers one minus the achievable
rate, which is the identity the alternating optimization exploits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    LOG2,
    ChannelSet,
    PrecoderSet,
    SystemConfig,
    all_receive_powers,
    check_dimensions,
    rates,
)

MSE_FLOOR = 1e-12  # smallest MSE a weight may invert
WEIGHT_FLOOR = 1.0  # MMSE values never exceed 1, so optimal weights never drop below 1
WEIGHT_CAP = 1.0 / MSE_FLOOR


@dataclass(frozen=True)
class EqualizerSet:
    """Scalar receive equalizers, one pair (common, designated) per user."""

    common: np.ndarray
    designated: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.common, dtype=np.complex128)
        d = np.asarray(self.designated, dtype=np.complex128)
        if c.shape != d.shape or c.ndim != 1:
            raise ValueError("equalizer arrays must both have shape (K,)")
        object.__setattr__(self, "common", c)
        object.__setattr__(self, "designated", d)


@dataclass(frozen=True)
class WeightSet:
    """Strictly positive MSE weights, one pair per user."""

    common: np.ndarray
    designated: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.common, dtype=float)
        d = np.asarray(self.designated, dtype=float)
        if c.shape != d.shape or c.ndim != 1:
            raise ValueError("weight arrays must both have shape (K,)")
        if np.any(c <= 0) or np.any(d <= 0):
            raise ValueError("weights must be strictly positive")
        object.__setattr__(self, "common", c)
        object.__setattr__(self, "designated", d)


def _stream_inner_products(ch: ChannelSet, pre: PrecoderSet, mu: np.ndarray):
    """h_k^H p_c and h_k^H p_{mu(k)} for all users."""
    hc = ch.vectors.conj()
    common = hc @ pre.common
    own = (hc * pre.designated[mu]).sum(axis=1)
    return common, own


def mse(
    cfg: SystemConfig, ch: ChannelSet, pre: PrecoderSet, eq: EqualizerSet, k: int
) -> tuple[float, float]:
    """MSEs (common, designated) at user ``k`` under the given equalizers."""
    check_dimensions(cfg, ch, pre)
    pw = all_receive_powers(cfg, ch, pre)
    common_ip, own_ip = _stream_inner_products(ch, pre, cfg.user_group)
    g_c, g_d = eq.common[k], eq.designated[k]
    eps_c = abs(g_c) ** 2 * pw.common_total[k] - 2 * (g_c * common_ip[k]).real + 1.0
    eps_d = abs(g_d) ** 2 * pw.total[k] - 2 * (g_d * own_ip[k]).real + 1.0
    return float(eps_c), float(eps_d)


def mmse_equalizers(cfg: SystemConfig, ch: ChannelSet, pre: PrecoderSet) -> EqualizerSet:
    """MSE-minimizing scalar equalizers for every user and stream."""
    check_dimensions(cfg, ch, pre)
    pw = all_receive_powers(cfg, ch, pre)
    common_ip, own_ip = _stream_inner_products(ch, pre, cfg.user_group)
    return EqualizerSet(common_ip.conj() / pw.common_total, own_ip.conj() / pw.total)


def mmse_errors(cfg: SystemConfig, ch: ChannelSet, pre: PrecoderSet):
    """Closed-form minimum MSEs: interference-plus-noise over total power."""
    pw = all_receive_powers(cfg, ch, pre)
    return pw.total / pw.common_total, pw.interference / pw.total


def mmse_weights(eps_common: np.ndarray, eps_designated: np.ndarray) -> WeightSet:
    """Reciprocal-MMSE weights, clamped to keep the conic data well-scaled."""
    eps_c = np.asarray(eps_common, dtype=float)
    eps_d = np.asarray(eps_designated, dtype=float)
    if np.any(eps_c <= 0) or np.any(eps_d <= 0):
        raise ValueError("MMSE values must be strictly positive")
    return WeightSet(
        np.clip(1.0 / eps_c, WEIGHT_FLOOR, WEIGHT_CAP),
        np.clip(1.0 / eps_d, WEIGHT_FLOOR, WEIGHT_CAP),
    )


def augmented_wmse(eps, u):
    """Weighted MSE minus the log-weight bonus: u * eps - log2(u)."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise ValueError("weights must be strictly positive")
    out = u * np.asarray(eps, dtype=float) - np.log(u) / LOG2
    return float(out) if out.ndim == 0 else out


def rate_wmmse_check(cfg: SystemConfig, ch: ChannelSet, pre: PrecoderSet) -> float:
    """Largest gap between the minimized weighted MSEs and one minus the rates.

    Evaluates the MSEs through the quadratic forms at the MMSE equalizers
    with exact reciprocal weights, so a gap beyond rounding noise indicates
    an implementation bug rather than a modelling choice.
    """
    check_dimensions(cfg, ch, pre)
    pw = all_receive_powers(cfg, ch, pre)
    common_ip, own_ip = _stream_inner_products(ch, pre, cfg.user_group)
    eq = mmse_equalizers(cfg, ch, pre)
    eps_c = np.abs(eq.common) ** 2 * pw.common_total - 2 * (eq.common * common_ip).real + 1.0
    eps_d = np.abs(eq.designated) ** 2 * pw.total - 2 * (eq.designated * own_ip).real + 1.0
    xi_c = augmented_wmse(eps_c, 1.0 / eps_c)
    xi_d = augmented_wmse(eps_d, 1.0 / eps_d)
    bd = rates(cfg, ch, pre)
    gap_c = np.abs(xi_c - (1.0 - bd.common_user_rates))
    gap_d = np.abs(xi_d - (1.0 - bd.user_rates))
    return float(max(gap_c.max(), gap_d.max()))
