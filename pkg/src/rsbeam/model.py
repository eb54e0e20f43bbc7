"""Signal-level model of the multigroup multicast downlink.

Holds the static system description (antennas, user grouping, noise, power
budget), channel vectors, precoders, and the closed-form receive powers,
SINRs and rates for both the designated beams and the optional common
stream. Everything here is a pure function of its inputs; all containers
are immutable after construction and safe to share between workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

LOG2 = np.log(2.0)


class Strategy(str, Enum):
    """Transmit strategy: which streams carry data."""

    RS = "RS"  # common stream + designated beams, common part removed by SIC
    NORS = "NoRS"  # designated beams only, all interference treated as noise
    SS = "SS"  # single common stream decoded by every user

    @classmethod
    def parse(cls, name: str) -> "Strategy":
        key = str(name).strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown strategy {name!r}; expected one of rs, nors, ss")


@dataclass(frozen=True)
class SystemConfig:
    """Antenna count, user grouping, noise power and transmit power budget.

    ``groups`` is an ordered partition of the user indices 0..K-1; users are
    0-indexed. Noise and power are linear (not dB).
    """

    n_tx: int
    groups: tuple[tuple[int, ...], ...]
    noise_power: float = 1.0
    power_budget: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "groups", tuple(tuple(int(i) for i in g) for g in self.groups)
        )
        if self.n_tx < 1:
            raise ValueError("n_tx must be a positive integer")
        if not self.groups:
            raise ValueError("at least one group is required")
        if any(len(g) == 0 for g in self.groups):
            raise ValueError("groups must be non-empty")
        members = sorted(i for g in self.groups for i in g)
        if members != list(range(len(members))):
            raise ValueError("groups must be disjoint and cover users 0..K-1")
        if not self.noise_power > 0:
            raise ValueError("noise_power must be positive")
        if not self.power_budget > 0:
            raise ValueError("power_budget must be positive")

    @cached_property
    def n_users(self) -> int:
        return sum(len(g) for g in self.groups)

    @cached_property
    def n_groups(self) -> int:
        return len(self.groups)

    @cached_property
    def user_group(self) -> np.ndarray:
        """Map from user index to the index of the group containing it."""
        mu = np.empty(self.n_users, dtype=np.intp)
        for m, g in enumerate(self.groups):
            mu[list(g)] = m
        return mu

    def equal_group_size(self) -> int | None:
        """Common group size, or None when the groups are unequal."""
        sizes = {len(g) for g in self.groups}
        return sizes.pop() if len(sizes) == 1 else None


@dataclass(frozen=True)
class ChannelSet:
    """One complex channel vector per user, stacked as rows of a (K, N) array."""

    vectors: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.vectors, dtype=np.complex128)
        if v.ndim != 2:
            raise ValueError("channel vectors must form a (K, N) array")
        object.__setattr__(self, "vectors", v)

    @property
    def n_users(self) -> int:
        return self.vectors.shape[0]

    @property
    def n_tx(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class PrecoderSet:
    """Common precoder plus one designated precoder per group.

    A pure-beamforming (no common stream) solution is represented by an
    all-zero common precoder.
    """

    common: np.ndarray
    designated: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.common, dtype=np.complex128)
        d = np.asarray(self.designated, dtype=np.complex128)
        if c.ndim != 1 or d.ndim != 2 or d.shape[1] != c.shape[0]:
            raise ValueError("precoders must be a (N,) common and (M, N) designated array")
        object.__setattr__(self, "common", c)
        object.__setattr__(self, "designated", d)

    @classmethod
    def zeros(cls, n_tx: int, n_groups: int) -> "PrecoderSet":
        return cls(np.zeros(n_tx, complex), np.zeros((n_groups, n_tx), complex))

    def total_power(self) -> float:
        return float(
            np.sum(np.abs(self.common) ** 2) + np.sum(np.abs(self.designated) ** 2)
        )


class ReceivePowers(NamedTuple):
    """Per-user receive-power split; scalars or (K,) arrays."""

    signal: np.ndarray  # own designated beam
    interference: np.ndarray  # other designated beams + noise
    total: np.ndarray  # signal + interference
    common_signal: np.ndarray  # common beam
    common_total: np.ndarray  # common_signal + total


@dataclass(frozen=True)
class RateBreakdown:
    """Exact per-user, common and per-group rates in bits per channel use."""

    user_rates: np.ndarray
    common_user_rates: np.ndarray
    common_rate: float
    group_rates: np.ndarray
    common_alloc: np.ndarray

    def __post_init__(self) -> None:
        alloc = np.asarray(self.common_alloc, dtype=float)
        if np.any(alloc < 0):
            raise ValueError("common-rate allocations must be non-negative")
        slack = 1e-9 * (1.0 + abs(self.common_rate))
        if alloc.sum() > self.common_rate + slack:
            raise ValueError("common-rate allocations exceed the achievable common rate")
        object.__setattr__(self, "common_alloc", alloc)


def check_dimensions(cfg: SystemConfig, ch: ChannelSet, pre: PrecoderSet | None = None) -> None:
    if ch.n_users != cfg.n_users or ch.n_tx != cfg.n_tx:
        raise ValueError(
            f"channel set is {ch.n_users}x{ch.n_tx}, expected {cfg.n_users}x{cfg.n_tx}"
        )
    if pre is not None:
        if pre.common.shape[0] != cfg.n_tx or pre.designated.shape != (cfg.n_groups, cfg.n_tx):
            raise ValueError("precoder dimensions do not match the system configuration")


def all_receive_powers(cfg: SystemConfig, ch: ChannelSet, pre: PrecoderSet) -> ReceivePowers:
    """Receive-power split for every user at once."""
    check_dimensions(cfg, ch, pre)
    h = ch.vectors
    beam_pow = np.abs(h.conj() @ pre.designated.T) ** 2  # (K, M): |h_k^H p_m|^2
    own = np.arange(cfg.n_users), cfg.user_group
    signal = beam_pow[own]
    others = beam_pow.copy()
    others[own] = 0.0  # summing the cross beams directly keeps I >= noise exactly
    interference = others.sum(axis=1) + cfg.noise_power
    total = signal + interference
    common_signal = np.abs(h.conj() @ pre.common) ** 2
    return ReceivePowers(signal, interference, total, common_signal, common_signal + total)


def receive_powers(cfg: SystemConfig, ch: ChannelSet, pre: PrecoderSet, k: int) -> ReceivePowers:
    """Receive-power split (S, I, T, S_c, T_c) for user ``k``."""
    if not 0 <= k < cfg.n_users:
        raise ValueError(f"user index {k} out of range 0..{cfg.n_users - 1}")
    pw = all_receive_powers(cfg, ch, pre)
    return ReceivePowers(*(float(a[k]) for a in pw))


def rates(
    cfg: SystemConfig,
    ch: ChannelSet,
    pre: PrecoderSet,
    common_alloc: Sequence[float] | np.ndarray | None = None,
) -> RateBreakdown:
    """Exact rates under Gaussian signalling, with interference as noise.

    The common stream is decoded first by every user (treating all
    designated beams as noise) and removed, so designated SINRs see only
    the other groups' beams.
    """
    pw = all_receive_powers(cfg, ch, pre)
    user_rates = np.log1p(pw.signal / pw.interference) / LOG2
    common_user_rates = np.log1p(pw.common_signal / pw.total) / LOG2
    common_rate = float(common_user_rates.min())
    if common_alloc is None:
        alloc = np.zeros(cfg.n_groups)
    else:
        alloc = np.asarray(common_alloc, dtype=float)
        if alloc.shape != (cfg.n_groups,):
            raise ValueError("common_alloc must have one entry per group")
    worst_designated = np.array([user_rates[list(g)].min() for g in cfg.groups])
    return RateBreakdown(
        user_rates=user_rates,
        common_user_rates=common_user_rates,
        common_rate=common_rate,
        group_rates=alloc + worst_designated,
        common_alloc=alloc,
    )


def mmf_objective(breakdown: RateBreakdown) -> float:
    """Worst group rate: the quantity every design here maximizes."""
    return float(np.min(breakdown.group_rates))
