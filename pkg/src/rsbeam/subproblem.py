"""Precoder update: the convex program solved with equalizers and weights fixed.

With equalizers and weights frozen, each weighted MSE is a convex quadratic
in the stacked precoders, so maximizing the worst group rate becomes a
second-order-cone program over the real embedding of the complex precoders
together with epigraph variables: the worst group rate, one designated-rate
auxiliary per group, and the common-rate split.

Variable layout (all real): the embedded common precoder when the mode has
a common stream, then the embedded designated precoders when it has
designated beams, then the worst-group-rate variable, then the per-group
designated-rate auxiliaries, then the common-rate split. Pinned streams
(the common one under NoRS, the designated ones under SS) are dropped from
the program and reinstated as zeros in the solution, which keeps solution
objects shape-uniform across modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .model import ChannelSet, PrecoderSet, Strategy, SystemConfig, check_dimensions
from .socp import DEFAULT_TOL, ConicProgram, SocConstraint, solve_conic
from .wmmse import EqualizerSet, WeightSet


@dataclass(frozen=True)
class SubproblemSpec:
    cfg: SystemConfig
    ch: ChannelSet
    eq: EqualizerSet
    wt: WeightSet
    mode: Strategy


@dataclass(frozen=True)
class SubproblemSolution:
    precoders: PrecoderSet
    common_alloc: np.ndarray  # (M,) common-rate split, zeros when pinned
    group_aux: np.ndarray  # (M,) designated-rate auxiliaries, zeros when pinned
    objective: float
    solver_status: str


def embed_complex(v: np.ndarray) -> np.ndarray:
    """Complex vector -> stacked [real; imag] vector."""
    v = np.asarray(v, dtype=np.complex128)
    return np.concatenate([v.real, v.imag])


def extract_complex(x: np.ndarray) -> np.ndarray:
    """Inverse of :func:`embed_complex`."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0] // 2
    return x[:n] + 1j * x[n:]


@dataclass(frozen=True)
class VariableLayout:
    """Column bookkeeping for one mode's conic program."""

    n_tx: int
    n_groups: int
    mode: Strategy

    @property
    def has_common(self) -> bool:
        return self.mode is not Strategy.NORS

    @property
    def has_designated(self) -> bool:
        return self.mode is not Strategy.SS

    @property
    def n_streams(self) -> int:
        return (1 if self.has_common else 0) + (self.n_groups if self.has_designated else 0)

    @cached_property
    def precoder_cols(self) -> slice:
        return slice(0, 2 * self.n_tx * self.n_streams)

    def common_cols(self) -> slice | None:
        return slice(0, 2 * self.n_tx) if self.has_common else None

    def designated_cols(self, m: int) -> slice | None:
        if not self.has_designated:
            return None
        base = 2 * self.n_tx * ((1 if self.has_common else 0) + m)
        return slice(base, base + 2 * self.n_tx)

    @cached_property
    def rate_col(self) -> int:
        return 2 * self.n_tx * self.n_streams

    def group_aux_col(self, m: int) -> int | None:
        return self.rate_col + 1 + m if self.has_designated else None

    def alloc_col(self, m: int) -> int | None:
        if not self.has_common:
            return None
        base = self.rate_col + 1 + (self.n_groups if self.has_designated else 0)
        return base + m

    @cached_property
    def n_vars(self) -> int:
        aux = self.n_groups if self.has_designated else 0
        alloc = self.n_groups if self.has_common else 0
        return 2 * self.n_tx * self.n_streams + 1 + aux + alloc


def variable_layout(cfg: SystemConfig, mode: Strategy) -> VariableLayout:
    return VariableLayout(cfg.n_tx, cfg.n_groups, mode)


def _place_complex_rows(rows: np.ndarray, pair: int, a: np.ndarray, cols: slice) -> None:
    """Write the real/imag rows of the functional p -> a @ p at the given columns."""
    n = a.shape[0]
    rows[2 * pair, cols.start : cols.start + n] = a.real
    rows[2 * pair, cols.start + n : cols.stop] = -a.imag
    rows[2 * pair + 1, cols.start : cols.start + n] = a.imag
    rows[2 * pair + 1, cols.start + n : cols.stop] = a.real


def _wmse_soc(
    lay: VariableLayout,
    h_row: np.ndarray,
    g: complex,
    u: float,
    sigma: float,
    streams: list[slice],
    own_stream_cols: slice | None,
    rhs_cols: list[int],
) -> SocConstraint:
    """One weighted-MSE constraint u*eps + sum(rhs vars) <= 1 + log2(u) as a SOC.

    eps is a sum of squared magnitudes of g * h^H p_j terms over the streams
    the receiver has not cancelled (the own stream carries a -1 offset) plus
    the g-scaled noise, so u*eps = ||z||^2 with z affine in the variables;
    ||z||^2 <= t maps to ||(2z, t-1)|| <= t + 1.
    """
    su = math.sqrt(u)
    a = g * h_row.conj()  # complex row functional: p -> g * (h^H p)
    f = np.zeros((2 * len(streams) + 1, lay.n_vars))
    f0 = np.zeros(2 * len(streams) + 1)
    for j, cols in enumerate(streams):
        _place_complex_rows(f, j, su * a, cols)
        if own_stream_cols is not None and cols == own_stream_cols:
            f0[2 * j] = -su
    f0[-1] = su * abs(g) * sigma  # constant noise term, no variable row

    t_row = np.zeros(lay.n_vars)
    for col in rhs_cols:
        t_row[col] = -1.0
    t0 = 1.0 + math.log2(u)
    return SocConstraint(
        a_mat=np.vstack([2.0 * f, t_row[None, :]]),
        b_vec=np.concatenate([2.0 * f0, [t0 - 1.0]]),
        c_vec=t_row,
        d=t0 + 1.0,
    )


def build(spec: SubproblemSpec) -> ConicProgram:
    """Assemble the fixed-(equalizer, weight) program as an explicit SOCP."""
    cfg, ch = spec.cfg, spec.ch
    check_dimensions(cfg, ch)
    lay = variable_layout(cfg, spec.mode)
    sigma = math.sqrt(cfg.noise_power)
    mu = cfg.user_group

    socs: list[SocConstraint] = []
    designated_streams = (
        [lay.designated_cols(m) for m in range(cfg.n_groups)] if lay.has_designated else []
    )
    if lay.has_designated:
        # the designated MSE sees no common-stream power (SIC removed it),
        # so only the designated columns enter these cones
        for k in range(cfg.n_users):
            socs.append(
                _wmse_soc(
                    lay,
                    ch.vectors[k],
                    complex(spec.eq.designated[k]),
                    float(spec.wt.designated[k]),
                    sigma,
                    streams=designated_streams,
                    own_stream_cols=lay.designated_cols(int(mu[k])),
                    rhs_cols=[lay.group_aux_col(int(mu[k]))],
                )
            )
    if lay.has_common:
        alloc_cols = [lay.alloc_col(m) for m in range(cfg.n_groups)]
        for k in range(cfg.n_users):
            socs.append(
                _wmse_soc(
                    lay,
                    ch.vectors[k],
                    complex(spec.eq.common[k]),
                    float(spec.wt.common[k]),
                    sigma,
                    streams=[lay.common_cols()] + designated_streams,
                    own_stream_cols=lay.common_cols(),
                    rhs_cols=alloc_cols,
                )
            )

    # total transmit power: one SOC over the embedded precoders
    pre_cols = lay.precoder_cols
    eye = np.zeros((pre_cols.stop, lay.n_vars))
    eye[:, pre_cols] = np.eye(pre_cols.stop)
    socs.append(
        SocConstraint(eye, np.zeros(pre_cols.stop), np.zeros(lay.n_vars), math.sqrt(cfg.power_budget))
    )

    ineq_rows: list[np.ndarray] = []
    for m in range(cfg.n_groups):
        # worst group rate <= split + designated auxiliary
        row = np.zeros(lay.n_vars)
        row[lay.rate_col] = 1.0
        if lay.has_designated:
            row[lay.group_aux_col(m)] = -1.0
        if lay.has_common:
            row[lay.alloc_col(m)] = -1.0
        ineq_rows.append(row)
    if lay.has_common:
        for m in range(cfg.n_groups):
            row = np.zeros(lay.n_vars)
            row[lay.alloc_col(m)] = -1.0  # split entries stay non-negative
            ineq_rows.append(row)

    objective = np.zeros(lay.n_vars)
    objective[lay.rate_col] = 1.0
    return ConicProgram(
        n_vars=lay.n_vars,
        objective=objective,
        socs=tuple(socs),
        ineq_mat=np.vstack(ineq_rows),
        ineq_rhs=np.zeros(len(ineq_rows)),
    )


def solve(spec: SubproblemSpec, tol: float = DEFAULT_TOL) -> SubproblemSolution:
    """Build and solve the program, mapping the primal point back to precoders."""
    cfg = spec.cfg
    lay = variable_layout(cfg, spec.mode)
    sol = solve_conic(build(spec), tol=tol)
    if sol.x is None:
        return SubproblemSolution(
            PrecoderSet.zeros(cfg.n_tx, cfg.n_groups),
            np.zeros(cfg.n_groups),
            np.zeros(cfg.n_groups),
            float("nan"),
            sol.status,
        )
    x = sol.x
    common = (
        extract_complex(x[lay.common_cols()]) if lay.has_common else np.zeros(cfg.n_tx, complex)
    )
    designated = np.zeros((cfg.n_groups, cfg.n_tx), complex)
    if lay.has_designated:
        for m in range(cfg.n_groups):
            designated[m] = extract_complex(x[lay.designated_cols(m)])
    group_aux = (
        np.array([x[lay.group_aux_col(m)] for m in range(cfg.n_groups)])
        if lay.has_designated
        else np.zeros(cfg.n_groups)
    )
    alloc = (
        np.array([x[lay.alloc_col(m)] for m in range(cfg.n_groups)])
        if lay.has_common
        else np.zeros(cfg.n_groups)
    )
    # interior-point output can sit a hair below zero; downstream wants >= 0
    alloc = np.clip(alloc, 0.0, None)
    return SubproblemSolution(
        PrecoderSet(common, designated),
        alloc,
        group_aux,
        float(x[lay.rate_col]),
        sol.status,
    )
