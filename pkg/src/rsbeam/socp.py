"""Second-order-cone program container and interior-point backend.

A program is a linear objective over one real variable vector, a block of
elementwise linear inequalities, and a list of affine second-order cones
``||A x + b|| <= c.x + d``. The backend translates that data into
Clarabel's (cone list, affine data) form and hands back a primal point and
a status tag; nothing upstream depends on the solver beyond this function.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

import clarabel

DEFAULT_TOL = 1e-8

_STATUS_MAP = {
    "Solved": "optimal",
    "AlmostSolved": "near_optimal",
    "PrimalInfeasible": "infeasible",
    "DualInfeasible": "infeasible",
    "AlmostPrimalInfeasible": "infeasible",
    "AlmostDualInfeasible": "infeasible",
}


@dataclass(frozen=True)
class SocConstraint:
    """||a_mat @ x + b_vec||_2 <= c_vec @ x + d"""

    a_mat: np.ndarray
    b_vec: np.ndarray
    c_vec: np.ndarray
    d: float


@dataclass(frozen=True)
class ConicProgram:
    """maximize (objective @ x) subject to ineq_mat @ x <= ineq_rhs and SOCs."""

    n_vars: int
    objective: np.ndarray
    socs: tuple[SocConstraint, ...]
    ineq_mat: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    ineq_rhs: np.ndarray = field(default_factory=lambda: np.zeros(0))


@dataclass(frozen=True)
class ConicSolution:
    x: np.ndarray | None
    status: str  # optimal | near_optimal | infeasible | numerical_failure
    objective: float | None


def solve_conic(program: ConicProgram, tol: float = DEFAULT_TOL) -> ConicSolution:
    """Solve the program with Clarabel's interior-point method."""
    blocks = []
    rhs = []
    cones = []
    n_ineq = program.ineq_rhs.shape[0]
    if n_ineq:
        # G x <= h  becomes  G x + s = h with s >= 0
        blocks.append(program.ineq_mat)
        rhs.append(program.ineq_rhs)
        cones.append(clarabel.NonnegativeConeT(n_ineq))
    for soc in program.socs:
        # s0 = c.x + d, s_rest = A x + b, (s0, s_rest) in the second-order cone
        blocks.append(-soc.c_vec[None, :])
        rhs.append(np.array([soc.d]))
        blocks.append(-soc.a_mat)
        rhs.append(soc.b_vec)
        cones.append(clarabel.SecondOrderConeT(1 + soc.a_mat.shape[0]))
    a = sp.csc_matrix(np.vstack(blocks)) if blocks else sp.csc_matrix((0, program.n_vars))
    b = np.concatenate(rhs) if rhs else np.zeros(0)

    settings = clarabel.DefaultSettings()
    settings.verbose = False
    settings.tol_gap_abs = tol
    settings.tol_gap_rel = tol
    settings.tol_feas = tol

    solver = clarabel.DefaultSolver(
        sp.csc_matrix((program.n_vars, program.n_vars)),
        -np.asarray(program.objective, dtype=float),
        a,
        b,
        cones,
        settings,
    )
    result = solver.solve()
    status = _STATUS_MAP.get(str(result.status), "numerical_failure")
    if status in ("optimal", "near_optimal"):
        x = np.asarray(result.x, dtype=float)
        return ConicSolution(x, status, float(program.objective @ x))
    return ConicSolution(None, status, None)
