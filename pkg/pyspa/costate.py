# ------------------------------------------------------------------------------
#
# Project: pyspa
# Authors: pyspa developers
#
# ------------------------------------------------------------------------------
# Copyright (C) 2026 pyspa developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies of this Software or works derived from this Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
# THE SOFTWARE.
# ------------------------------------------------------------------------------


import logging
from typing import Optional, Sequence

import numpy as np

from .basics import inf_norm, solve_checked
from .errors import DimensionMismatchError
from .integrator import (
    integrate_psi, node_index, propagate_linear, stage_jacobians
)
from .types import (
    CostateTrajectory, MatrixTrajectory, ProblemDef, SolverOptions,
    Trajectory, Vector
)

logger = logging.getLogger(__name__)

TOL_COSTATE = 1e-9


def solve_costate(problem: ProblemDef, traj: Trajectory,
                  psi: Optional[MatrixTrajectory] = None,
                  options: Optional[SolverOptions] = None
                  ) -> CostateTrajectory:
    """ Solves the costate equation ``p' = -p A(t)`` with the mixed
        boundary conditions ``p_J(0) = 0`` and ``p_F(T) = grad_F C(x(T))``.

        Since ``p(t)^T = Psi(t) p(0)^T``, the free block of p(0) is the
        solution of ``Psi_FI(T) p_I(0)^T = grad_F C(x(T))^T``. Raises
        `SingularMatrixError` when ``Psi_FI(T)`` is numerically singular.
    """
    options = options or SolverOptions()
    partition = problem.partition
    if psi is None:
        psi = integrate_psi(problem, traj)
    if len(psi.mesh) != len(traj.mesh):
        raise DimensionMismatchError(
            'Psi and the trajectory are not on the same mesh'
        )

    gradient = np.asarray(problem.objective_gradient(traj.final), dtype=float)
    terminal_gradient = gradient[partition.free_idx]

    psi_fi = psi.final[np.ix_(partition.free_idx, partition.initial_idx)]
    p0 = np.zeros(problem.n)
    p0[partition.initial_idx] = solve_checked(
        psi_fi, terminal_gradient, options.cond_limit, 'Psi_FI(T)'
    )

    values = psi.matrices @ p0
    values.setflags(write=False)
    return CostateTrajectory(traj.mesh, values, p0, terminal_gradient)


def costate_at(costate: CostateTrajectory, t: float) -> Vector:
    """ Costate row vector stored at the mesh node ``t``. Switch times
        are always nodes; other times raise `NotANodeError`.
    """
    return costate.values[node_index(costate.mesh, t)]


def terminal_mismatch(problem: ProblemDef,
                      costate: CostateTrajectory) -> float:
    """ Maximum deviation of ``p_F(T)`` from ``grad_F C(x(T))``.
    """
    free = costate.values[-1][problem.partition.free_idx]
    return inf_norm(free - costate.terminal_gradient)


def integrate_costate(problem: ProblemDef, traj: Trajectory,
                      p0: Sequence[float]) -> np.ndarray:
    """ Integrates ``p' = -p A(t)`` forward from the given ``p(0)`` by
        RK4 on the trajectory's mesh, independently of Psi.
    """
    p0 = np.asarray(p0, dtype=float).reshape(-1)
    if len(p0) != problem.n:
        raise DimensionMismatchError(
            f'p0 has {len(p0)} entries, expected {problem.n}'
        )
    return propagate_linear(
        traj, p0, lambda a: -a.T, stage_jacobians(problem, traj)
    )


def integrate_costate_backward(problem: ProblemDef,
                               traj: Trajectory) -> np.ndarray:
    """ Integrates ``p' = -p A(t)`` backward from
        ``p(T) = grad C(x(T))``. This is the costate of problems without
        terminal constraints.
    """
    terminal = np.asarray(problem.objective_gradient(traj.final), dtype=float)
    return propagate_linear(
        traj, terminal, lambda a: -a.T, stage_jacobians(problem, traj),
        reverse=True
    )
