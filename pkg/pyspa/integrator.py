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
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .basics import hermite_midpoint
from .errors import (
    DimensionMismatchError, NonFiniteStateError, NotANodeError
)
from .problem import check_schedule
from .types import (
    Matrix, MatrixTrajectory, Mesh, ProblemDef, SolverOptions,
    SwitchSchedule, Trajectory, Vector
)

logger = logging.getLogger(__name__)

# tolerance when rounding the number of steps per phase interval
STEP_COUNT_SLACK = 1e-9
# relative tolerance for matching times to mesh nodes
NODE_TOLERANCE = 1e-12

# coefficient transform applied to the phase Jacobian
Coefficient = Callable[[Matrix], Matrix]
StageJacobians = List[Tuple[Matrix, Matrix, Matrix]]


def build_mesh(horizon: float, schedule: SwitchSchedule,
               steps_per_unit: int) -> Mesh:
    """ Builds a mesh on [0, horizon] that contains every switch time as a
        node. Each phase interval is subdivided uniformly into
        ``ceil(steps_per_unit * length)`` steps.

        >>> import numpy as np
        >>> from pyspa.types import SwitchSchedule
        >>> mesh = build_mesh(1.0, SwitchSchedule(np.array([])), 4)
        >>> mesh.nodes.tolist()
        [0.0, 0.25, 0.5, 0.75, 1.0]
        >>> mesh = build_mesh(2.0, SwitchSchedule(np.array([0.5])), 2)
        >>> mesh.nodes.tolist(), mesh.phase_of_interval.tolist()
        ([0.0, 0.5, 1.0, 1.5, 2.0], [0, 1, 1, 1])
    """
    if steps_per_unit < 1:
        raise ValueError('steps_per_unit must be at least 1')

    times = np.asarray(schedule.times, dtype=float)
    check_schedule(times, horizon, len(times))
    bounds = np.concatenate(([0.0], times, [float(horizon)]))

    segments = []
    phases = []
    switch_nodes = []
    count = 0
    for phase, (start, stop) in enumerate(zip(bounds[:-1], bounds[1:])):
        steps = max(
            1, math.ceil(steps_per_unit * (stop - start) - STEP_COUNT_SLACK)
        )
        segment = np.linspace(start, stop, steps + 1)
        # linspace keeps both ends exact, so switch times are nodes
        segments.append(segment[:-1])
        phases.extend([phase] * steps)
        count += steps
        if phase < len(times):
            switch_nodes.append(count)

    nodes = np.concatenate(segments + [bounds[-1:]])
    nodes.setflags(write=False)
    phase_of_interval = np.array(phases, dtype=int)
    phase_of_interval.setflags(write=False)
    return Mesh(nodes, phase_of_interval, tuple(switch_nodes))


def node_index(mesh: Mesh, t: float) -> int:
    """ Returns the index of the mesh node at time ``t``.
    """
    scale = max(1.0, abs(float(mesh.nodes[-1])))
    k = int(np.searchsorted(mesh.nodes, t))
    for candidate in (k - 1, k):
        if (0 <= candidate < len(mesh.nodes)
                and abs(mesh.nodes[candidate] - t) <= NODE_TOLERANCE * scale):
            return candidate
    raise NotANodeError(f'Time {t} is not a mesh node')


def initial_state(problem: ProblemDef, theta: Vector) -> Vector:
    """ Assembles x(0) from the fixed block b_I and the unknown block
        ``theta``.
    """
    partition = problem.partition
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if len(theta) != len(partition.unknown):
        raise DimensionMismatchError(
            f'theta has {len(theta)} entries, '
            f'expected {len(partition.unknown)}'
        )
    if not np.all(np.isfinite(theta)):
        raise ValueError('theta must be finite')

    x0 = np.zeros(problem.n)
    x0[partition.initial_idx] = problem.b_initial
    x0[partition.unknown_idx] = theta
    return x0


def integrate_state(problem: ProblemDef, schedule: SwitchSchedule,
                    theta: Vector, options: Optional[SolverOptions] = None,
                    mesh: Optional[Mesh] = None) -> Trajectory:
    """ Integrates the switched state equation with the classic fourth
        order Runge-Kutta scheme on a switch-aligned mesh, starting from
        ``x_I(0) = b_I`` and ``x_J(0) = theta``.

        Raises `NonFiniteStateError` on blow-up.
    """
    options = options or SolverOptions()
    if mesh is None:
        mesh = build_mesh(problem.horizon, schedule, options.steps_per_unit)

    x0 = initial_state(problem, theta)
    nodes = mesh.nodes
    values = np.empty((len(nodes), problem.n))
    slopes = np.empty((mesh.n_intervals, 2, problem.n))
    values[0] = x0

    for k in range(mesh.n_intervals):
        rhs = problem.phases[mesh.phase_of_interval[k]].rhs
        t0 = nodes[k]
        h = nodes[k + 1] - t0
        x = values[k]

        k1 = np.asarray(rhs(x, t0), dtype=float)
        k2 = np.asarray(rhs(x + 0.5 * h * k1, t0 + 0.5 * h), dtype=float)
        k3 = np.asarray(rhs(x + 0.5 * h * k2, t0 + 0.5 * h), dtype=float)
        k4 = np.asarray(rhs(x + h * k3, nodes[k + 1]), dtype=float)
        x_next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        if not np.all(np.isfinite(x_next)):
            raise NonFiniteStateError(
                f'State is not finite at node {k + 1} '
                f'(t={nodes[k + 1]:g})', k + 1, float(nodes[k + 1])
            )
        values[k + 1] = x_next
        slopes[k, 0] = k1
        slopes[k, 1] = rhs(x_next, nodes[k + 1])

    values.setflags(write=False)
    slopes.setflags(write=False)
    return Trajectory(mesh, values, np.array(x0[problem.partition.unknown_idx]),
                      slopes)


def stage_jacobians(problem: ProblemDef,
                    traj: Trajectory) -> StageJacobians:
    """ Evaluates the phase Jacobian at the left node, the midpoint and
        the right node of every interval. The midpoint state comes from
        cubic Hermite interpolation of the stored trajectory.
    """
    mesh = traj.mesh
    nodes = mesh.nodes
    result = []
    for k in range(mesh.n_intervals):
        jacobian = problem.phases[mesh.phase_of_interval[k]].jacobian
        h = nodes[k + 1] - nodes[k]
        x_mid = hermite_midpoint(
            traj.values[k], traj.values[k + 1],
            traj.slopes[k, 0], traj.slopes[k, 1], h
        )
        result.append((
            np.asarray(jacobian(traj.values[k], nodes[k]), dtype=float),
            np.asarray(jacobian(x_mid, nodes[k] + 0.5 * h), dtype=float),
            np.asarray(
                jacobian(traj.values[k + 1], nodes[k + 1]), dtype=float
            ),
        ))
    return result


def propagate_linear(traj: Trajectory, start: np.ndarray,
                     coefficient: Coefficient, stages: StageJacobians,
                     reverse: bool = False) -> np.ndarray:
    """ Integrates the linear equation ``Y' = coefficient(A(t)) Y`` along
        the trajectory's mesh with RK4, where A(t) is the phase Jacobian.
        ``start`` is a vector or a matrix. With ``reverse`` the integration
        runs from t = T down to t = 0 and ``start`` is the terminal value.
    """
    nodes = traj.mesh.nodes
    start = np.asarray(start, dtype=float)
    result = np.empty((len(nodes),) + start.shape)
    order = range(traj.mesh.n_intervals)
    if reverse:
        order = reversed(order)
        result[-1] = start
    else:
        result[0] = start

    for k in order:
        a0, a_mid, a1 = (coefficient(a) for a in stages[k])
        h = nodes[k + 1] - nodes[k]
        if reverse:
            y, h, a0, a1, target = result[k + 1], -h, a1, a0, k
        else:
            y, target = result[k], k + 1

        k1 = a0 @ y
        k2 = a_mid @ (y + 0.5 * h * k1)
        k3 = a_mid @ (y + 0.5 * h * k2)
        k4 = a1 @ (y + h * k3)
        y_next = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        if not np.all(np.isfinite(y_next)):
            raise NonFiniteStateError(
                f'Linearized solution is not finite at node {target} '
                f'(t={nodes[target]:g})', target, float(nodes[target])
            )
        result[target] = y_next

    return result


def _jacobian(a: Matrix) -> Matrix:
    return a


def _negated_transpose(a: Matrix) -> Matrix:
    return -a.T


def _matrix_trajectory(problem: ProblemDef, traj: Trajectory,
                       coefficient: Coefficient, kind: str,
                       stages: Optional[StageJacobians]) -> MatrixTrajectory:
    if stages is None:
        stages = stage_jacobians(problem, traj)
    matrices = propagate_linear(
        traj, np.eye(problem.n), coefficient, stages
    )
    matrices.setflags(write=False)
    return MatrixTrajectory(traj.mesh, matrices, kind)


def integrate_phi(problem: ProblemDef, traj: Trajectory,
                  stages: Optional[StageJacobians] = None
                  ) -> MatrixTrajectory:
    """ Fundamental matrix of the linearized state equation,
        ``Phi' = A(t) Phi`` with ``Phi(0) = I``, on the trajectory's mesh.
    """
    return _matrix_trajectory(problem, traj, _jacobian, 'phi', stages)


def integrate_psi(problem: ProblemDef, traj: Trajectory,
                  stages: Optional[StageJacobians] = None
                  ) -> MatrixTrajectory:
    """ Fundamental matrix of the adjoint equation,
        ``Psi' = -A(t)^T Psi`` with ``Psi(0) = I``. Its transpose is the
        inverse of Phi.
    """
    return _matrix_trajectory(
        problem, traj, _negated_transpose, 'psi', stages
    )


def linearized_state(problem: ProblemDef, traj: Trajectory,
                     z0: Sequence[float]) -> np.ndarray:
    """ Solution ``Z(t) = Phi(t) z0`` of the linearized state equation on
        every node.
    """
    z0 = np.asarray(z0, dtype=float).reshape(-1)
    if len(z0) != problem.n:
        raise DimensionMismatchError(
            f'z0 has {len(z0)} entries, expected {problem.n}'
        )
    return propagate_linear(
        traj, z0, _jacobian, stage_jacobians(problem, traj)
    )
