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
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence, Tuple

import numpy as np

from .costate import (
    TOL_COSTATE, integrate_costate_backward, solve_costate,
    terminal_mismatch
)
from .errors import ShootingFailedError
from .integrator import integrate_psi, integrate_state, stage_jacobians
from .problem import check_schedule
from .shooting import solve_boundary
from .types import (
    CostateTrajectory, GradientReport, HamiltonianPair, ProblemDef,
    ShootingResult, SolverOptions, SwitchSchedule, Trajectory, Vector
)

logger = logging.getLogger(__name__)

FD_STEP = 1e-5
FD_MAX_HALVINGS = 3


def hamiltonian(problem: ProblemDef, phase: int, x: Vector, p: Vector,
                t: float) -> float:
    """ Hamiltonian ``H_phase(x, p, t) = p F_phase(x, t)`` of a phase.
    """
    if not 0 <= phase < problem.n_phases:
        raise IndexError(
            f'Phase {phase} is outside of 0..{problem.n_phases - 1}'
        )
    return float(np.dot(p, problem.phases[phase].rhs(x, t)))


def _jumps(problem: ProblemDef, traj: Trajectory,
           costate_values: np.ndarray):
    mesh = traj.mesh
    pairs = []
    for i, node in enumerate(mesh.switch_nodes):
        x = traj.values[node]
        p = costate_values[node]
        t = float(mesh.nodes[node])
        pairs.append(HamiltonianPair(
            time=t,
            left=hamiltonian(problem, i, x, p, t),
            right=hamiltonian(problem, i + 1, x, p, t),
        ))
    grad = np.array([pair.left - pair.right for pair in pairs])
    return tuple(pairs), grad


def objective(problem: ProblemDef, schedule: SwitchSchedule,
              theta_hint: Optional[Sequence[float]] = None,
              options: Optional[SolverOptions] = None
              ) -> Tuple[float, ShootingResult]:
    """ Objective ``C(x(T))`` of a boundary-consistent trajectory. Raises
        `ShootingFailedError` when the boundary problem is not solved.
    """
    shooting = solve_boundary(problem, schedule, theta_hint, options=options)
    if not shooting.converged:
        raise ShootingFailedError(
            f'Boundary problem not solved for s={schedule.as_tuple()} '
            f'(|g| = {shooting.residual_norm:.3e})', shooting
        )
    return float(problem.objective(shooting.trajectory.final)), shooting


def evaluate(problem: ProblemDef, schedule: SwitchSchedule,
             theta_hint: Optional[Sequence[float]] = None,
             options: Optional[SolverOptions] = None) -> GradientReport:
    """ Evaluates the objective and its gradient with respect to all
        switch times.

        The boundary problem is solved by shooting (warm-started at
        ``theta_hint``), the costate is obtained from Psi, and each partial
        derivative is the jump ``H_{i-1} - H_i`` of the Hamiltonian at
        ``(x(s_i), p(s_i), s_i)``. When shooting does not converge the
        report carries no gradient.
    """
    options = options or SolverOptions()
    shooting = solve_boundary(problem, schedule, theta_hint, options=options)
    traj = shooting.trajectory
    value = float(problem.objective(traj.final))

    if not shooting.converged:
        logger.warning(
            'Gradient withheld: boundary problem not solved for s=%s',
            schedule.as_tuple()
        )
        return GradientReport(value, None, (), shooting, False)

    psi = integrate_psi(problem, traj, stage_jacobians(problem, traj))
    costate = solve_costate(problem, traj, psi, options)
    scale = max(1.0, float(np.max(np.abs(costate.terminal_gradient),
                                  initial=0.0)))
    costate_ok = terminal_mismatch(problem, costate) <= TOL_COSTATE * scale

    pairs, grad = _jumps(problem, traj, costate.values)
    logger.debug('C(%s) = %.12g, grad = %s', schedule.as_tuple(), value, grad)
    return GradientReport(value, grad, pairs, shooting, costate_ok, costate)


def evaluate_initial_value(problem: ProblemDef, schedule: SwitchSchedule,
                           options: Optional[SolverOptions] = None
                           ) -> GradientReport:
    """ Gradient evaluation for problems without terminal constraints.

        The state is integrated from the fully known initial value and the
        costate backward from ``p(T) = grad C(x(T))``, with neither
        shooting nor a Psi solve.
    """
    partition = problem.partition
    if partition.terminal:
        raise ValueError(
            'The initial value path requires an empty terminal index set'
        )
    options = options or SolverOptions()
    traj = integrate_state(problem, schedule, np.zeros(0), options)
    values = integrate_costate_backward(problem, traj)
    costate = CostateTrajectory(
        traj.mesh, values, values[0],
        np.asarray(problem.objective_gradient(traj.final))[partition.free_idx]
    )
    shooting = ShootingResult(
        theta=np.zeros(0), trajectory=traj, residual=np.zeros(0),
        residual_norm=0.0, iterations=0, gamma=0.0, converged=True,
        jacobian=np.zeros((0, 0)), history=(0.0,),
    )
    pairs, grad = _jumps(problem, traj, values)
    return GradientReport(
        float(problem.objective(traj.final)), grad, pairs, shooting, True,
        costate
    )


def _central_difference(problem: ProblemDef, schedule: SwitchSchedule,
                        index: int, h: float, max_halvings: int,
                        theta_hint: Optional[Vector],
                        options: SolverOptions) -> float:
    times = np.asarray(schedule.times, dtype=float)
    for attempt in range(max_halvings + 1):
        plus = times.copy()
        minus = times.copy()
        plus[index] += h
        minus[index] -= h
        check_schedule(plus, problem.horizon, len(times))
        check_schedule(minus, problem.horizon, len(times))
        try:
            c_plus, _ = objective(
                problem, SwitchSchedule(plus), theta_hint, options
            )
            c_minus, _ = objective(
                problem, SwitchSchedule(minus), theta_hint, options
            )
        except ShootingFailedError:
            if attempt == max_halvings:
                raise
            logger.warning(
                'FD probe of s_%d failed with h=%g, halving', index + 1, h
            )
            h *= 0.5
            continue
        return (c_plus - c_minus) / (2 * h)


def fd_gradient_oracle(problem: ProblemDef, schedule: SwitchSchedule,
                       h: float = FD_STEP,
                       options: Optional[SolverOptions] = None,
                       theta_hint: Optional[Sequence[float]] = None,
                       max_halvings: int = FD_MAX_HALVINGS,
                       workers: int = 1) -> Vector:
    """ Central finite difference approximation of the switch time
        gradient, each objective value coming from a converged boundary
        solve. A probe whose boundary solve fails is retried with half the
        step, up to ``max_halvings`` times. With ``workers > 1`` the
        partial derivatives are computed in a thread pool.
    """
    options = options or SolverOptions()
    if theta_hint is not None:
        theta_hint = np.asarray(theta_hint, dtype=float)

    def partial(index: int) -> float:
        return _central_difference(
            problem, schedule, index, h, max_halvings, theta_hint, options
        )

    indices = range(len(schedule))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return np.array(list(executor.map(partial, indices)))
    return np.array([partial(index) for index in indices])
