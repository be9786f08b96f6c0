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
from typing import Optional, Sequence, Tuple

import numpy as np

from .basics import condition_number, inf_norm, inverse_norm, solve_checked
from .errors import (
    DimensionMismatchError, NonFiniteStateError, SingularMatrixError
)
from .integrator import build_mesh, integrate_phi, integrate_state
from .types import (
    Matrix, Mesh, NewtonCertificate, ProblemDef, ShootingResult,
    SolverOptions, SwitchSchedule, Trajectory, Vector
)

logger = logging.getLogger(__name__)

CERTIFICATE_SAMPLES = 16


def _perturbation(problem: ProblemDef, pi: Optional[Sequence[float]]):
    size = len(problem.partition.terminal)
    if pi is None:
        return np.zeros(size)
    pi = np.asarray(pi, dtype=float).reshape(-1)
    if len(pi) != size:
        raise DimensionMismatchError(
            f'pi has {len(pi)} entries, expected {size}'
        )
    return pi


def shoot_residual(problem: ProblemDef, schedule: SwitchSchedule,
                   theta: Vector, pi: Optional[Sequence[float]] = None,
                   options: Optional[SolverOptions] = None,
                   mesh: Optional[Mesh] = None) -> Tuple[Vector, Trajectory]:
    """ Integrates the state from ``x_J(0) = theta`` and returns the
        terminal mismatch ``x_E(T) - b_E - pi`` with the trajectory.
    """
    pi = _perturbation(problem, pi)
    traj = integrate_state(problem, schedule, theta, options, mesh)
    residual = (
        traj.final[problem.partition.terminal_idx] - problem.b_terminal - pi
    )
    return residual, traj


def terminal_jacobian(problem: ProblemDef, traj: Trajectory) -> Matrix:
    """ Shooting Jacobian ``Phi_EJ(T)``: the block of the terminal
        fundamental matrix mapping unknown initial components to
        terminally constrained ones.
    """
    partition = problem.partition
    phi = integrate_phi(problem, traj)
    return phi.final[np.ix_(partition.terminal_idx, partition.unknown_idx)]


def solve_boundary(problem: ProblemDef, schedule: SwitchSchedule,
                   theta0: Optional[Sequence[float]] = None,
                   pi: Optional[Sequence[float]] = None,
                   options: Optional[SolverOptions] = None) -> ShootingResult:
    """ Finds the unknown initial components so that the trajectory meets
        ``x_E(T) = b_E + pi``, using Newton's method with the Jacobian
        ``Phi_EJ(T)`` recomputed along the current trajectory.

        A full step that does not decrease the residual is halved up to
        ``options.max_halvings`` times. Running out of iterations or
        halvings is reported through ``converged``, not raised.
    """
    options = options or SolverOptions()
    partition = problem.partition
    mesh = build_mesh(problem.horizon, schedule, options.steps_per_unit)

    if theta0 is None:
        theta = np.zeros(len(partition.unknown))
    else:
        theta = np.array(theta0, dtype=float).reshape(-1)

    residual, traj = shoot_residual(problem, schedule, theta, pi, options,
                                    mesh)

    if not partition.terminal:
        # pure initial value problem: nothing to solve for
        return ShootingResult(
            theta=theta, trajectory=traj, residual=residual,
            residual_norm=0.0, iterations=0, gamma=0.0, converged=True,
            jacobian=np.zeros((0, 0)), history=(0.0,),
        )

    norm = inf_norm(residual)
    history = [norm]
    iterations = 0
    stalled = False

    while norm > options.tol_res and iterations < options.max_iter:
        jacobian = terminal_jacobian(problem, traj)
        step = solve_checked(
            jacobian, residual, options.cond_limit, 'Phi_EJ(T)'
        )

        alpha = 1.0
        for halving in range(options.max_halvings + 1):
            candidate = theta - alpha * step
            try:
                candidate_residual, candidate_traj = shoot_residual(
                    problem, schedule, candidate, pi, options, mesh
                )
                candidate_norm = inf_norm(candidate_residual)
            except NonFiniteStateError:
                candidate_norm = float('inf')

            if candidate_norm < norm or candidate_norm <= options.tol_res:
                break
            alpha *= 0.5
        else:
            stalled = True
            logger.warning(
                'Newton step failed to decrease the residual %.3e after %d '
                'halvings', norm, options.max_halvings
            )
            break

        iterations += 1
        theta = candidate
        residual, traj, norm = candidate_residual, candidate_traj, \
            candidate_norm
        history.append(norm)
        logger.debug(
            'Newton iteration %d: |g| = %.3e (halvings: %d)',
            iterations, norm, halving
        )

    converged = norm <= options.tol_res
    jacobian = terminal_jacobian(problem, traj)
    gamma = inverse_norm(jacobian)

    if converged:
        logger.info(
            'Boundary problem solved in %d iterations, |g| = %.3e',
            iterations, norm
        )
    elif not stalled:
        logger.warning(
            'Newton iteration did not converge in %d iterations, '
            '|g| = %.3e', iterations, norm
        )

    return ShootingResult(
        theta=theta, trajectory=traj, residual=residual, residual_norm=norm,
        iterations=iterations, gamma=gamma, converged=converged,
        jacobian=jacobian, history=tuple(history),
    )


def _ball_samples(center: Vector, r: float, count: int,
                  rng: np.random.Generator):
    dimension = len(center)
    for _ in range(count):
        direction = rng.standard_normal(dimension)
        length = np.linalg.norm(direction)
        if length == 0.0:
            continue
        radius = r * rng.uniform() ** (1.0 / dimension)
        yield center + radius * direction / length


def newton_certificate(problem: ProblemDef, schedule: SwitchSchedule,
                       theta_star: Sequence[float], r: float,
                       sample_count: int = CERTIFICATE_SAMPLES,
                       offset: Optional[Sequence[float]] = None,
                       pi: Optional[Sequence[float]] = None,
                       seed: int = 0,
                       options: Optional[SolverOptions] = None
                       ) -> NewtonCertificate:
    """ Numerically instantiates the hypotheses of the Newton-Kantorovich
        type existence result around ``theta_start = theta_star + offset``.

        ``gamma`` is the norm of the inverse shooting Jacobian at
        ``theta_star``, ``epsilon`` the largest observed deviation of the
        shooting Jacobian from it over ``sample_count`` seeded samples in
        the ball of radius ``r`` around the start (plus the centre and
        ``theta_star``), and ``delta`` the residual norm at the start. As
        a sampled supremum, ``epsilon`` is a lower estimate.
    """
    if r <= 0:
        raise ValueError('The ball radius r must be positive')

    options = options or SolverOptions()
    mesh = build_mesh(problem.horizon, schedule, options.steps_per_unit)
    theta_star = np.asarray(theta_star, dtype=float).reshape(-1)
    if offset is None:
        offset = np.zeros_like(theta_star)
    theta_start = theta_star + np.asarray(offset, dtype=float).reshape(-1)

    def jacobian_at(theta: Vector) -> Matrix:
        _, traj = shoot_residual(problem, schedule, theta, pi, options, mesh)
        return terminal_jacobian(problem, traj)

    reference = jacobian_at(theta_star)
    cond = condition_number(reference)
    if cond > options.cond_limit:
        raise SingularMatrixError(
            f'Phi_EJ(T) is numerically singular (condition {cond:.3g})',
            cond
        )
    gamma = inverse_norm(reference)

    residual, _ = shoot_residual(
        problem, schedule, theta_start, pi, options, mesh
    )
    delta = float(np.linalg.norm(residual))

    rng = np.random.default_rng(seed)
    points = [theta_start, theta_star]
    points.extend(_ball_samples(theta_start, r, sample_count, rng))

    epsilon = 0.0
    for point in points:
        try:
            deviation = jacobian_at(point) - reference
        except NonFiniteStateError:
            epsilon = float('inf')
            break
        if deviation.size:
            epsilon = max(epsilon, float(np.linalg.norm(deviation, 2)))

    if gamma == 0.0:
        hypotheses_hold = True
    else:
        hypotheses_hold = bool(
            epsilon * gamma < 1
            and delta <= r * (1 - gamma * epsilon) / gamma
        )
    bound = (
        delta * gamma / (1 - epsilon * gamma) if hypotheses_hold else None
    )

    logger.debug(
        'Certificate: gamma=%.3e epsilon=%.3e delta=%.3e r=%.3e hold=%s',
        gamma, epsilon, delta, r, hypotheses_hold
    )
    return NewtonCertificate(
        gamma=gamma, epsilon=epsilon, delta=delta, r=float(r), bound=bound,
        hypotheses_hold=hypotheses_hold, theta_start=theta_start,
        samples=len(points),
    )
