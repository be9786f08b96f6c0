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
from collections import deque
from typing import Optional, Sequence

import numpy as np

from .basics import inf_norm
from .errors import InfeasibleScheduleSetError, SwitchPointError
from .gradient import evaluate
from .problem import check_schedule, default_eps_sep, separation_floor
from .types import (
    GradientReport, IterationRecord, Method, OptimizeOptions,
    OptimizeResult, ProblemDef, SolverOptions, SwitchSchedule, Termination,
    Vector
)

logger = logging.getLogger(__name__)

# curvature pairs with s^T y below this threshold are skipped
CURVATURE_THRESHOLD = 1e-12


def _isotonic(values: Vector) -> Vector:
    """ Least squares non-decreasing fit by pooling adjacent violators.
    """
    sums = []
    counts = []
    for value in values:
        sums.append(float(value))
        counts.append(1)
        while len(sums) > 1 and sums[-2] / counts[-2] > sums[-1] / counts[-1]:
            total = sums.pop()
            count = counts.pop()
            sums[-1] += total
            counts[-1] += count
    return np.concatenate([
        np.full(count, total / count) for total, count in zip(sums, counts)
    ]) if sums else np.zeros(0)


def _is_feasible(times: Vector, horizon: float, eps_sep: float) -> bool:
    bounded = np.concatenate(([0.0], times, [horizon]))
    gaps = np.diff(bounded)
    return bool(np.all(gaps >= separation_floor(eps_sep, horizon))
                and np.all(gaps > 0))


def project_schedule(times: Sequence[float], horizon: float,
                     eps_sep: Optional[float] = None) -> SwitchSchedule:
    """ Euclidean projection onto the ordered switch times
        ``eps_sep <= s_1``, ``s_i + eps_sep <= s_{i+1}``,
        ``s_{N-1} <= horizon - eps_sep``.

        In the shifted coordinates ``u_i = s_i - i * eps_sep`` the set is
        a monotone cone intersected with a box, so the projection is the
        clipped isotonic regression of u.

        >>> project_schedule([0.7, 0.3], 1.0, eps_sep=0.0).as_tuple()
        (0.5, 0.5)
        >>> project_schedule([-0.2], 1.0, eps_sep=1e-8).as_tuple()
        (1e-08,)
        >>> project_schedule([0.25, 0.5], 1.0).as_tuple()
        (0.25, 0.5)
    """
    times = np.asarray(times, dtype=float).reshape(-1)
    if eps_sep is None:
        eps_sep = default_eps_sep(horizon)
    m = len(times)
    if (m + 1) * eps_sep > horizon:
        raise InfeasibleScheduleSetError(
            f'{m} switch times with separation {eps_sep:g} do not fit '
            f'into (0, {horizon})'
        )
    if eps_sep > 0 and _is_feasible(times, horizon, eps_sep):
        return SwitchSchedule(times.copy())

    shift = eps_sep * np.arange(1, m + 1)
    shifted = _isotonic(times - shift)
    shifted = np.clip(shifted, 0.0, horizon - (m + 1) * eps_sep)
    return SwitchSchedule(shifted + shift)


def _lbfgs_direction(grad: Vector, memory: deque) -> Vector:
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(memory):
        alpha = rho * np.dot(s, q)
        q -= alpha * y
        alphas.append(alpha)
    s, y, _ = memory[-1]
    r = np.dot(s, y) / np.dot(y, y) * q
    for (s, y, rho), alpha in zip(memory, reversed(alphas)):
        beta = rho * np.dot(y, r)
        r += s * (alpha - beta)
    return -r


def _steepest(grad: Vector) -> Vector:
    return -grad / max(1.0, inf_norm(grad))


def _projected_gradient_norm(times: Vector, grad: Vector, horizon: float,
                             eps_sep: float) -> float:
    projected = project_schedule(times - grad, horizon, eps_sep).times
    return inf_norm(projected - times)


def _try_evaluate(problem: ProblemDef, times: Vector,
                  theta: Optional[Vector],
                  options: SolverOptions) -> Optional[GradientReport]:
    try:
        report = evaluate(problem, SwitchSchedule(times), theta, options)
    except SwitchPointError as e:
        logger.debug('Trial schedule %s rejected: %s', times.tolist(), e)
        return None
    if report.grad is None:
        return None
    return report


def optimize(problem: ProblemDef, s0: SwitchSchedule,
             opts: Optional[OptimizeOptions] = None,
             options: Optional[SolverOptions] = None) -> OptimizeResult:
    """ Minimizes the objective over the ordered switch times with
        projected gradient descent, projected L-BFGS or projected
        Polak-Ribiere conjugate gradients, using Armijo backtracking on
        the projected path.

        Trial points whose boundary problem cannot be solved count as an
        infinite objective. Iteration stops when the projected gradient
        drops below ``grad_tol``, when the iteration limit is hit or when
        the step falls below ``min_step``. A start schedule that cannot be
        evaluated ends the run with ``evaluation_failure``.
    """
    opts = opts or OptimizeOptions()
    options = options or SolverOptions()
    horizon = problem.horizon
    eps_sep = (
        opts.eps_sep if opts.eps_sep is not None
        else default_eps_sep(horizon)
    )

    times = np.array(s0.times, dtype=float)
    check_schedule(times, horizon, problem.n_switches, eps_sep)

    report = _try_evaluate(problem, times, None, options)
    if report is None:
        message = (
            f'Objective cannot be evaluated at the start {times.tolist()}'
        )
        logger.warning('%s', message)
        return OptimizeResult(
            s_star=SwitchSchedule(times),
            objective=math.inf,
            grad_norm=math.inf,
            iterations=0,
            history=(),
            termination=Termination.EVALUATION_FAILURE,
            message=message,
        )
    value, grad = report.objective, report.grad
    theta = report.shooting.theta

    memory = deque(maxlen=opts.lbfgs_memory)
    previous_grad = None
    previous_direction = None
    history = []
    termination = Termination.MAX_ITERS
    iterations = 0

    while True:
        pg_norm = _projected_gradient_norm(times, grad, horizon, eps_sep)
        history.append(IterationRecord(tuple(times.tolist()), value, pg_norm))
        logger.debug(
            'Iteration %d: C = %.12g, |projected grad| = %.3e',
            iterations, value, pg_norm
        )

        if pg_norm <= opts.grad_tol:
            termination = (
                Termination.GRAD_TOL if inf_norm(grad) <= opts.grad_tol
                else Termination.BOUNDARY
            )
            break
        if iterations >= opts.max_iters:
            termination = Termination.MAX_ITERS
            break

        if opts.method is Method.LBFGS and memory:
            direction = _lbfgs_direction(grad, memory)
        elif opts.method is Method.CG and previous_grad is not None:
            beta = max(0.0, np.dot(grad, grad - previous_grad)
                       / np.dot(previous_grad, previous_grad))
            direction = -grad + beta * previous_direction
        else:
            direction = _steepest(grad)
        if np.dot(grad, direction) >= 0:
            direction = _steepest(grad)

        step = 1.0
        accepted = None
        while step >= opts.min_step:
            trial = project_schedule(times + step * direction, horizon,
                                     eps_sep).times
            slope = float(np.dot(grad, trial - times))
            if slope >= 0:
                if not np.array_equal(direction, _steepest(grad)):
                    # the projected path is not a descent path
                    direction = _steepest(grad)
                    step = 1.0
                else:
                    step *= opts.backtrack_factor
                continue

            trial_report = _try_evaluate(problem, trial, theta, options)
            if trial_report is not None:
                trial_value = trial_report.objective
                if (trial_value <= value + opts.armijo_c * slope
                        and trial_value <= value):
                    accepted = trial_report
                    break
            step *= opts.backtrack_factor

        if accepted is None:
            termination = Termination.LINE_SEARCH_FAILURE
            logger.warning(
                'Line search failed at s=%s after reaching step %.3g',
                times.tolist(), step
            )
            break

        iterations += 1
        new_times = trial
        new_grad = accepted.grad
        s_vec = new_times - times
        y_vec = new_grad - grad
        curvature = float(np.dot(s_vec, y_vec))
        if curvature > CURVATURE_THRESHOLD:
            memory.append((s_vec, y_vec, 1.0 / curvature))
        elif opts.method is Method.LBFGS:
            logger.warning('Skipping curvature pair with s^T y = %.3e',
                           curvature)

        previous_grad, previous_direction = grad, direction
        times, grad = new_times, new_grad
        value = accepted.objective
        theta = accepted.shooting.theta

    logger.info(
        'Optimization finished after %d iterations (%s): C = %.12g',
        iterations, termination.value, value
    )
    return OptimizeResult(
        s_star=SwitchSchedule(times),
        objective=value,
        grad_norm=pg_norm,
        iterations=iterations,
        history=tuple(history),
        termination=termination,
        theta=theta,
    )
