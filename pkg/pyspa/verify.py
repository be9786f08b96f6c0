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
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

from .basics import loglog_slope
from .errors import ShootingFailedError, SwitchPointError
from .gradient import evaluate, objective
from .problem import check_schedule
from .shooting import solve_boundary
from .types import (
    PerturbationCase, PerturbationStudy, ProblemDef, RemainderStudy,
    SolverOptions, SwitchSchedule, Vector
)

logger = logging.getLogger(__name__)

# remainders below this level (relative to max(1, |C|)) are integration noise
NOISE_FLOOR = 1e-13

T = TypeVar('T')
R = TypeVar('R')


def _check_sizes(sizes: Sequence[float], what: str) -> tuple:
    sizes = tuple(float(size) for size in sizes)
    if any(size <= 0 for size in sizes):
        raise ValueError(f'{what} must be positive')
    if any(a <= b for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f'{what} must be strictly decreasing')
    return sizes


def _map(function: Callable[[T], R], items: Iterable[T],
         workers: int) -> List[R]:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(function, items))
    return [function(item) for item in items]


def _fit(cases: Sequence[PerturbationCase]) -> Optional[float]:
    usable = [
        case for case in cases if case.change is not None and case.change > 0
    ]
    return loglog_slope(
        [case.magnitude for case in usable],
        [case.change for case in usable],
    )


def _base_solve(problem: ProblemDef, schedule: SwitchSchedule,
                theta_hint: Optional[Vector], options: SolverOptions):
    base = solve_boundary(problem, schedule, theta_hint, options=options)
    if not base.converged:
        raise ShootingFailedError(
            'The unperturbed boundary problem is not solvable', base
        )
    return base


def terminal_perturbation_study(problem: ProblemDef,
                                schedule: SwitchSchedule,
                                magnitudes: Sequence[float],
                                directions: Optional[
                                    Sequence[Sequence[float]]] = None,
                                theta_hint: Optional[Vector] = None,
                                options: Optional[SolverOptions] = None,
                                workers: int = 1) -> PerturbationStudy:
    """ Perturbs the terminal data to ``b_E + pi`` with
        ``pi = magnitude * direction`` and records the response ratios
        ``|theta(pi) - theta(0)| / |pi|``. The reference is gamma, the norm
        of the inverse shooting Jacobian at the unperturbed solution,
        which the ratios approach as ``pi`` goes to zero.

        Directions default to the canonical basis of the terminal block.
        Failed solves are recorded per case.
    """
    options = options or SolverOptions()
    magnitudes = _check_sizes(magnitudes, 'Magnitudes')
    size = len(problem.partition.terminal)
    if directions is None:
        directions = list(np.eye(size))
    directions = [np.asarray(d, dtype=float) for d in directions]
    for direction in directions:
        if direction.shape != (size,) or not np.linalg.norm(direction) > 0:
            raise ValueError(
                f'Directions must be non-zero vectors of length {size}'
            )
    directions = [d / np.linalg.norm(d) for d in directions]

    base = _base_solve(problem, schedule, theta_hint, options)

    def run(item) -> PerturbationCase:
        index, magnitude = item
        pi = magnitude * directions[index]
        try:
            result = solve_boundary(
                problem, schedule, base.theta, pi, options
            )
        except SwitchPointError as e:
            return PerturbationCase(magnitude, index, None, error=str(e))
        if not result.converged:
            return PerturbationCase(
                magnitude, index, None, error='shooting did not converge'
            )
        change = float(np.linalg.norm(result.theta - base.theta))
        logger.debug('pi = %g along %d: ratio %.6g', magnitude, index,
                     change / magnitude)
        return PerturbationCase(magnitude, index, change / magnitude, change)

    items = [
        (index, magnitude)
        for index in range(len(directions)) for magnitude in magnitudes
    ]
    cases = tuple(_map(run, items, workers))
    return PerturbationStudy(magnitudes, cases, base.gamma, _fit(cases))


def _shifted(schedule: SwitchSchedule, index: int,
             delta: float) -> SwitchSchedule:
    times = np.array(schedule.times, dtype=float)
    times[index - 1] += delta
    return SwitchSchedule(times)


def _check_index(problem: ProblemDef, schedule: SwitchSchedule, index: int,
                 deltas: Sequence[float]) -> None:
    if not 1 <= index <= len(schedule):
        raise ValueError(
            f'Switch index {index} is outside of 1..{len(schedule)}'
        )
    if deltas:
        for sign in (1.0, -1.0):
            check_schedule(
                _shifted(schedule, index, sign * deltas[0]).times,
                problem.horizon, problem.n_switches
            )


def switch_perturbation_study(problem: ProblemDef, schedule: SwitchSchedule,
                              index: int, deltas: Sequence[float],
                              theta_hint: Optional[Vector] = None,
                              options: Optional[SolverOptions] = None,
                              workers: int = 1) -> PerturbationStudy:
    """ Moves the switch time ``s_index`` (1-based) to ``s_index + delta``
        and records ``|theta(s + delta) - theta(s)| / delta``. Bounded
        ratios certify Lipschitz stability of the boundary solution in the
        switch time; no predicted reference is attached.
    """
    options = options or SolverOptions()
    deltas = _check_sizes(deltas, 'Deltas')
    _check_index(problem, schedule, index, deltas)
    if not deltas:
        return PerturbationStudy((), (), None, None)

    base = _base_solve(problem, schedule, theta_hint, options)

    def run(delta: float) -> PerturbationCase:
        try:
            result = solve_boundary(
                problem, _shifted(schedule, index, delta), base.theta,
                options=options
            )
        except SwitchPointError as e:
            return PerturbationCase(delta, None, None, error=str(e))
        if not result.converged:
            return PerturbationCase(
                delta, None, None, error='shooting did not converge'
            )
        change = float(np.linalg.norm(result.theta - base.theta))
        return PerturbationCase(delta, None, change / delta, change)

    cases = tuple(_map(run, deltas, workers))
    return PerturbationStudy(deltas, cases, None, _fit(cases))


def remainder_study(problem: ProblemDef, schedule: SwitchSchedule,
                    index: int, deltas: Sequence[float],
                    theta_hint: Optional[Vector] = None,
                    options: Optional[SolverOptions] = None,
                    workers: int = 1) -> RemainderStudy:
    """ Measures the first order Taylor remainder
        ``|C(s + delta e_i) - C(s) - delta dC/ds_i|`` of the objective in
        the switch time ``s_index`` (1-based). The fitted log-log slope,
        which is close to 2 for smooth problems, only uses remainders
        above the integration noise floor.
    """
    options = options or SolverOptions()
    deltas = _check_sizes(deltas, 'Deltas')
    _check_index(problem, schedule, index, deltas)

    report = evaluate(problem, schedule, theta_hint, options)
    if report.grad is None:
        raise ShootingFailedError(
            'The unperturbed boundary problem is not solvable',
            report.shooting
        )
    value = report.objective
    derivative = float(report.grad[index - 1])
    theta = report.shooting.theta

    def run(delta: float):
        try:
            shifted, _ = objective(
                problem, _shifted(schedule, index, delta), theta, options
            )
        except SwitchPointError as e:
            return None, str(e)
        return abs(shifted - value - delta * derivative), None

    outcomes = _map(run, deltas, workers)
    remainders = tuple(remainder for remainder, _ in outcomes)
    errors = tuple(error for _, error in outcomes)

    floor = NOISE_FLOOR * max(1.0, abs(value))
    usable = [
        (delta, remainder) for delta, remainder in zip(deltas, remainders)
        if remainder is not None and remainder >= floor
    ]
    slope = loglog_slope(
        [delta for delta, _ in usable],
        [remainder for _, remainder in usable],
    )
    return RemainderStudy(
        deltas, remainders, slope, value, derivative, errors
    )
