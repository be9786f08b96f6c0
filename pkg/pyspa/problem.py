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
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .basics import fd_gradient, fd_jacobian
from .errors import (
    DimensionMismatchError, IndexOutOfRangeError, InvalidScheduleError
)
from .types import (
    GradientMap, IndexPartition, ObjectiveMap, PhaseDynamics, ProblemDef,
    StateMap, SwitchSchedule, ValidationReport, Vector
)

logger = logging.getLogger(__name__)

# minimum separation of switch times relative to the horizon
EPS_SEP_FACTOR = 1e-8
# relative slack when checking separations produced by projections
SEPARATION_SLACK = 1e-9
# absolute slack in units of horizon * machine epsilon
ROUNDOFF_ULPS = 16

VALIDATION_SAMPLES = 20
VALIDATION_TOLERANCE = 1e-5


def partition_indices(initial: Iterable[int], terminal: Iterable[int],
                      n: int) -> IndexPartition:
    """ Builds the index partition from the 1-based sets of initially
        and terminally constrained components.

        >>> partition_indices({1}, {2}, 2)
        IndexPartition(n=2, initial=(1,), terminal=(2,), unknown=(2,), free=(1,))
        >>> partition_indices({1, 2}, set(), 2).free
        (1, 2)
        >>> partition_indices({1}, {1}, 3)
        Traceback (most recent call last):
            ...
        pyspa.errors.DimensionMismatchError: |I| + |E| = 2 does not match n = 3
    """
    initial = tuple(sorted(set(int(i) for i in initial)))
    terminal = tuple(sorted(set(int(i) for i in terminal)))

    for index in initial + terminal:
        if not 1 <= index <= n:
            raise IndexOutOfRangeError(
                f'Index {index} is outside of 1..{n}'
            )

    if len(initial) + len(terminal) != n:
        raise DimensionMismatchError(
            f'|I| + |E| = {len(initial) + len(terminal)} does not match '
            f'n = {n}'
        )

    everything = range(1, n + 1)
    return IndexPartition(
        n=n,
        initial=initial,
        terminal=terminal,
        unknown=tuple(i for i in everything if i not in initial),
        free=tuple(i for i in everything if i not in terminal),
    )


def _frozen(values: Sequence[float]) -> Vector:
    array = np.array(values, dtype=float).reshape(-1)
    array.setflags(write=False)
    return array


def make_problem(horizon: float, partition: IndexPartition,
                 b_initial: Sequence[float], b_terminal: Sequence[float],
                 phases: Sequence[PhaseDynamics], objective: ObjectiveMap,
                 objective_gradient: GradientMap,
                 name: str = '') -> ProblemDef:
    """ Creates a `ProblemDef` after checking the structural invariants:
        positive horizon, at least one phase and boundary vectors that
        match the partition.
    """
    if not horizon > 0:
        raise ValueError(f'Horizon must be positive, got {horizon}')
    if not phases:
        raise ValueError('At least one phase is required')

    b_initial = _frozen(b_initial)
    b_terminal = _frozen(b_terminal)
    if len(b_initial) != len(partition.initial):
        raise DimensionMismatchError(
            f'b_I has {len(b_initial)} entries, '
            f'expected {len(partition.initial)}'
        )
    if len(b_terminal) != len(partition.terminal):
        raise DimensionMismatchError(
            f'b_E has {len(b_terminal)} entries, '
            f'expected {len(partition.terminal)}'
        )

    return ProblemDef(
        horizon=float(horizon),
        partition=partition,
        b_initial=b_initial,
        b_terminal=b_terminal,
        phases=tuple(phases),
        objective=objective,
        objective_gradient=objective_gradient,
        name=name,
    )


def fd_phase(rhs: StateMap, label: int = 0) -> PhaseDynamics:
    """ Wraps phase dynamics without an analytic Jacobian. The Jacobian is
        approximated by central differences and flagged as approximate.
    """
    def jacobian(x: Vector, t: float) -> np.ndarray:
        return fd_jacobian(rhs, x, t)

    return PhaseDynamics(rhs, jacobian, label, approximate=True)


def default_eps_sep(horizon: float) -> float:
    return EPS_SEP_FACTOR * horizon


def separation_floor(eps_sep: float, horizon: float) -> float:
    """ Smallest gap accepted for a requested separation. Gaps of
        projected schedules carry round-off of the size of the times
        themselves, hence the absolute term.

        >>> separation_floor(0.0, 1.0) < 0
        True
    """
    return (
        eps_sep * (1 - SEPARATION_SLACK)
        - ROUNDOFF_ULPS * np.finfo(float).eps * horizon
    )


def check_schedule(times: Sequence[float], horizon: float, n_switches: int,
                   eps_sep: Optional[float] = None) -> None:
    """ Raises `InvalidScheduleError` unless ``times`` holds ``n_switches``
        finite, increasing interior switch times with separation of at
        least ``eps_sep`` (default ``1e-8 * horizon``) from each other and
        from the horizon ends.
    """
    times = np.asarray(times, dtype=float).reshape(-1)
    if len(times) != n_switches:
        raise InvalidScheduleError(
            f'Expected {n_switches} switch times, got {len(times)}'
        )
    if not np.all(np.isfinite(times)):
        raise InvalidScheduleError('Switch times must be finite')

    if eps_sep is None:
        eps_sep = default_eps_sep(horizon)
    required = separation_floor(eps_sep, horizon)

    bounded = np.concatenate(([0.0], times, [horizon]))
    gaps = np.diff(bounded)
    if np.any(gaps <= 0) or np.any(gaps < required):
        raise InvalidScheduleError(
            f'Switch times {times.tolist()} are not ordered within '
            f'(0, {horizon}) with separation {eps_sep:g}'
        )


def make_schedule(times: Sequence[float], problem: ProblemDef,
                  eps_sep: Optional[float] = None) -> SwitchSchedule:
    """ Validates the switch times against the problem and wraps them.

        An empty list is the only valid schedule for single phase
        problems.
    """
    check_schedule(times, problem.horizon, problem.n_switches, eps_sep)
    return SwitchSchedule(_frozen(times))


def _sample_points(problem: ProblemDef, samples: int, seed: int):
    rng = np.random.default_rng(seed)
    center = np.zeros(problem.n)
    center[problem.partition.initial_idx] = problem.b_initial
    for _ in range(samples):
        x = center + rng.uniform(-1.0, 1.0, problem.n)
        t = float(rng.uniform(0.0, problem.horizon))
        yield x, t


def validate_problem(problem: ProblemDef,
                     samples: int = VALIDATION_SAMPLES,
                     tolerance: float = VALIDATION_TOLERANCE,
                     points: Optional[Sequence[Vector]] = None,
                     seed: int = 0) -> ValidationReport:
    """ Checks a problem definition and collects every violated invariant
        in the returned report instead of raising.

        Phase Jacobians and the objective gradient are compared against
        central finite differences at ``samples`` pseudo-random points
        around the initial data, or at the given ``points`` (evaluated at
        t = 0 and t = T).
    """
    findings = []
    notes = []
    n = problem.n

    if problem.n_phases < 1:
        findings.append('Problem has no phases')
    if len(problem.b_initial) != len(problem.partition.initial):
        findings.append('b_I does not match the initial index set')
    if len(problem.b_terminal) != len(problem.partition.terminal):
        findings.append('b_E does not match the terminal index set')

    if points is None:
        sample_points = list(_sample_points(problem, samples, seed))
    else:
        sample_points = [
            (np.asarray(point, dtype=float), t)
            for point in points for t in (0.0, problem.horizon)
        ]

    for position, phase in enumerate(problem.phases):
        if phase.label != position:
            findings.append(
                f'Phase at position {position} carries label {phase.label}'
            )
        if phase.approximate:
            notes.append(f'Phase {position} uses an approximate Jacobian')

        for x, t in sample_points:
            try:
                value = np.asarray(phase.rhs(x, t), dtype=float)
                jacobian = np.asarray(phase.jacobian(x, t), dtype=float)
            except Exception as e:
                findings.append(
                    f'Phase {position} failed to evaluate at t={t:g}: {e}'
                )
                break

            if value.shape != (n,):
                findings.append(
                    f'Phase {position} returns shape {value.shape}, '
                    f'expected ({n},)'
                )
                break
            if jacobian.shape != (n, n):
                findings.append(
                    f'Phase {position} Jacobian has shape {jacobian.shape}, '
                    f'expected ({n}, {n})'
                )
                break
            if not (np.all(np.isfinite(value))
                    and np.all(np.isfinite(jacobian))):
                findings.append(
                    f'Phase {position} is not finite at t={t:g}'
                )
                break

            reference = fd_jacobian(phase.rhs, x, t)
            scale = max(1.0, float(np.max(np.abs(jacobian))))
            error = float(np.max(np.abs(jacobian - reference)))
            if error > tolerance * scale:
                findings.append(
                    f'Phase {position} Jacobian is inconsistent with its '
                    f'dynamics (error {error:.3g} at t={t:g})'
                )
                break

    for x, _ in sample_points:
        gradient = np.asarray(problem.objective_gradient(x), dtype=float)
        if gradient.shape != (n,):
            findings.append(
                f'Objective gradient has shape {gradient.shape}, '
                f'expected ({n},)'
            )
            break
        reference = fd_gradient(problem.objective, x)
        scale = max(1.0, float(np.max(np.abs(gradient))))
        error = float(np.max(np.abs(gradient - reference)))
        if error > tolerance * scale:
            findings.append(
                f'Objective gradient is inconsistent with the objective '
                f'(error {error:.3g})'
            )
            break

    for finding in findings:
        logger.debug('Validation of %r: %s', problem.name, finding)

    return ValidationReport(tuple(findings), tuple(notes))


def phase_map(functions: Sequence[Callable], jacobians: Sequence[Callable]):
    """ Zips dynamics and Jacobian callables into labelled phases.
    """
    return tuple(
        PhaseDynamics(rhs, jacobian, label)
        for label, (rhs, jacobian) in enumerate(zip(functions, jacobians))
    )
