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


import numpy as np
import pytest

from pyspa.bench import get_benchmark, list_benchmarks
from pyspa.errors import (
    DimensionMismatchError, IndexOutOfRangeError, InvalidScheduleError
)
from pyspa.problem import (
    check_schedule, default_eps_sep, fd_phase, make_problem, make_schedule,
    partition_indices, phase_map, validate_problem
)
from pyspa.types import PhaseDynamics


def _rotation_problem(phases):
    return make_problem(
        horizon=1.0,
        partition=partition_indices({1}, {2}, 2),
        b_initial=[0.0],
        b_terminal=[1.0],
        phases=phases,
        objective=lambda x: float(x[0] ** 2),
        objective_gradient=lambda x: np.array([2 * x[0], 0.0]),
    )


def _rotate(x, t):
    return np.array([x[1], -x[0]])


def _rotate_jacobian(x, t):
    return np.array([[0.0, 1.0], [-1.0, 0.0]])


def test_partition_indices():
    partition = partition_indices([1], [2], 2)
    assert partition.initial == (1,)
    assert partition.terminal == (2,)
    assert partition.unknown == (2,)
    assert partition.free == (1,)
    assert partition.unknown_idx.tolist() == [1]

    # a component may be fixed at both ends
    partition = partition_indices({1, 2}, {1, 4}, 4)
    assert partition.unknown == (3, 4)
    assert partition.free == (2, 3)

    # duplicates are ignored, order is normalized
    partition = partition_indices([2, 1, 1], [], 2)
    assert partition.initial == (1, 2)

    # out of range indices
    with pytest.raises(IndexOutOfRangeError):
        partition_indices({0}, {1}, 2)
    with pytest.raises(IndexOutOfRangeError):
        partition_indices({1}, {3}, 2)

    # |I| + |E| != n
    with pytest.raises(DimensionMismatchError):
        partition_indices({1}, set(), 2)
    with pytest.raises(ValueError):
        partition_indices({1, 2}, {1}, 2)


def test_make_problem():
    problem = _rotation_problem(phase_map([_rotate], [_rotate_jacobian]))
    assert problem.n == 2
    assert problem.n_phases == 1
    assert problem.n_switches == 0

    # boundary data is frozen
    with pytest.raises(ValueError):
        problem.b_initial[0] = 1.0

    # invalid horizon
    with pytest.raises(ValueError):
        make_problem(
            0.0, problem.partition, [0.0], [1.0], problem.phases,
            problem.objective, problem.objective_gradient
        )

    # no phases
    with pytest.raises(ValueError):
        make_problem(
            1.0, problem.partition, [0.0], [1.0], (),
            problem.objective, problem.objective_gradient
        )

    # boundary vectors not matching the partition
    with pytest.raises(DimensionMismatchError):
        make_problem(
            1.0, problem.partition, [0.0, 1.0], [1.0], problem.phases,
            problem.objective, problem.objective_gradient
        )
    with pytest.raises(DimensionMismatchError):
        make_problem(
            1.0, problem.partition, [0.0], [], problem.phases,
            problem.objective, problem.objective_gradient
        )


def test_check_schedule():
    # valid schedules pass silently
    check_schedule([0.5], 1.0, 1)
    check_schedule([], 1.0, 0)
    check_schedule([0.25, 0.5, 0.75], 1.0, 3)

    # wrong number of switch times
    with pytest.raises(InvalidScheduleError):
        check_schedule([0.5], 1.0, 2)

    # out of order
    with pytest.raises(InvalidScheduleError):
        check_schedule([0.6, 0.4], 1.0, 2)

    # coinciding times
    with pytest.raises(InvalidScheduleError):
        check_schedule([0.5, 0.5], 1.0, 2)

    # on or outside of the horizon
    with pytest.raises(InvalidScheduleError):
        check_schedule([0.0], 1.0, 1)
    with pytest.raises(InvalidScheduleError):
        check_schedule([1.0], 1.0, 1)
    with pytest.raises(InvalidScheduleError):
        check_schedule([1.5], 1.0, 1)

    # not finite
    with pytest.raises(InvalidScheduleError):
        check_schedule([float('nan')], 1.0, 1)

    # separation
    with pytest.raises(InvalidScheduleError):
        check_schedule([0.5, 0.505], 1.0, 2, eps_sep=0.01)
    check_schedule([0.5, 0.51], 1.0, 2, eps_sep=0.01)
    assert default_eps_sep(2.0) == 2e-8
    check_schedule([2e-8], 2.0, 1)

    # projected gaps may fall short of eps_sep by round-off in the times
    check_schedule([1.25, 1.25 + 3e-8 - 4.4e-16], 3.0, 2)
    with pytest.raises(InvalidScheduleError):
        check_schedule([1.25, 1.25 + 2.9e-8], 3.0, 2)


def test_make_schedule():
    spec = get_benchmark('double-integrator-target')
    schedule = make_schedule([0.5], spec.problem)
    assert schedule.as_tuple() == (0.5,)
    assert len(schedule) == 1
    with pytest.raises(InvalidScheduleError):
        make_schedule([0.5, 1.0], spec.problem)


def test_validate_problem():
    # built-in benchmarks are consistent
    for name in list_benchmarks():
        report = validate_problem(get_benchmark(name).problem)
        assert report.valid, (name, report.findings)
        assert report.notes == ()

    # inconsistent Jacobian
    problem = _rotation_problem((
        PhaseDynamics(_rotate, lambda x, t: np.eye(2)),
    ))
    report = validate_problem(problem)
    assert not report.valid
    assert 'Jacobian is inconsistent' in report.findings[0]

    # phase labels must match their positions
    problem = _rotation_problem((
        PhaseDynamics(_rotate, _rotate_jacobian, label=0),
        PhaseDynamics(_rotate, _rotate_jacobian, label=0),
    ))
    report = validate_problem(problem)
    assert report.findings == (
        'Phase at position 1 carries label 0',
    )

    # wrong output shape
    problem = _rotation_problem((
        PhaseDynamics(lambda x, t: np.zeros(3), _rotate_jacobian),
    ))
    assert 'shape' in validate_problem(problem).findings[0]

    # inconsistent objective gradient
    problem = make_problem(
        horizon=1.0,
        partition=partition_indices({1}, {2}, 2),
        b_initial=[0.0],
        b_terminal=[1.0],
        phases=phase_map([_rotate], [_rotate_jacobian]),
        objective=lambda x: float(x[0] ** 2),
        objective_gradient=lambda x: np.array([x[0], 0.0]),
    )
    report = validate_problem(problem)
    assert report.findings == (
        report.findings[0],
    )
    assert 'Objective gradient' in report.findings[0]

    # explicit points are checked at both ends of the horizon
    report = validate_problem(
        _rotation_problem(phase_map([_rotate], [_rotate_jacobian])),
        points=[np.array([1.0, 2.0])]
    )
    assert report.valid


def test_fd_phase():
    phase = fd_phase(_rotate, label=0)
    assert phase.approximate
    np.testing.assert_allclose(
        phase.jacobian(np.array([0.3, 0.4]), 0.0), _rotate_jacobian(None, 0),
        atol=1e-9
    )

    # approximate Jacobians are noted, not reported as violations
    report = validate_problem(_rotation_problem((phase,)))
    assert report.valid
    assert report.notes == ('Phase 0 uses an approximate Jacobian',)
