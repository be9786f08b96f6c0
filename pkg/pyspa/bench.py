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


from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from .errors import (
    InvalidOverrideError, NoReferenceError, UnknownBenchmarkError
)
from .problem import make_problem, partition_indices, phase_map
from .types import Matrix, ProblemDef, SwitchSchedule, Vector

Params = Dict[str, Any]


@dataclass(frozen=True, eq=False)
class ReferenceValues:
    theta: Vector
    objective: float
    derivative: Vector
    p0: Vector
    p_final: Vector


@dataclass(frozen=True, eq=False)
class BenchmarkSpec:
    name: str
    problem: ProblemDef
    schedule: Tuple[float, ...]
    params: Params
    reference: Optional[Callable[[SwitchSchedule], ReferenceValues]] = None
    fundamental: Optional[Callable[[float], Tuple[Matrix, Matrix]]] = None
    notes: str = field(default='')


def _switched_integrator(params: Params) -> BenchmarkSpec:
    horizon = params['horizon']
    x1_0 = params['x1_0']
    x2_final = params['x2_final']

    def jacobian(x, t):
        return np.array([[0.0, 0.0], [1.0, 0.0]])

    problem = make_problem(
        horizon=horizon,
        partition=partition_indices({1}, {2}, 2),
        b_initial=[x1_0],
        b_terminal=[x2_final],
        phases=phase_map(
            [
                lambda x, t: np.array([1.0, x[0]]),
                lambda x, t: np.array([-1.0, x[0]]),
            ],
            [jacobian, jacobian],
        ),
        objective=lambda x: float(x[0]),
        objective_gradient=lambda x: np.array([1.0, 0.0]),
        name='switched-integrator',
    )

    def reference(schedule: SwitchSchedule) -> ReferenceValues:
        s = float(schedule.times[0])
        area = x1_0 * horizon + 2 * s * horizon - s ** 2 - horizon ** 2 / 2
        return ReferenceValues(
            theta=np.array([x2_final - area]),
            objective=x1_0 + 2 * s - horizon,
            derivative=np.array([2.0]),
            p0=np.array([1.0, 0.0]),
            p_final=np.array([1.0, 0.0]),
        )

    return BenchmarkSpec(
        'switched-integrator', problem, (horizon / 2,), params, reference,
        notes='x1 = x1_0 + t, then x1_0 + 2s - t; x2(T) = theta + integral '
              'of x1. C(s) = x1_0 + 2s - T, dC/ds = 2.',
    )


def _double_integrator_target(params: Params) -> BenchmarkSpec:
    horizon = params['horizon']
    target = params['target']
    x1_0 = params['x1_0']
    x2_0 = params['x2_0']
    x2_final = params['x2_final']
    terminal = bool(params['terminal'])

    def jacobian(x, t):
        return np.array([[0.0, 1.0], [0.0, 0.0]])

    if terminal:
        partition = partition_indices({1}, {2}, 2)
        b_initial, b_terminal = [x1_0], [x2_final]
    else:
        partition = partition_indices({1, 2}, set(), 2)
        b_initial, b_terminal = [x1_0, x2_0], []

    problem = make_problem(
        horizon=horizon,
        partition=partition,
        b_initial=b_initial,
        b_terminal=b_terminal,
        phases=phase_map(
            [
                lambda x, t: np.array([x[1], 1.0]),
                lambda x, t: np.array([x[1], -1.0]),
            ],
            [jacobian, jacobian],
        ),
        objective=lambda x: float((x[0] - target) ** 2),
        objective_gradient=lambda x: np.array([2.0 * (x[0] - target), 0.0]),
        name='double-integrator-target',
    )

    def reference(schedule: SwitchSchedule) -> ReferenceValues:
        s = float(schedule.times[0])
        if terminal:
            start = x2_final + horizon - 2 * s
            theta = np.array([start])
            slope = -2 * s
        else:
            start = x2_0
            theta = np.zeros(0)
            slope = 2 * horizon - 2 * s
        x1_final = (
            x1_0 + start * horizon - s ** 2 + 2 * s * horizon
            - horizon ** 2 / 2
        )
        p1 = 2 * (x1_final - target)
        if terminal:
            p0 = np.array([p1, 0.0])
            p_final = np.array([p1, -p1 * horizon])
        else:
            p0 = np.array([p1, p1 * horizon])
            p_final = np.array([p1, 0.0])
        return ReferenceValues(
            theta=theta,
            objective=(x1_final - target) ** 2,
            derivative=np.array([p1 * slope]),
            p0=p0,
            p_final=p_final,
        )

    return BenchmarkSpec(
        'double-integrator-target', problem, (0.5,), params, reference,
        notes='x2 = theta + t, then theta + 2s - t. With x2(T) fixed, '
              'theta = x2(T) + T - 2s and x1(T) = x1_0 + T^2/2 - s^2 + '
              'x2(T) T, so C(s) = (1 - s^2)^2 for the default data.',
    )


def _lti_nilpotent(params: Params) -> BenchmarkSpec:
    horizon = params['horizon']
    x0 = np.array([params['x1_0'], params['x2_0']])
    a = np.array([[0.0, 1.0], [0.0, 0.0]])

    problem = make_problem(
        horizon=horizon,
        partition=partition_indices({1, 2}, set(), 2),
        b_initial=x0,
        b_terminal=[],
        phases=phase_map([lambda x, t: a @ x], [lambda x, t: a]),
        objective=lambda x: float(x[0]),
        objective_gradient=lambda x: np.array([1.0, 0.0]),
        name='lti-nilpotent',
    )

    def reference(schedule: SwitchSchedule) -> ReferenceValues:
        return ReferenceValues(
            theta=np.zeros(0),
            objective=float(x0[0] + x0[1] * horizon),
            derivative=np.zeros(0),
            p0=np.array([1.0, horizon]),
            p_final=np.array([1.0, 0.0]),
        )

    def fundamental(t: float) -> Tuple[Matrix, Matrix]:
        return np.eye(2) + a * t, np.eye(2) - a.T * t

    return BenchmarkSpec(
        'lti-nilpotent', problem, (), params, reference, fundamental,
        notes='A is nilpotent, so exp(At) = I + At and '
              'exp(-A^T t) = I - A^T t.',
    )


def _stacked_pair(params: Params) -> BenchmarkSpec:
    horizon = params['horizon']
    x1_final = params['x1_final']
    weight = params['weight']

    # generalized state z = (x1, x2, p1, p2) of a double integrator whose
    # second phase is driven by the costate feedback u = -p2
    def bang(z, t):
        return np.array([z[1], 1.0, 0.0, -z[2]])

    def feedback(z, t):
        return np.array([z[1], -z[3], 0.0, -z[2]])

    def bang_jacobian(z, t):
        jacobian = np.zeros((4, 4))
        jacobian[0, 1] = 1.0
        jacobian[3, 2] = -1.0
        return jacobian

    def feedback_jacobian(z, t):
        jacobian = bang_jacobian(z, t)
        jacobian[1, 3] = -1.0
        return jacobian

    problem = make_problem(
        horizon=horizon,
        partition=partition_indices({1, 2}, {1, 4}, 4),
        b_initial=[0.0, 0.0],
        b_terminal=[x1_final, 0.0],
        phases=phase_map(
            [bang, feedback], [bang_jacobian, feedback_jacobian]
        ),
        objective=lambda z: float(0.5 * z[1] ** 2 + 0.5 * weight * z[2] ** 2),
        objective_gradient=lambda z: np.array(
            [0.0, z[1], weight * z[2], 0.0]
        ),
        name='stacked-pair',
    )
    return BenchmarkSpec(
        'stacked-pair', problem, (0.4 * horizon,), params,
        notes='State and costate stacked into one generalized state; '
              'validated against finite differences only.',
    )


BENCHMARKS: Dict[str, Tuple[Callable[[Params], BenchmarkSpec], Params]] = {
    'switched-integrator': (_switched_integrator, {
        'horizon': 2.0,
        'x1_0': 0.0,
        'x2_final': 1.0,
    }),
    'double-integrator-target': (_double_integrator_target, {
        'horizon': 2.0,
        'target': 1.0,
        'x1_0': 0.0,
        'x2_0': 1.0,
        'x2_final': 0.0,
        'terminal': True,
    }),
    'lti-nilpotent': (_lti_nilpotent, {
        'horizon': 2.0,
        'x1_0': 0.0,
        'x2_0': 1.0,
    }),
    'stacked-pair': (_stacked_pair, {
        'horizon': 2.0,
        'x1_final': 1.0,
        'weight': 1.0,
    }),
}


def list_benchmarks() -> Tuple[str, ...]:
    return tuple(sorted(BENCHMARKS))


def _coerce(name: str, key: str, default: Any, value: Any) -> Any:
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise InvalidOverrideError(
                f'Parameter {key!r} of {name!r} must be a boolean'
            )
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidOverrideError(
            f'Parameter {key!r} of {name!r} must be a number'
        )
    if not np.isfinite(value):
        raise InvalidOverrideError(
            f'Parameter {key!r} of {name!r} must be finite'
        )
    return float(value)


def get_benchmark(name: str,
                  params: Optional[Mapping[str, Any]] = None
                  ) -> BenchmarkSpec:
    """ Returns the registered benchmark ``name`` with the given parameter
        overrides applied.

        >>> spec = get_benchmark('double-integrator-target')
        >>> spec.problem.partition.terminal, spec.schedule
        ((2,), (0.5,))
        >>> get_benchmark('double-integrator-target', {'terminal': False}
        ...               ).problem.partition.terminal
        ()
    """
    try:
        builder, defaults = BENCHMARKS[name]
    except KeyError:
        raise UnknownBenchmarkError(
            f'Unknown benchmark {name!r}, choose from '
            f'{", ".join(list_benchmarks())}'
        ) from None

    merged = dict(defaults)
    for key, value in (params or {}).items():
        if key not in defaults:
            raise InvalidOverrideError(
                f'Benchmark {name!r} has no parameter {key!r}'
            )
        merged[key] = _coerce(name, key, defaults[key], value)

    if merged['horizon'] <= 0:
        raise InvalidOverrideError('horizon must be positive')
    return builder(merged)


def reference_values(spec: BenchmarkSpec,
                     schedule: SwitchSchedule) -> ReferenceValues:
    """ Evaluates the closed-form solution of a benchmark at ``schedule``.
    """
    if spec.reference is None:
        raise NoReferenceError(
            f'Benchmark {spec.name!r} has no closed-form reference'
        )
    return spec.reference(schedule)
