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

from pyspa.bench import get_benchmark
from pyspa.problem import (
    make_problem, make_schedule, partition_indices, phase_map
)
from pyspa.types import PhaseDynamics, SwitchSchedule


def benchmark(name, times=None, **params):
    """ Returns the benchmark spec and a validated schedule, the default
        one unless ``times`` is given.
    """
    spec = get_benchmark(name, params)
    schedule = make_schedule(
        spec.schedule if times is None else times, spec.problem
    )
    return spec, schedule


def random_schedules(horizon, count, seed=0, margin=0.05):
    """ Single-switch schedules drawn uniformly from the interior of the
        horizon, away from its ends.
    """
    rng = np.random.default_rng(seed)
    return [
        SwitchSchedule(np.array([t]))
        for t in rng.uniform(margin * horizon, (1 - margin) * horizon, count)
    ]


def scalar_problem(rhs, jacobian, initial=True, b=1.0, horizon=1.0):
    """ Single phase, single state problem with ``C = x(T)``. The value
        ``b`` is either the initial or the terminal condition.
    """
    if initial:
        partition = partition_indices({1}, set(), 1)
        b_initial, b_terminal = [b], []
    else:
        partition = partition_indices(set(), {1}, 1)
        b_initial, b_terminal = [], [b]
    return make_problem(
        horizon=horizon,
        partition=partition,
        b_initial=b_initial,
        b_terminal=b_terminal,
        phases=(PhaseDynamics(rhs, jacobian),),
        objective=lambda x: float(x[0]),
        objective_gradient=lambda x: np.array([1.0]),
    )


def cubic_decay(b_terminal):
    """ x' = -x^3 with x(1) fixed, so that x(t) = x0 / sqrt(1 + 2 x0^2 t).
    """
    return scalar_problem(
        lambda x, t: -x ** 3,
        lambda x, t: np.array([[-3.0 * x[0] ** 2]]),
        initial=False, b=b_terminal,
    )


def exponential_growth():
    """ x' = x with x(0) = 1, so that x(1) = e.
    """
    return scalar_problem(
        lambda x, t: np.array(x),
        lambda x, t: np.eye(1),
    )


def three_phase(controls=(1.0, -1.0, 1.0), target=0.0, scale=1.0,
                shift=0.0, horizon=3.0):
    """ Double integrator x1' = x2, x2' = u_i over three phases with
        x1(0) = 0, x2(T) = 0 and C = scale / 2 (x1(T) - target)^2 + shift.

        For the default controls x1(T) = s2^2 - s1^2 - T^2 / 2, so that
        dx1(T)/ds = (-2 s1, 2 s2).
    """
    def constant(u):
        return lambda x, t: np.array([x[1], u])

    def jacobian(x, t):
        return np.array([[0.0, 1.0], [0.0, 0.0]])

    return make_problem(
        horizon=horizon,
        partition=partition_indices({1}, {2}, 2),
        b_initial=[0.0],
        b_terminal=[0.0],
        phases=phase_map(
            [constant(u) for u in controls], [jacobian] * len(controls)
        ),
        objective=lambda x: float(
            scale / 2 * (x[0] - target) ** 2 + shift
        ),
        objective_gradient=lambda x: np.array(
            [scale * (x[0] - target), 0.0]
        ),
    )


def ordered_pairs(horizon, count, seed=0, margin=0.05):
    """ Two-switch schedules with both times and their gap kept away
        from the horizon ends.
    """
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < count:
        a, b = np.sort(rng.uniform(margin * horizon, (1 - margin) * horizon,
                                   2))
        if b - a >= margin * horizon:
            pairs.append(SwitchSchedule(np.array([a, b])))
    return pairs
