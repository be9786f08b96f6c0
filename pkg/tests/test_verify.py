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
from numpy.testing import assert_allclose
import pytest

from pyspa.errors import InvalidScheduleError, ShootingFailedError
from pyspa.types import SolverOptions
from pyspa.verify import (
    remainder_study, switch_perturbation_study, terminal_perturbation_study
)

from .util import benchmark


def test_terminal_perturbation_linear():
    # theta(pi) = theta(0) + pi exactly
    spec, schedule = benchmark('switched-integrator')
    study = terminal_perturbation_study(
        spec.problem, schedule, [1e-1, 1e-3, 1e-6]
    )
    assert_allclose(study.reference, 1.0)
    assert len(study.cases) == 3
    assert_allclose(study.ratios, [1.0, 1.0, 1.0], rtol=1e-6)
    assert all(case.direction == 0 for case in study.cases)
    assert_allclose(study.slope, 1.0, rtol=1e-6)


def test_terminal_perturbation_limit():
    spec, schedule = benchmark('double-integrator-target')
    study = terminal_perturbation_study(
        spec.problem, schedule, [1e-2, 1e-4, 1e-6], directions=[[-2.0]]
    )
    gamma = study.reference
    assert abs(study.ratios[-1] - gamma) / gamma <= 0.05

    # several terminal constraints: every ratio is bounded by gamma
    spec, schedule = benchmark('stacked-pair')
    study = terminal_perturbation_study(
        spec.problem, schedule, [1e-3, 1e-6], workers=2
    )
    assert len(study.cases) == 4
    assert [case.direction for case in study.cases] == [0, 0, 1, 1]
    assert all(
        ratio <= study.reference * (1 + 1e-6) for ratio in study.ratios
    )


def test_terminal_perturbation_invalid():
    spec, schedule = benchmark('double-integrator-target')
    problem = spec.problem

    # magnitudes must be positive and strictly decreasing
    with pytest.raises(ValueError):
        terminal_perturbation_study(problem, schedule, [0.0])
    with pytest.raises(ValueError):
        terminal_perturbation_study(problem, schedule, [1e-3, 1e-2])
    with pytest.raises(ValueError):
        terminal_perturbation_study(problem, schedule, [1e-3, 1e-3])

    # directions must match the terminal block
    with pytest.raises(ValueError):
        terminal_perturbation_study(
            problem, schedule, [1e-3], directions=[[1.0, 0.0]]
        )
    with pytest.raises(ValueError):
        terminal_perturbation_study(
            problem, schedule, [1e-3], directions=[[0.0]]
        )

    # the unperturbed problem has to be solvable
    with pytest.raises(ShootingFailedError):
        terminal_perturbation_study(
            problem, schedule, [1e-3], options=SolverOptions(max_iter=0)
        )


def test_switch_perturbation():
    # theta(s) = T - 2s
    spec, schedule = benchmark('double-integrator-target')
    study = switch_perturbation_study(
        spec.problem, schedule, 1, [1e-1, 1e-2, 1e-3]
    )
    assert study.reference is None
    assert_allclose(study.ratios, [2.0, 2.0, 2.0], atol=1e-3)
    assert max(study.ratios) / min(study.ratios) <= 2

    # theta(s) = b_E - (2sT - s^2 - T^2/2), so the ratio is 2(T - s) - delta
    spec, schedule = benchmark('switched-integrator')
    deltas = [1e-1, 1e-2, 1e-3]
    study = switch_perturbation_study(
        spec.problem, schedule, 1, deltas, workers=3
    )
    assert_allclose(
        study.ratios, [2.0 - delta for delta in deltas], atol=1e-9
    )

    # empty studies
    study = switch_perturbation_study(spec.problem, schedule, 1, [])
    assert study.cases == ()
    assert study.slope is None


def test_switch_perturbation_invalid():
    spec, schedule = benchmark('double-integrator-target')
    with pytest.raises(ValueError):
        switch_perturbation_study(spec.problem, schedule, 2, [1e-2])
    with pytest.raises(ValueError):
        switch_perturbation_study(spec.problem, schedule, 0, [1e-2])

    # s - delta leaves the horizon
    with pytest.raises(InvalidScheduleError):
        switch_perturbation_study(spec.problem, schedule, 1, [0.6])


def test_remainder_quadratic():
    spec, schedule = benchmark('double-integrator-target')
    deltas = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4]
    study = remainder_study(spec.problem, schedule, 1, deltas)
    assert 1.9 <= study.slope <= 2.1
    assert_allclose(study.objective, 0.5625, atol=1e-10)
    assert_allclose(study.derivative, -1.5, atol=1e-7)
    assert all(remainder >= 0 for remainder in study.remainders)

    # C''(0.5) = -1, so the remainder is close to delta^2 / 2
    assert_allclose(study.remainders[-1], 0.5e-8, rtol=1e-2)
    assert study.errors == (None,) * len(deltas)


def test_remainder_affine():
    # C(s) = 2s - T is affine: every remainder is round-off
    spec, schedule = benchmark('switched-integrator')
    study = remainder_study(spec.problem, schedule, 1, [1e-2, 1e-3, 1e-4])
    assert max(study.remainders) <= 1e-12
    assert study.slope is None


def test_remainder_single_delta():
    spec, schedule = benchmark('double-integrator-target')
    study = remainder_study(spec.problem, schedule, 1, [1e-3])
    assert study.slope is None
    assert len(study.remainders) == 1
    assert np.isfinite(study.remainders[0])
