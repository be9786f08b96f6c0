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


import math

import numpy as np
from numpy.testing import assert_allclose
import pytest
from scipy.linalg import expm

from pyspa.costate import integrate_costate, solve_costate
from pyspa.errors import (
    DimensionMismatchError, InvalidScheduleError, NonFiniteStateError,
    NotANodeError
)
from pyspa.integrator import (
    build_mesh, integrate_phi, integrate_psi, integrate_state,
    linearized_state, node_index
)
from pyspa.shooting import solve_boundary
from pyspa.types import SolverOptions, SwitchSchedule

from .util import benchmark, exponential_growth, scalar_problem


def test_build_mesh():
    mesh = build_mesh(2.0, SwitchSchedule(np.array([0.5, 1.25])), 10)
    nodes = mesh.nodes
    assert nodes[0] == 0.0 and nodes[-1] == 2.0
    assert np.all(np.diff(nodes) > 0)

    # switch times are nodes and separate the phases
    assert [nodes[k] for k in mesh.switch_nodes] == [0.5, 1.25]
    assert mesh.switch_nodes == (5, 13)
    assert mesh.phase_of_interval.tolist() == [0] * 5 + [1] * 8 + [2] * 8
    assert len(mesh) == mesh.n_intervals + 1 == 22

    # step counts are not inflated by round-off
    mesh = build_mesh(1.0, SwitchSchedule(np.array([0.3])), 10)
    assert len(mesh) == 11
    assert mesh.switch_nodes == (3,)

    # short phases get at least one step
    mesh = build_mesh(1.0, SwitchSchedule(np.array([1e-6])), 10)
    assert mesh.switch_nodes == (1,)

    # invalid input
    with pytest.raises(ValueError):
        build_mesh(1.0, SwitchSchedule(np.array([0.5])), 0)
    with pytest.raises(InvalidScheduleError):
        build_mesh(1.0, SwitchSchedule(np.array([0.7, 0.3])), 10)


def test_node_index():
    mesh = build_mesh(2.0, SwitchSchedule(np.array([0.5])), 10)
    assert node_index(mesh, 0.0) == 0
    assert node_index(mesh, 0.5) == 5
    assert node_index(mesh, 2.0) == len(mesh) - 1
    with pytest.raises(NotANodeError):
        node_index(mesh, 0.55)


def test_integrate_state_double_integrator():
    spec, schedule = benchmark('double-integrator-target')
    traj = integrate_state(spec.problem, schedule, [1.0])
    t = traj.mesh.nodes

    # x2 = 1 + t, then 1 + 2s - t; piecewise polynomial, so RK4 is exact
    s = 0.5
    x2 = np.where(t <= s, 1 + t, 1 + 2 * s - t)
    x1 = np.where(
        t <= s, t + t ** 2 / 2,
        s + s ** 2 / 2 + (1 + 2 * s) * (t - s) - (t ** 2 - s ** 2) / 2
    )
    assert_allclose(traj.values[:, 1], x2, atol=1e-12)
    assert_allclose(traj.values[:, 0], x1, atol=1e-12)
    assert_allclose(traj.theta, [1.0])

    # results are read only
    with pytest.raises(ValueError):
        traj.values[0, 0] = 1.0

    # theta must match the unknown components
    with pytest.raises(DimensionMismatchError):
        integrate_state(spec.problem, schedule, [1.0, 2.0])


def test_integrate_state_blow_up():
    problem = scalar_problem(
        lambda x, t: x ** 2, lambda x, t: np.array([[2 * x[0]]]),
        horizon=2.0,
    )
    schedule = SwitchSchedule(np.zeros(0))
    with pytest.raises(NonFiniteStateError) as info:
        integrate_state(problem, schedule, [])
    assert info.value.node > 0
    assert info.value.time > 0.5


def test_rk4_order():
    problem = exponential_growth()
    schedule = SwitchSchedule(np.zeros(0))
    errors = [
        abs(integrate_state(
            problem, schedule, [], SolverOptions(steps_per_unit=steps)
        ).final[0] - math.e)
        for steps in (10, 20)
    ]
    assert 14 <= errors[0] / errors[1] <= 18


def test_fundamental_matrices_nilpotent():
    spec, schedule = benchmark('lti-nilpotent')
    traj = integrate_state(spec.problem, schedule, [])
    horizon = spec.problem.horizon
    a = np.array([[0.0, 1.0], [0.0, 0.0]])

    phi = integrate_phi(spec.problem, traj)
    psi = integrate_psi(spec.problem, traj)
    assert phi.kind == 'phi' and psi.kind == 'psi'
    assert_allclose(phi.final, [[1.0, horizon], [0.0, 1.0]], atol=1e-10)
    assert_allclose(phi.final, expm(a * horizon), atol=1e-10)
    assert_allclose(psi.final, expm(-a.T * horizon), atol=1e-10)

    # closed forms on every node
    for t, phi_t, psi_t in zip(traj.mesh.nodes, phi.matrices, psi.matrices):
        phi_ref, psi_ref = spec.fundamental(t)
        assert_allclose(phi_t, phi_ref, atol=1e-10)
        assert_allclose(psi_t, psi_ref, atol=1e-10)


def test_fundamental_matrices_nonlinear():
    # x' = -x^2, x(0) = 1: x = 1 / (1 + t) and Phi = 1 / (1 + t)^2
    problem = scalar_problem(
        lambda x, t: -x ** 2, lambda x, t: np.array([[-2 * x[0]]])
    )
    traj = integrate_state(problem, SwitchSchedule(np.zeros(0)), [])
    phi = integrate_phi(problem, traj)
    psi = integrate_psi(problem, traj)
    t = traj.mesh.nodes
    assert_allclose(phi.matrices[:, 0, 0], 1 / (1 + t) ** 2, rtol=1e-8)
    assert_allclose(psi.matrices[:, 0, 0], (1 + t) ** 2, rtol=1e-8)


def test_duality():
    for name in ('double-integrator-target', 'stacked-pair',
                 'switched-integrator'):
        spec, schedule = benchmark(name)
        traj = solve_boundary(spec.problem, schedule).trajectory
        phi = integrate_phi(spec.problem, traj)
        psi = integrate_psi(spec.problem, traj)
        products = np.transpose(psi.matrices, (0, 2, 1)) @ phi.matrices
        assert_allclose(
            products, np.broadcast_to(np.eye(spec.problem.n), products.shape),
            atol=1e-8
        )


def test_linearized_state():
    spec, schedule = benchmark('double-integrator-target')
    problem = spec.problem
    traj = solve_boundary(problem, schedule).trajectory
    phi = integrate_phi(problem, traj)
    z0 = np.array([0.3, -1.2])

    z = linearized_state(problem, traj, z0)
    assert_allclose(z, phi.matrices @ z0, atol=1e-12)

    # p(t) Z(t) is conserved along the trajectory
    costate = solve_costate(problem, traj)
    products = np.einsum('ki,ki->k', costate.values, z)
    assert_allclose(products, products[0], atol=1e-10)

    # the same holds for an independently integrated costate
    p = integrate_costate(problem, traj, costate.p0)
    products = np.einsum('ki,ki->k', p, z)
    assert_allclose(products, products[0], atol=1e-10)

    with pytest.raises(DimensionMismatchError):
        linearized_state(problem, traj, [1.0])
