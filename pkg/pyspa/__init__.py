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


from .bench import get_benchmark, list_benchmarks, reference_values
from .costate import solve_costate
from .gradient import evaluate, fd_gradient_oracle, objective
from .integrator import build_mesh, integrate_phi, integrate_psi, \
    integrate_state
from .optimizer import optimize, project_schedule
from .problem import make_problem, make_schedule, partition_indices, \
    validate_problem
from .shooting import newton_certificate, solve_boundary
from .verify import remainder_study, switch_perturbation_study, \
    terminal_perturbation_study

__version__ = '0.1.0'

__all__ = [
    'build_mesh', 'evaluate', 'fd_gradient_oracle', 'get_benchmark',
    'integrate_phi', 'integrate_psi', 'integrate_state', 'list_benchmarks',
    'make_problem', 'make_schedule', 'newton_certificate', 'objective',
    'optimize', 'partition_indices', 'project_schedule', 'reference_values',
    'remainder_study', 'solve_boundary', 'solve_costate',
    'switch_perturbation_study', 'terminal_perturbation_study',
    'validate_problem',
]
