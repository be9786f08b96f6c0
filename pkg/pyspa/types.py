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
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

# type aliases
Vector = np.ndarray
Matrix = np.ndarray
StateMap = Callable[[Vector, float], Vector]
JacobianMap = Callable[[Vector, float], Matrix]
ObjectiveMap = Callable[[Vector], float]
GradientMap = Callable[[Vector], Vector]


@dataclass(frozen=True)
class IndexPartition:
    """ Partition of the state components into the ones fixed at t=0
        (``initial``) and at t=T (``terminal``), together with their
        complements: the unknown initial components (``unknown``) and the
        free terminal components (``free``). All indices are 1-based.
    """
    n: int
    initial: Tuple[int, ...]
    terminal: Tuple[int, ...]
    unknown: Tuple[int, ...]
    free: Tuple[int, ...]

    @property
    def initial_idx(self) -> np.ndarray:
        return np.array(self.initial, dtype=int) - 1

    @property
    def terminal_idx(self) -> np.ndarray:
        return np.array(self.terminal, dtype=int) - 1

    @property
    def unknown_idx(self) -> np.ndarray:
        return np.array(self.unknown, dtype=int) - 1

    @property
    def free_idx(self) -> np.ndarray:
        return np.array(self.free, dtype=int) - 1


@dataclass(frozen=True)
class PhaseDynamics:
    """ Dynamics F_i(x, t) of a single phase and its state Jacobian.
        ``approximate`` marks Jacobians built by finite differences.
    """
    rhs: StateMap
    jacobian: JacobianMap
    label: int = 0
    approximate: bool = False


@dataclass(frozen=True, eq=False)
class ProblemDef:
    horizon: float
    partition: IndexPartition
    b_initial: Vector
    b_terminal: Vector
    phases: Tuple[PhaseDynamics, ...]
    objective: ObjectiveMap
    objective_gradient: GradientMap
    name: str = ''

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def n_phases(self) -> int:
        return len(self.phases)

    @property
    def n_switches(self) -> int:
        return len(self.phases) - 1


@dataclass(frozen=True, eq=False)
class SwitchSchedule:
    """ Interior switch times s_1 < ... < s_{N-1}. s_0 = 0 and s_N = T
        are implicit.
    """
    times: Vector

    def __len__(self) -> int:
        return len(self.times)

    def as_tuple(self) -> Tuple[float, ...]:
        return tuple(float(t) for t in self.times)


@dataclass(frozen=True)
class SolverOptions:
    steps_per_unit: int = 200
    tol_res: float = 1e-10
    max_iter: int = 50
    max_halvings: int = 20
    cond_limit: float = 1e12

    def __post_init__(self):
        if self.steps_per_unit < 1:
            raise ValueError('steps_per_unit must be at least 1')
        if self.tol_res <= 0:
            raise ValueError('tol_res must be positive')
        if self.max_iter < 0:
            raise ValueError('max_iter must not be negative')


@dataclass(frozen=True, eq=False)
class Mesh:
    nodes: Vector
    phase_of_interval: np.ndarray
    switch_nodes: Tuple[int, ...]

    @property
    def n_intervals(self) -> int:
        return len(self.nodes) - 1

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """ State samples on every mesh node. ``slopes[k]`` holds the phase
        dynamics of interval k evaluated at its left and right node, which
        the matrix integrators use for Hermite interpolation.
    """
    mesh: Mesh
    values: Matrix
    theta: Vector
    slopes: np.ndarray

    @property
    def final(self) -> Vector:
        return self.values[-1]


@dataclass(frozen=True, eq=False)
class MatrixTrajectory:
    mesh: Mesh
    matrices: np.ndarray
    kind: str

    @property
    def final(self) -> Matrix:
        return self.matrices[-1]


@dataclass(frozen=True, eq=False)
class CostateTrajectory:
    mesh: Mesh
    values: Matrix
    p0: Vector
    terminal_gradient: Vector


@dataclass(frozen=True, eq=False)
class ShootingResult:
    theta: Vector
    trajectory: Trajectory
    residual: Vector
    residual_norm: float
    iterations: int
    gamma: float
    converged: bool
    jacobian: Matrix
    history: Tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class NewtonCertificate:
    gamma: float
    epsilon: float
    delta: float
    r: float
    bound: Optional[float]
    hypotheses_hold: bool
    theta_start: Vector
    samples: int


@dataclass(frozen=True)
class HamiltonianPair:
    time: float
    left: float
    right: float


@dataclass(frozen=True, eq=False)
class GradientReport:
    objective: float
    grad: Optional[Vector]
    hamiltonians: Tuple[HamiltonianPair, ...]
    shooting: ShootingResult
    costate_ok: bool
    costate: Optional[CostateTrajectory] = None


class Method(str, Enum):
    GRADIENT_DESCENT = 'gradient-descent'
    LBFGS = 'lbfgs'
    CG = 'cg'


class Termination(str, Enum):
    GRAD_TOL = 'grad_tol'
    MAX_ITERS = 'max_iters'
    LINE_SEARCH_FAILURE = 'line_search_failure'
    BOUNDARY = 'boundary'
    EVALUATION_FAILURE = 'evaluation_failure'


@dataclass(frozen=True)
class OptimizeOptions:
    method: Method = Method.LBFGS
    max_iters: int = 200
    grad_tol: float = 1e-8
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    lbfgs_memory: int = 10
    eps_sep: Optional[float] = None
    min_step: float = 1e-14

    def __post_init__(self):
        # accept plain strings for the method
        object.__setattr__(self, 'method', Method(self.method))
        if not 0 < self.armijo_c <= 0.5:
            raise ValueError('armijo_c must lie in (0, 0.5]')
        if not 0 < self.backtrack_factor < 1:
            raise ValueError('backtrack_factor must lie in (0, 1)')
        if self.lbfgs_memory < 1:
            raise ValueError('lbfgs_memory must be at least 1')
        if self.max_iters < 0:
            raise ValueError('max_iters must not be negative')
        if self.eps_sep is not None and self.eps_sep < 0:
            raise ValueError('eps_sep must not be negative')


@dataclass(frozen=True)
class IterationRecord:
    schedule: Tuple[float, ...]
    objective: float
    grad_norm: float


@dataclass(frozen=True, eq=False)
class OptimizeResult:
    s_star: SwitchSchedule
    objective: float
    grad_norm: float
    iterations: int
    history: Tuple[IterationRecord, ...]
    termination: Termination
    theta: Optional[Vector] = None
    message: str = ''


@dataclass(frozen=True)
class PerturbationCase:
    magnitude: float
    direction: Optional[int]
    ratio: Optional[float]
    change: Optional[float] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class PerturbationStudy:
    magnitudes: Tuple[float, ...]
    cases: Tuple[PerturbationCase, ...]
    reference: Optional[float]
    slope: Optional[float]

    @property
    def ratios(self) -> Tuple[float, ...]:
        return tuple(
            case.ratio for case in self.cases if case.ratio is not None
        )


@dataclass(frozen=True)
class RemainderStudy:
    deltas: Tuple[float, ...]
    remainders: Tuple[Optional[float], ...]
    slope: Optional[float]
    objective: float
    derivative: float
    errors: Tuple[Optional[str], ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    """ Outcome of a problem validation. ``findings`` lists violated
        invariants, ``notes`` lists informational remarks (such as
        approximate Jacobians) that do not invalidate the problem.
    """
    findings: Tuple[str, ...] = ()
    notes: Tuple[str, ...] = field(default=())

    @property
    def valid(self) -> bool:
        return not self.findings
