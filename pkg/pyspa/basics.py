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


from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import SingularMatrixError
from .types import Matrix, Vector

FD_STEP = 1e-6


def _fd_steps(x: Vector, step: float) -> Vector:
    return step * np.maximum(1.0, np.abs(x))


def fd_jacobian(func: Callable[[Vector, float], Vector], x: Vector,
                t: float, step: float = FD_STEP) -> Matrix:
    """ Approximates the Jacobian of ``func(x, t)`` with respect to ``x``
        by central differences. The step for component k is
        ``step * max(1, |x_k|)``.

        >>> import numpy as np
        >>> rotate = lambda x, t: np.array([x[1], -x[0]])
        >>> fd_jacobian(rotate, np.array([1.0, 2.0]), 0.0).round(6).tolist()
        [[0.0, 1.0], [-1.0, 0.0]]
    """
    x = np.asarray(x, dtype=float)
    steps = _fd_steps(x, step)
    columns = []
    for k, h in enumerate(steps):
        e = np.zeros_like(x)
        e[k] = h
        columns.append(
            (np.asarray(func(x + e, t)) - np.asarray(func(x - e, t))) / (2 * h)
        )
    if not columns:
        return np.zeros((0, 0))
    return np.column_stack(columns)


def fd_gradient(func: Callable[[Vector], float], x: Vector,
                step: float = FD_STEP) -> Vector:
    """ Central-difference gradient of a scalar function.

        >>> import numpy as np
        >>> fd_gradient(lambda x: x[0] ** 2 + 3 * x[1], np.array([1.0, 0.0])
        ...             ).round(6).tolist()
        [2.0, 3.0]
    """
    x = np.asarray(x, dtype=float)
    steps = _fd_steps(x, step)
    grad = np.zeros_like(x)
    for k, h in enumerate(steps):
        e = np.zeros_like(x)
        e[k] = h
        grad[k] = (func(x + e) - func(x - e)) / (2 * h)
    return grad


def inf_norm(vector: Vector) -> float:
    """ Maximum norm, which is 0 for empty vectors.

        >>> inf_norm(np.array([1.0, -3.0]))
        3.0
        >>> inf_norm(np.zeros(0))
        0.0
    """
    if np.size(vector) == 0:
        return 0.0
    return float(np.max(np.abs(vector)))


def condition_number(matrix: Matrix) -> float:
    """ 1-norm condition number of a square matrix. Empty matrices are
        perfectly conditioned, singular ones return ``inf``.

        >>> condition_number(np.eye(2))
        1.0
        >>> condition_number(np.zeros((2, 2)))
        inf
    """
    if matrix.size == 0:
        return 1.0
    with np.errstate(all='ignore'):
        try:
            cond = float(np.linalg.cond(matrix, 1))
        except np.linalg.LinAlgError:
            return float('inf')
    if not np.isfinite(cond):
        return float('inf')
    return cond


def solve_checked(matrix: Matrix, rhs: Vector, cond_limit: float,
                  what: str = 'matrix') -> Vector:
    """ Solves ``matrix @ x = rhs`` by LU decomposition with partial
        pivoting after checking the condition estimate against
        ``cond_limit``.

        >>> solve_checked(np.array([[2.0, 0.0], [0.0, 4.0]]),
        ...               np.array([1.0, 1.0]), 1e12).tolist()
        [0.5, 0.25]
        >>> solve_checked(np.zeros((1, 1)), np.ones(1), 1e12, 'Phi_EJ(T)')
        Traceback (most recent call last):
            ...
        pyspa.errors.SingularMatrixError: Phi_EJ(T) is numerically singular (condition inf)
    """
    rhs = np.asarray(rhs, dtype=float)
    if matrix.size == 0:
        return np.zeros(0)
    cond = condition_number(matrix)
    if cond > cond_limit:
        raise SingularMatrixError(
            f'{what} is numerically singular (condition {cond:.3g})', cond
        )
    return lu_solve(lu_factor(matrix), rhs)


def inverse_norm(matrix: Matrix) -> float:
    """ Spectral norm of the inverse of ``matrix``, i.e. the reciprocal
        of its smallest singular value. Empty matrices give 0.

        >>> inverse_norm(np.array([[2.0, 0.0], [0.0, 4.0]]))
        0.5
    """
    if matrix.size == 0:
        return 0.0
    smallest = float(np.linalg.svd(matrix, compute_uv=False)[-1])
    if smallest == 0.0:
        return float('inf')
    return 1.0 / smallest


def loglog_slope(xs: Sequence[float],
                 ys: Sequence[float]) -> Optional[float]:
    """ Least-squares slope of ``log(ys)`` against ``log(xs)``. Needs at
        least two points, otherwise returns None.

        >>> round(loglog_slope([1e-2, 1e-3, 1e-4], [1e-4, 1e-6, 1e-8]), 6)
        2.0
        >>> loglog_slope([1e-2], [1e-4]) is None
        True
    """
    if len(xs) < 2:
        return None
    slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope)


def hermite_midpoint(x0: Vector, x1: Vector, f0: Vector, f1: Vector,
                     h: float) -> Vector:
    """ Cubic Hermite interpolant at the middle of a step of length ``h``
        with endpoint values ``x0``, ``x1`` and derivatives ``f0``, ``f1``.

        >>> hermite_midpoint(np.array([0.0]), np.array([1.0]),
        ...                  np.array([0.0]), np.array([2.0]), 1.0).tolist()
        [0.25]
    """
    return 0.5 * (x0 + x1) + 0.125 * h * (f0 - f1)
