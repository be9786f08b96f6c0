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


class SwitchPointError(Exception):
    """ Base class for all errors raised by pyspa.
    """


class DimensionMismatchError(SwitchPointError, ValueError):
    pass


class IndexOutOfRangeError(SwitchPointError, ValueError):
    pass


class InvalidScheduleError(SwitchPointError, ValueError):
    pass


class InfeasibleScheduleSetError(InvalidScheduleError):
    pass


class NonFiniteStateError(SwitchPointError, ArithmeticError):
    """ Raised when an integration produces a non-finite value. ``node``
        is the index of the first mesh node holding a non-finite value.
    """
    def __init__(self, message: str, node: int, time: float):
        super().__init__(message)
        self.node = node
        self.time = time


class SingularMatrixError(SwitchPointError, np.linalg.LinAlgError):
    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


class ShootingFailedError(SwitchPointError):
    """ Raised where a converged boundary solve is required but Newton's
        method stopped without reaching the residual tolerance.
    """
    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class NotANodeError(SwitchPointError, ValueError):
    pass


class UnknownBenchmarkError(SwitchPointError, KeyError):
    pass


class InvalidOverrideError(SwitchPointError, ValueError):
    pass


class NoReferenceError(SwitchPointError, ValueError):
    pass


class ConfigError(SwitchPointError, ValueError):
    pass
