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


import argparse
import csv
import json
import logging
import math
import os
import sys
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .bench import BenchmarkSpec, get_benchmark
from .errors import (
    ConfigError, NonFiniteStateError, ShootingFailedError,
    SingularMatrixError, SwitchPointError, UnknownBenchmarkError
)
from .gradient import evaluate
from .optimizer import optimize
from .parse import MODES, RunConfig, load_config
from .problem import make_schedule
from .shooting import newton_certificate, solve_boundary
from .types import (
    GradientReport, PerturbationStudy, ShootingResult, SwitchSchedule,
    Termination, Trajectory
)
from .verify import (
    remainder_study, switch_perturbation_study, terminal_perturbation_study
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2

REPORT_NAME = 'report.json'
TRAJECTORY_NAME = 'trajectory.csv'

Report = Dict[str, Any]
# a runner returns the report, the trajectory to write, an optional costate
# on the same mesh
RunOutcome = Tuple[Report, Optional[Trajectory], Optional[np.ndarray]]


class SolverFailure(Exception):
    def __init__(self, message: str, report: Report,
                 trajectory: Optional[Trajectory] = None):
        super().__init__(message)
        self.report = report
        self.trajectory = trajectory


def to_json(value: Any) -> Any:
    """ Converts numpy values to plain JSON values. Non-finite floats are
        written as the strings ``"inf"``, ``"-inf"`` and ``"nan"``.

        >>> to_json({'a': np.array([0.1, np.inf]), 'b': (np.int64(2),)})
        {'a': [0.1, 'inf'], 'b': [2]}
    """
    if isinstance(value, dict):
        return {str(key): to_json(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_json(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return repr(value)
    return value


def _format_float(value: float) -> str:
    return repr(float(value))


def write_report(directory: str, report: Report) -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, REPORT_NAME)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(to_json(report), f, sort_keys=True, indent=2,
                  allow_nan=False)
        f.write('\n')
    return path


def write_trajectory(directory: str, traj: Trajectory,
                     costate: Optional[np.ndarray] = None) -> str:
    """ Writes one row per mesh node: ``t, x_1..x_n, p_1..p_n, phase``.
        The costate columns stay empty when no costate was computed.
    """
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, TRAJECTORY_NAME)
    mesh = traj.mesh
    n = traj.values.shape[1]
    header = (
        ['t'] + [f'x_{i}' for i in range(1, n + 1)]
        + [f'p_{i}' for i in range(1, n + 1)] + ['phase']
    )
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for k, t in enumerate(mesh.nodes):
            phase = mesh.phase_of_interval[min(k, mesh.n_intervals - 1)]
            if costate is None:
                p = [''] * n
            else:
                p = [_format_float(v) for v in costate[k]]
            writer.writerow(
                [_format_float(t)]
                + [_format_float(v) for v in traj.values[k]]
                + p + [int(phase)]
            )
    return path


def _shooting_section(result: ShootingResult) -> Report:
    return {
        'theta': result.theta,
        'residual': result.residual,
        'residual_norm': result.residual_norm,
        'iterations': result.iterations,
        'gamma': result.gamma,
        'converged': result.converged,
        'history': result.history,
    }


def _solved(spec: BenchmarkSpec, schedule: SwitchSchedule,
            config: RunConfig) -> ShootingResult:
    result = solve_boundary(
        spec.problem, schedule, config.theta0, options=config.solver
    )
    if not result.converged:
        raise SolverFailure(
            f'Boundary problem not solved (|g| = '
            f'{result.residual_norm:.3e})',
            {'shooting': _shooting_section(result)}, result.trajectory
        )
    return result


def _gradient_section(report: GradientReport) -> Report:
    return {
        'objective': report.objective,
        'gradient': report.grad,
        'hamiltonians': [
            {'time': pair.time, 'left': pair.left, 'right': pair.right}
            for pair in report.hamiltonians
        ],
        'costate_ok': report.costate_ok,
        'p0': report.costate.p0 if report.costate is not None else None,
        'shooting': _shooting_section(report.shooting),
    }


def _evaluated(spec: BenchmarkSpec, schedule: SwitchSchedule,
               config: RunConfig, theta_hint=None) -> GradientReport:
    if theta_hint is None:
        theta_hint = config.theta0
    report = evaluate(spec.problem, schedule, theta_hint, config.solver)
    if report.grad is None:
        raise SolverFailure(
            'Boundary problem not solved, no gradient available',
            _gradient_section(report), report.shooting.trajectory
        )
    return report


def _study_section(study: PerturbationStudy) -> Report:
    return {
        'magnitudes': study.magnitudes,
        'reference': study.reference,
        'slope': study.slope,
        'cases': [
            {
                'magnitude': case.magnitude,
                'direction': case.direction,
                'ratio': case.ratio,
                'change': case.change,
                'error': case.error,
            } for case in study.cases
        ],
    }


def run_solve(spec, schedule, config) -> RunOutcome:
    result = _solved(spec, schedule, config)
    return (
        {
            'objective': spec.problem.objective(result.trajectory.final),
            'shooting': _shooting_section(result),
        },
        result.trajectory, None
    )


def run_gradient(spec, schedule, config) -> RunOutcome:
    report = _evaluated(spec, schedule, config)
    return (
        _gradient_section(report), report.shooting.trajectory,
        report.costate.values
    )


def run_optimize(spec, schedule, config) -> RunOutcome:
    result = optimize(spec.problem, schedule, config.optimizer, config.solver)
    if result.termination is Termination.EVALUATION_FAILURE:
        raise SolverFailure(result.message, {
            'termination': result.termination.value,
            'iterations': result.iterations,
        })
    final = _evaluated(spec, result.s_star, config, result.theta)
    report = _gradient_section(final)
    report.update({
        's_star': result.s_star.times,
        'objective': result.objective,
        'grad_norm': result.grad_norm,
        'iterations': result.iterations,
        'termination': result.termination.value,
        'history': [
            {
                'schedule': record.schedule,
                'objective': record.objective,
                'grad_norm': record.grad_norm,
            } for record in result.history
        ],
    })
    return report, final.shooting.trajectory, final.costate.values


def run_perturb_terminal(spec, schedule, config) -> RunOutcome:
    base = _solved(spec, schedule, config)
    study = terminal_perturbation_study(
        spec.problem, schedule, config.study.magnitudes,
        config.study.directions, base.theta, config.solver
    )
    return (
        {'study': _study_section(study), 'shooting': _shooting_section(base)},
        base.trajectory, None
    )


def run_perturb_switch(spec, schedule, config) -> RunOutcome:
    base = _solved(spec, schedule, config)
    study = switch_perturbation_study(
        spec.problem, schedule, config.study.index, config.study.deltas,
        base.theta, config.solver
    )
    section = _study_section(study)
    section['index'] = config.study.index
    return (
        {'study': section, 'shooting': _shooting_section(base)},
        base.trajectory, None
    )


def run_remainder(spec, schedule, config) -> RunOutcome:
    base = _solved(spec, schedule, config)
    study = remainder_study(
        spec.problem, schedule, config.study.index, config.study.deltas,
        base.theta, config.solver
    )
    return (
        {
            'study': {
                'index': config.study.index,
                'deltas': study.deltas,
                'remainders': study.remainders,
                'slope': study.slope,
                'objective': study.objective,
                'derivative': study.derivative,
                'errors': study.errors,
            },
            'shooting': _shooting_section(base),
        },
        base.trajectory, None
    )


def run_certificate(spec, schedule, config) -> RunOutcome:
    base = _solved(spec, schedule, config)
    certificate = newton_certificate(
        spec.problem, schedule, base.theta, config.study.radius,
        sample_count=config.study.samples, offset=config.study.offset,
        seed=config.seed, options=config.solver,
    )
    return (
        {
            'certificate': {
                'gamma': certificate.gamma,
                'epsilon': certificate.epsilon,
                'delta': certificate.delta,
                'r': certificate.r,
                'bound': certificate.bound,
                'hypotheses_hold': certificate.hypotheses_hold,
                'theta_start': certificate.theta_start,
                'samples': certificate.samples,
            },
            'shooting': _shooting_section(base),
        },
        base.trajectory, None
    )


RUNNERS: Dict[str, Callable[..., RunOutcome]] = {
    'solve': run_solve,
    'gradient': run_gradient,
    'optimize': run_optimize,
    'perturb-terminal': run_perturb_terminal,
    'perturb-switch': run_perturb_switch,
    'remainder': run_remainder,
    'certificate': run_certificate,
}


def run(config: RunConfig) -> int:
    """ Runs a parsed configuration, writes ``report.json`` and
        ``trajectory.csv`` into the output directory and returns the exit
        status.
    """
    report: Report = {
        'mode': config.mode,
        'problem': {'name': config.problem, 'params': config.params},
        'steps_per_unit': config.solver.steps_per_unit,
    }
    try:
        spec = get_benchmark(config.problem, config.params)
        schedule = make_schedule(
            config.schedule if config.schedule is not None
            else spec.schedule, spec.problem,
            config.optimizer.eps_sep
        )
    except (UnknownBenchmarkError, ValueError) as e:
        # KeyError subclasses quote their message
        message = e.args[0] if e.args else str(e)
        logger.error('%s', message)
        report['error'] = message
        write_report(config.output, report)
        return EXIT_CONFIG
    report['problem']['params'] = spec.params
    report['schedule'] = schedule.times

    trajectory = costate = None
    try:
        section, trajectory, costate = RUNNERS[config.mode](
            spec, schedule, config
        )
        report.update(section)
        status = EXIT_OK
    except SolverFailure as e:
        logger.error('%s', e)
        report.update(e.report)
        report['error'] = str(e)
        trajectory = e.trajectory
        status = EXIT_SOLVER
    except (SingularMatrixError, NonFiniteStateError, ShootingFailedError,
            ArithmeticError, np.linalg.LinAlgError) as e:
        # LinAlgError is a ValueError, so this goes first
        logger.error('%s', e)
        report['error'] = str(e)
        status = EXIT_SOLVER
    except ValueError as e:
        # inconsistent study or start values
        logger.error('%s', e)
        report['error'] = str(e)
        status = EXIT_CONFIG
    except SwitchPointError as e:
        logger.error('%s', e)
        report['error'] = str(e)
        status = EXIT_SOLVER

    path = write_report(config.output, report)
    logger.info('Wrote %s', path)
    if trajectory is not None:
        path = write_trajectory(config.output, trajectory, costate)
        logger.info('Wrote %s', path)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='spa',
        description='Solve, differentiate and optimize switch times of '
                    'switched optimal control problems.',
    )
    parser.add_argument('mode', choices=MODES)
    parser.add_argument('--config', required=True,
                        help='JSON run configuration')
    parser.add_argument('--out', default=None,
                        help='output directory (overrides "output")')
    parser.add_argument('--steps-per-unit', type=int, default=None,
                        help='RK4 steps per unit time')
    parser.add_argument('--seed', type=int, default=None,
                        help='seed for sampled quantities')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='more logging (-v info, -vv debug)')
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    level = [logging.WARNING, logging.INFO, logging.DEBUG][
        min(args.verbose, 2)
    ]
    logging.basicConfig(
        level=level, stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s'
    )

    try:
        config = load_config(
            args.config, mode=args.mode, output=args.out,
            steps_per_unit=args.steps_per_unit, seed=args.seed,
        )
    except ConfigError as e:
        logger.error('%s', e)
        if args.out is not None:
            write_report(args.out, {'mode': args.mode, 'error': str(e)})
        return EXIT_CONFIG

    return run(config)
