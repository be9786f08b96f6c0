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


import json
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

from .errors import ConfigError
from .types import OptimizeOptions, SolverOptions

# type aliases
Document = Mapping[str, Any]
Numbers = Tuple[float, ...]

MODES = (
    'solve', 'gradient', 'optimize', 'perturb-terminal', 'perturb-switch',
    'remainder', 'certificate',
)

TOP_LEVEL_KEYS = {
    'mode', 'problem', 'schedule', 'theta0', 'integrator', 'shooting',
    'optimizer', 'study', 'seed', 'output',
}
PROBLEM_KEYS = {'name', 'params'}
INTEGRATOR_KEYS = {'steps_per_unit'}
SHOOTING_KEYS = {'tol_res', 'max_iter'}
OPTIMIZER_KEYS = {
    'method', 'max_iters', 'grad_tol', 'armijo_c', 'backtrack_factor',
    'lbfgs_memory', 'eps_sep', 'min_step',
}
STUDY_KEYS = {
    'index', 'deltas', 'magnitudes', 'directions', 'radius', 'offset',
    'samples',
}


@dataclass(frozen=True)
class StudyConfig:
    index: int = 1
    deltas: Numbers = ()
    magnitudes: Numbers = ()
    directions: Optional[Tuple[Numbers, ...]] = None
    radius: Optional[float] = None
    offset: Optional[Numbers] = None
    samples: int = 16


@dataclass(frozen=True)
class RunConfig:
    """ A fully validated run of the ``spa`` command.
    """
    mode: str
    problem: str
    params: Dict[str, Any] = field(default_factory=dict)
    schedule: Optional[Numbers] = None
    theta0: Optional[Numbers] = None
    solver: SolverOptions = field(default_factory=SolverOptions)
    optimizer: OptimizeOptions = field(default_factory=OptimizeOptions)
    study: StudyConfig = field(default_factory=StudyConfig)
    seed: int = 0
    output: str = '.'


def _check_keys(section: Any, allowed: set, where: str) -> Document:
    if not isinstance(section, Mapping):
        raise ConfigError(f'{where} must be an object')
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ConfigError(
            f'Unknown keys in {where}: {", ".join(unknown)}'
        )
    return section


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f'{where} must be a number')
    return float(value)


def _integer(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f'{where} must be an integer')
    return value


def _numbers(value: Any, where: str) -> Numbers:
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f'{where} must be a list of numbers')
    return tuple(
        _number(item, f'{where}[{i}]') for i, item in enumerate(value)
    )


def _parse_study(section: Document) -> StudyConfig:
    section = _check_keys(section, STUDY_KEYS, 'study')
    kwargs = {}
    if 'index' in section:
        kwargs['index'] = _integer(section['index'], 'study.index')
    if 'samples' in section:
        kwargs['samples'] = _integer(section['samples'], 'study.samples')
    for key in ('deltas', 'magnitudes', 'offset'):
        if key in section:
            kwargs[key] = _numbers(section[key], f'study.{key}')
    if 'radius' in section:
        kwargs['radius'] = _number(section['radius'], 'study.radius')
    if 'directions' in section:
        directions = section['directions']
        if not isinstance(directions, list):
            raise ConfigError('study.directions must be a list of vectors')
        kwargs['directions'] = tuple(
            _numbers(direction, f'study.directions[{i}]')
            for i, direction in enumerate(directions)
        )
    return StudyConfig(**kwargs)


def _require(*keys: str) -> Callable[[StudyConfig, str], None]:
    def check(study: StudyConfig, mode: str) -> None:
        for key in keys:
            value = getattr(study, key)
            if value is None or value == ():
                raise ConfigError(f'Mode {mode!r} requires study.{key}')
    return check


def _nothing(study: StudyConfig, mode: str) -> None:
    pass


# mode-specific requirements on the study section
MODE_HANDLERS: Dict[str, Callable[[StudyConfig, str], None]] = {
    'solve': _nothing,
    'gradient': _nothing,
    'optimize': _nothing,
    'perturb-terminal': _require('magnitudes'),
    'perturb-switch': _require('deltas'),
    'remainder': _require('deltas'),
    'certificate': _require('radius'),
}


def parse_config(document: Any, mode: Optional[str] = None,
                 output: Optional[str] = None,
                 steps_per_unit: Optional[int] = None,
                 seed: Optional[int] = None) -> RunConfig:
    """ Validates a JSON run document and turns it into a `RunConfig`.
        Keyword arguments take precedence over the document, as the
        command line flags do.

        >>> config = parse_config({
        ...     'problem': {'name': 'double-integrator-target'},
        ...     'schedule': [0.5],
        ... }, mode='gradient')
        >>> config.mode, config.schedule, config.solver.steps_per_unit
        ('gradient', (0.5,), 200)
        >>> parse_config({'problem': {'name': 'x'}, 'shedule': [0.5]},
        ...              mode='solve')
        Traceback (most recent call last):
        ...
        pyspa.errors.ConfigError: Unknown keys in config: shedule
    """
    document = _check_keys(document, TOP_LEVEL_KEYS, 'config')

    if mode is None:
        mode = document.get('mode')
    elif 'mode' in document and document['mode'] != mode:
        raise ConfigError(
            f'Mode {mode!r} contradicts the configured mode '
            f'{document["mode"]!r}'
        )
    handler = MODE_HANDLERS.get(mode)
    if not handler:
        raise ConfigError(
            f'Mode {mode!r} is not supported, choose from {", ".join(MODES)}'
        )

    if 'problem' not in document:
        raise ConfigError('The problem section is required')
    problem = _check_keys(document['problem'], PROBLEM_KEYS, 'problem')
    name = problem.get('name')
    if not isinstance(name, str):
        raise ConfigError('problem.name must be a string')
    params = problem.get('params', {})
    if not isinstance(params, Mapping):
        raise ConfigError('problem.params must be an object')

    schedule = document.get('schedule')
    if schedule is not None:
        schedule = _numbers(schedule, 'schedule')
    theta0 = document.get('theta0')
    if theta0 is not None:
        theta0 = _numbers(theta0, 'theta0')

    solver = {}
    integrator = _check_keys(
        document.get('integrator', {}), INTEGRATOR_KEYS, 'integrator'
    )
    if 'steps_per_unit' in integrator:
        solver['steps_per_unit'] = _integer(
            integrator['steps_per_unit'], 'integrator.steps_per_unit'
        )
    if steps_per_unit is not None:
        solver['steps_per_unit'] = steps_per_unit
    shooting = _check_keys(
        document.get('shooting', {}), SHOOTING_KEYS, 'shooting'
    )
    if 'tol_res' in shooting:
        solver['tol_res'] = _number(shooting['tol_res'], 'shooting.tol_res')
    if 'max_iter' in shooting:
        solver['max_iter'] = _integer(
            shooting['max_iter'], 'shooting.max_iter'
        )

    optimizer = dict(_check_keys(
        document.get('optimizer', {}), OPTIMIZER_KEYS, 'optimizer'
    ))

    try:
        solver = SolverOptions(**solver)
        optimizer = OptimizeOptions(**optimizer)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e

    study = _parse_study(document.get('study', {}))
    handler(study, mode)

    if seed is None:
        seed = _integer(document.get('seed', 0), 'seed')
    if output is None:
        output = document.get('output', '.')
        if not isinstance(output, str):
            raise ConfigError('output must be a path string')

    return RunConfig(
        mode=mode, problem=name, params=dict(params), schedule=schedule,
        theta0=theta0, solver=solver, optimizer=optimizer, study=study,
        seed=seed, output=output,
    )


def load_config(path: str, **kwargs) -> RunConfig:
    """ Reads and parses a JSON run document from ``path``.
    """
    try:
        with open(path, encoding='utf-8') as f:
            document = json.load(f)
    except OSError as e:
        raise ConfigError(f'Cannot read config {path}: {e}') from e
    except json.JSONDecodeError as e:
        raise ConfigError(f'Config {path} is not valid JSON: {e}') from e
    return parse_config(document, **kwargs)
