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

import pytest

from pyspa.errors import ConfigError
from pyspa.parse import MODES, load_config, parse_config
from pyspa.types import Method


def _document(**extra):
    document = {
        'problem': {'name': 'double-integrator-target'},
        'schedule': [0.5],
    }
    document.update(extra)
    return document


def test_parse_config_defaults():
    config = parse_config(_document(), mode='solve')
    assert config.mode == 'solve'
    assert config.problem == 'double-integrator-target'
    assert config.params == {}
    assert config.schedule == (0.5,)
    assert config.theta0 is None
    assert config.solver.steps_per_unit == 200
    assert config.solver.tol_res == 1e-10
    assert config.optimizer.method is Method.LBFGS
    assert config.seed == 0
    assert config.output == '.'


def test_parse_config_sections():
    config = parse_config(_document(
        problem={'name': 'switched-integrator', 'params': {'horizon': 3}},
        theta0=[1],
        integrator={'steps_per_unit': 50},
        shooting={'tol_res': 1e-12, 'max_iter': 10},
        optimizer={'method': 'cg', 'max_iters': 20},
        study={
            'index': 1, 'deltas': [1e-2, 1e-3], 'magnitudes': [1e-3],
            'directions': [[1.0]], 'radius': 0.5, 'offset': [0.1],
            'samples': 4,
        },
        seed=3,
        output='out',
    ), mode='perturb-switch')
    assert config.params == {'horizon': 3}
    assert config.theta0 == (1.0,)
    assert config.solver.steps_per_unit == 50
    assert config.solver.max_iter == 10
    assert config.optimizer.method is Method.CG
    assert config.optimizer.max_iters == 20
    assert config.study.deltas == (1e-2, 1e-3)
    assert config.study.directions == ((1.0,),)
    assert config.study.radius == 0.5
    assert config.study.samples == 4
    assert config.seed == 3
    assert config.output == 'out'


def test_parse_config_overrides():
    config = parse_config(
        _document(integrator={'steps_per_unit': 50}, seed=1, output='a'),
        mode='gradient', output='b', steps_per_unit=20, seed=9,
    )
    assert config.output == 'b'
    assert config.solver.steps_per_unit == 20
    assert config.seed == 9

    # the mode may come from the document
    assert parse_config(_document(mode='optimize')).mode == 'optimize'


def test_parse_config_errors():
    # unknown keys anywhere
    with pytest.raises(ConfigError):
        parse_config(_document(schedul=[0.5]), mode='solve')
    with pytest.raises(ConfigError):
        parse_config(
            _document(problem={'name': 'x', 'param': {}}), mode='solve'
        )
    with pytest.raises(ConfigError):
        parse_config(_document(study={'delta': [1e-2]}), mode='solve')
    with pytest.raises(ConfigError):
        parse_config(_document(optimizer={'memory': 3}), mode='solve')

    # unsupported or contradicting modes
    with pytest.raises(ConfigError):
        parse_config(_document(), mode='plot')
    with pytest.raises(ConfigError):
        parse_config(_document())
    with pytest.raises(ConfigError):
        parse_config(_document(mode='solve'), mode='gradient')

    # missing or malformed values
    with pytest.raises(ConfigError):
        parse_config({'schedule': [0.5]}, mode='solve')
    with pytest.raises(ConfigError):
        parse_config(_document(schedule='0.5'), mode='solve')
    with pytest.raises(ConfigError):
        parse_config(_document(schedule=[True]), mode='solve')
    with pytest.raises(ConfigError):
        parse_config(_document(seed=1.5), mode='solve')
    with pytest.raises(ConfigError):
        parse_config(
            _document(integrator={'steps_per_unit': 0}), mode='solve'
        )
    with pytest.raises(ConfigError):
        parse_config(_document(optimizer={'method': 'bfgs'}), mode='solve')
    with pytest.raises(ConfigError):
        parse_config(['not', 'an', 'object'], mode='solve')

    # every configuration error is a ValueError
    with pytest.raises(ValueError):
        parse_config(_document(), mode='plot')


def test_parse_config_mode_requirements():
    requirements = {
        'perturb-terminal': {'magnitudes': [1e-3]},
        'perturb-switch': {'deltas': [1e-3]},
        'remainder': {'deltas': [1e-3]},
        'certificate': {'radius': 1.0},
    }
    for mode in MODES:
        study = requirements.get(mode)
        if study is None:
            parse_config(_document(), mode=mode)
            continue
        with pytest.raises(ConfigError):
            parse_config(_document(), mode=mode)
        parse_config(_document(study=study), mode=mode)


def test_load_config(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps(_document()))
    config = load_config(str(path), mode='gradient')
    assert config.schedule == (0.5,)

    with pytest.raises(ConfigError):
        load_config(str(tmp_path / 'missing.json'), mode='gradient')

    path.write_text('{"problem": ')
    with pytest.raises(ConfigError):
        load_config(str(path), mode='gradient')
