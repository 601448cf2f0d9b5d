"""Run configuration and the JSON envelope"""

from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from utils.arith import RATIONALS, FieldSpec
from utils.cohomology import betti_table, is_quadratic_up_to
from utils.quotient import expand_tables
from utils.report import REPORT_VERSION, RunConfig, betti_report, envelope, jsonable, verdict_model


def test_jsonable_exact_values():
    assert jsonable(Fraction(3, 4)) == '3/4'
    assert jsonable(Fraction(6, 3)) == 2
    assert jsonable(RATIONALS(Fraction(-1, 2))) == '-1/2'
    assert jsonable(FieldSpec.prime(7)(10)) == 3
    assert jsonable(complex(1, -2)) == [1.0, -2.0]
    assert jsonable(np.int64(5)) == 5


def test_jsonable_containers():
    assert jsonable({(2, 3): 1, 'x': {4}}) == {'2,3': 1, 'x': [4]}
    assert jsonable((Fraction(1, 2), None, True)) == ['1/2', None, True]


def test_run_config_validation():
    config = RunConfig(command='dims', field='gf(5)', strategy='random:4')
    assert config.field_spec == FieldSpec.prime(5)
    with pytest.raises(ValidationError):
        RunConfig(command='dims', max_degree=1)
    with pytest.raises(ValidationError):
        RunConfig(command='dims', field='gf(4)')
    with pytest.raises(ValidationError):
        RunConfig(command='dims', field='2')
    with pytest.raises(ValidationError):
        RunConfig(command='bk-check', strategy='everything')


def test_envelope_echoes_the_configuration():
    config = RunConfig(command='betti', inputs=['g4.lie'], max_degree=4, json_output=True)
    out = envelope(config, {'dims': [4, 5]})
    assert out['version'] == REPORT_VERSION
    assert out['command'] == 'betti'
    assert out['config']['max_degree'] == 4
    assert 'json_output' not in out['config']
    assert out['result'] == {'dims': [4, 5]}


def test_betti_report(h1):
    table = betti_table(expand_tables(h1, 4))
    report = betti_report(table)
    assert report.nonzero[:2] == [(1, 1, 2), (2, 3, 2)]
    assert report.quadratic.text == 'FAIL(2,3,2)'
    assert report.quadratic.bidegree == (2, 3)
    assert not report.quadratic.passed
    assert verdict_model(is_quadratic_up_to(table)).value == 2
