"""Shared fixtures: catalog algebras, their truncated tables and the sample files"""

from pathlib import Path

import pytest

from utils.catalog import lookup_graph, lookup_presentation
from utils.quotient import expand_tables

SAMPLES = Path(__file__).parent / 'samples'


@pytest.fixture
def samples() -> Path:
    return SAMPLES


@pytest.fixture(scope='session')
def g4():
    return lookup_presentation('g4')


@pytest.fixture(scope='session')
def h1():
    return lookup_presentation('h1')


@pytest.fixture(scope='session')
def h2():
    return lookup_presentation('h2')


@pytest.fixture(scope='session')
def witt():
    return lookup_presentation('witt')


@pytest.fixture(scope='session')
def kosz2():
    return lookup_presentation('kosz2')


@pytest.fixture(scope='session')
def g4_table(g4):
    return expand_tables(g4, 5)


@pytest.fixture(scope='session')
def h2_table(h2):
    return expand_tables(h2, 7)


@pytest.fixture(scope='session')
def kosz2_table(kosz2):
    return expand_tables(kosz2, 4)


@pytest.fixture(scope='session')
def c4():
    return lookup_graph('c4')
