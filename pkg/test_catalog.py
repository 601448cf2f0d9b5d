"""Named algebras and graphs"""

import pytest

from utils.catalog import (GRAPHS, PRESENTATIONS, all_graphs, complete_plus_isolated, heisenberg, lookup_graph,
                           lookup_presentation, squares_ladder, surface)
from utils.errors import UsageError
from utils.quotient import expand_tables


@pytest.mark.parametrize('name', sorted(PRESENTATIONS))
def test_catalog_algebras_parse(name):
    p = lookup_presentation(name)
    assert len(p.generators) > 0


@pytest.mark.parametrize('name', sorted(GRAPHS))
def test_catalog_graphs_build(name):
    g = lookup_graph(name)
    assert g.vertices


def test_unknown_names():
    with pytest.raises(UsageError):
        lookup_presentation('g5')
    with pytest.raises(UsageError):
        lookup_graph('petersen')
    with pytest.raises(UsageError):
        surface(0)


def test_surface_family():
    g6 = surface(3)
    assert g6.name == 'G6'
    assert len(g6.generators) == 6
    assert len(g6.relations) == 1


def test_heisenberg_h3_has_a_one_dimensional_second_degree():
    assert expand_tables(heisenberg(3), 3).dim_list() == [6, 1, 0]


def test_graph_families():
    ladder = squares_ladder(2)
    assert (len(ladder.vertices), len(ladder.edges)) == (6, 7)
    k = complete_plus_isolated(7, 8)
    assert k.name == 'K7+8K1'
    assert (len(k.vertices), len(k.edges)) == (15, 21)


def test_graph_atlas():
    assert len(all_graphs(4, min_vertices=4)) == 11
    with pytest.raises(UsageError):
        all_graphs(8)
