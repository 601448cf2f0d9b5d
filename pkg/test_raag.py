"""Right-angled Artin Lie algebras and graph recognition"""

import networkx as nx
import numpy as np
import pytest

from utils.catalog import all_graphs, complete_plus_isolated, cycle, path, squares_ladder
from utils.cohomology import betti_table
from utils.errors import DomainError, UsageError
from utils.presentations import GraphSpec, parse_graph
from utils.quotient import expand_tables, subalgebra_tables
from utils.raag import (clique_lower_bound, clique_polynomial, decompose, droms_witness, euler_characteristic_raag,
                        generator_name, is_chordal, is_droms, lex_bfs, raag_presentation, turan_bound)


@pytest.fixture
def square(samples):
    return parse_graph((samples / 'c4.graph').read_text())


def test_raag_presentation(square):
    p = raag_presentation(square)
    assert p.name == 'RAAG(C4)'
    assert p.generators.names == ('a', 'b', 'c', 'd')
    assert len(p.relations) == 4
    assert p.is_quadratic()


def test_numeric_vertices_get_generator_names():
    assert generator_name('3') == 'v3'
    assert generator_name('x') == 'x'


def test_raag_of_square_dimensions(c4):
    # free(2) x free(2)
    assert expand_tables(raag_presentation(c4), 4).dim_list() == [4, 2, 4, 6]


def test_clique_polynomial():
    data = clique_polynomial(complete_plus_isolated(7, 8))
    assert data.counts == [1, 15, 21, 35, 35, 21, 7, 1]
    assert data.clique_number == 7
    assert str(clique_polynomial(cycle(4))) == '1 + 4t + 4t^2'


def test_clique_enumeration_is_bounded():
    with pytest.raises(UsageError):
        clique_polynomial(path(21))


@pytest.mark.parametrize('graph, chi', [
    (cycle(4), 1),
    (GraphSpec('K1', ('v',), ()), 0),
    (squares_ladder(1), 1),
    (squares_ladder(2), 2),
    (squares_ladder(3), 3),
])
def test_euler_characteristic(graph, chi):
    assert euler_characteristic_raag(graph) == chi


def test_droms_witnesses(square, samples):
    assert droms_witness(square) == ('square', ('a', 'b', 'c', 'd'))
    p4 = parse_graph((samples / 'p4.graph').read_text())
    assert droms_witness(p4) == ('path', ('a', 'b', 'c', 'd'))
    assert is_droms(path(3))
    assert is_droms(complete_plus_isolated(4, 2))


@pytest.mark.parametrize('graph, chordal', [
    (cycle(4), False),
    (cycle(5), False),
    (path(4), True),
    (cycle(3), True),
    (squares_ladder(1), False),
])
def test_chordal_recognition(graph, chordal):
    assert is_chordal(graph) == chordal


def test_lex_bfs_visits_every_vertex_once(c4):
    order = lex_bfs(c4)
    assert order[0] == 'v0'
    assert sorted(order) == sorted(c4.vertices)


def test_decompose_path_is_a_cone():
    node = decompose(path(3))
    assert str(node) == 'cone(v1, disjoint_union(vertex, vertex))'
    assert node.first_obstruction() is None
    assert node.to_dict()['tip'] == 'v1'


def test_decompose_square_is_obstructed(c4):
    node = decompose(c4)
    assert node.kind == 'non_decomposable'
    assert node.first_obstruction() is node
    assert str(node) == 'non_decomposable({v0, v1, v2, v3})'


def test_turan_bound():
    assert turan_bound(5, 2) == 6
    assert turan_bound(6, 3) == 12
    assert turan_bound(4, 1) == 0
    with pytest.raises(UsageError):
        turan_bound(4, 0)


def test_clique_lower_bound():
    assert clique_lower_bound(4, 4) == 2
    with pytest.raises(DomainError):
        clique_lower_bound(3, 5)


@pytest.mark.slow
def test_raag_diagonal_betti_numbers_are_clique_counts():
    graphs = all_graphs(5, min_vertices=5)
    assert len(graphs) == 34
    for g in graphs:
        counts = clique_polynomial(g).counts
        expected = (counts + [0] * 5)[:5]
        assert betti_table(expand_tables(raag_presentation(g), 4)).diagonal() == expected, g.name


def test_connected_chordal_graphs_have_vanishing_euler_characteristic():
    checked = 0
    for g in all_graphs(6):
        if is_chordal(g) and nx.is_connected(g.to_networkx()):
            assert euler_characteristic_raag(g) == 0, g.name
            checked += 1
    assert checked > 50


def test_droms_graphs_are_chordal():
    droms = [g for g in all_graphs(6) if is_droms(g)]
    assert droms
    assert all(is_chordal(g) for g in droms)


@pytest.mark.slow
def test_two_generated_subalgebras_are_free_or_abelian():
    free_dims = [2, 1, 2, 3, 6]
    rng = np.random.default_rng(17)
    graphs = [path(4), cycle(4), cycle(5), complete_plus_isolated(3, 2), squares_ladder(1)]
    tables = {g.name: expand_tables(raag_presentation(g), 5) for g in graphs}
    trials = 0
    while trials < 30:
        g = graphs[rng.integers(len(graphs))]
        t = tables[g.name]
        n = len(g.vertices)
        u, v = ({i: int(c) for i, c in enumerate(rng.integers(-2, 3, size=n)) if c} for _ in range(2))
        view = subalgebra_tables(t, [u, v])
        if view.dim(1) != 2:
            continue
        assert view.dim_list() in (free_dims, [2, 0, 0, 0, 0]), (g.name, u, v)
        trials += 1
