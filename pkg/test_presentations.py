"""Presentation DSL, graph files and the syntactic builders"""

import pytest

from utils.arith import RATIONALS, FieldSpec
from utils.errors import (BracketSyntaxError, CharacteristicTwoError, DuplicateEdgeError, DuplicateGeneratorError,
                          FieldMismatchError, InhomogeneousRelationError, LoopEdgeError, ParseError,
                          UndeclaredVertexError, UnknownGeneratorError, UsageError)
from utils.presentations import (direct_sum, free_product, parse_graph, parse_presentation, parse_relation,
                                 presentation, quotient_by_span, render_graph, render_presentation)
from utils.quotient import expand_tables


def test_parse_sample_presentation(samples):
    p = parse_presentation((samples / 'g4.lie').read_text())
    assert p.name == 'G4'
    assert p.field == RATIONALS
    assert p.generators.names == ('x1', 'y1', 'x2', 'y2')
    assert p.relation_degrees() == [2]
    assert p.is_quadratic()


def test_weighted_generators_and_multiple_relation_lines(samples):
    p = parse_presentation((samples / 'witt.lie').read_text())
    assert p.generators.degrees == (1, 2)
    assert p.relation_degrees() == [5, 7]
    assert not p.is_standard()
    assert p.max_generator_degree == 2


def test_field_line_and_comments():
    p = parse_presentation("algebra A  # name\nfield gf(101)\ngenerators a, b\nrelations [a,b]\n")
    assert p.field == FieldSpec.prime(101)
    assert p.generators.degrees == (1, 1)


def test_rational_coefficients_and_unicode_minus():
    gens = parse_presentation("generators x, y, z\n").generators
    r = parse_relation("1/2 [x,y] − 3*[x,z]", gens)
    assert RATIONALS.to_python(r.coords[(0, 1)]) * 2 == 1
    assert RATIONALS.to_python(r.coords[(0, 2)]) == -3


def test_relations_vanishing_in_the_free_algebra_are_dropped():
    p = parse_presentation("generators x, y\nrelations [x,y] + [y,x]; [x,x]\n")
    assert p.relations == ()


def test_unknown_generator_position():
    with pytest.raises(UnknownGeneratorError) as info:
        parse_presentation("generators x, y\nrelations [x,q]\n")
    assert (info.value.line, info.value.column) == (2, 14)


def test_inhomogeneous_relation():
    with pytest.raises(InhomogeneousRelationError) as info:
        parse_presentation("generators x, y\nrelations [x,y] + x\n")
    assert info.value.degrees == (2, 1)
    assert info.value.line == 2


@pytest.mark.parametrize('text, error', [
    ("field gf(2)\ngenerators x, y\n", CharacteristicTwoError),
    ("generators x, x\n", DuplicateGeneratorError),
    ("generators x, y\nrelations [x,y\n", BracketSyntaxError),
    ("generators x, y\nrelations [x,y]]\n", BracketSyntaxError),
    ("generators x, y\nrelations x\n", ParseError),
    ("relations [x,y]\n", ParseError),
    ("generators x:0\n", ParseError),
    ("colors red\n", ParseError),
    ("field gf(101)\ngenerators x, y\nrelations 1/101*[x,y]\n", ParseError),
])
def test_presentation_errors(text, error):
    with pytest.raises(error):
        parse_presentation(text)


def test_parse_errors_are_usage_errors():
    assert issubclass(ParseError, UsageError)


def test_render_then_parse_keeps_the_presentation(samples):
    p = parse_presentation((samples / 'kosz2.lie').read_text())
    assert parse_presentation(render_presentation(p)) == p


def test_parse_graph(samples):
    g = parse_graph((samples / 'c4.graph').read_text())
    assert g.name == 'C4'
    assert g.vertices == ('a', 'b', 'c', 'd')
    assert g.edges == (('a', 'b'), ('a', 'd'), ('b', 'c'), ('c', 'd'))
    assert parse_graph(render_graph(g)) == g


@pytest.mark.parametrize('text, error', [
    ("vertices a b\nedges a-a\n", LoopEdgeError),
    ("vertices a b\nedges a-c\n", UndeclaredVertexError),
    ("vertices a b\nedges a-b b-a\n", DuplicateEdgeError),
    ("vertices a a\n", ParseError),
    ("edges a-b\n", ParseError),
    ("vertices a b\nedges ab\n", ParseError),
])
def test_graph_errors(text, error):
    with pytest.raises(error):
        parse_graph(text)


def test_direct_sum_adds_cross_brackets():
    p = presentation('P', ['a'], [])
    q = presentation('Q', ['b', 'c'], ['[b,c]'])
    s = direct_sum(p, q)
    assert s.generators.names == ('a', 'b', 'c')
    assert len(s.relations) == 3
    assert len(free_product(p, q).relations) == 1


def test_builders_reject_clashes_and_mixed_fields():
    p = presentation('P', ['a'], [])
    with pytest.raises(UsageError):
        free_product(p, presentation('Q', ['a'], []))
    with pytest.raises(FieldMismatchError):
        free_product(p, presentation('Q', ['b'], [], FieldSpec.prime(3)))


def test_quotient_by_span_substitutes_the_residue():
    p = presentation('P', ['x', 'y', 'z'], ['[x,y] - [x,z]'])
    # killing y - z turns the relation into zero
    q = quotient_by_span(p, [{'y': 1, 'z': -1}])
    assert q.generators.names == ('x', 'z')
    assert q.relations == ()


def test_coefficient_vanishing_mod_p_has_a_position():
    with pytest.raises(ParseError) as info:
        parse_presentation("algebra P\nfield gf(101)\ngenerators x, y\nrelations 1/101*[x,y]\n")
    assert info.value.line == 4
    assert info.value.column > 0


def near_misses(relation):
    cases = []
    for i, ch in enumerate(relation):
        if ch in '[],':
            cases.append(relation[:i] + relation[i + 1:])
        if ch == ',':
            cases.append(relation[:i] + ';' + relation[i + 1:])
        if ch == ']':
            cases.append(relation[:i] + ')' + relation[i + 1:])
        if ch in 'xyz':
            cases.append(relation[:i] + 'q' + relation[i + 1:])
        if ch == '-':
            cases.append(relation[:i] + '*' + relation[i + 1:])
    for i in range(len(relation) + 1):
        cases.append(relation[:i] + '@' + relation[i:])
    return cases


def test_near_miss_relations_report_a_position():
    cases = near_misses("[x,[y,z]] - 2*[y,[x,z]]")
    assert len(cases) >= 50
    for relation in cases:
        with pytest.raises(ParseError) as info:
            parse_presentation(f"generators x, y, z\nrelations {relation}\n")
        assert info.value.line == 2
        assert info.value.column >= 1


def test_direct_sum_then_quotient_restores_the_dimensions():
    p = presentation('P', ['a', 'b'], ['[a,[a,b]]'])
    s = direct_sum(p, presentation('C', ['c'], []))
    back = quotient_by_span(s, [{'c': 1}])
    assert back.generators.names == ('a', 'b')
    expected = expand_tables(p, 5).dim_list()
    assert expand_tables(back, 5).dim_list() == expected
    assert expand_tables(s, 5).dim_list() == [expected[0] + 1] + expected[1:]
