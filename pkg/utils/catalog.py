"""
Named presentations and graphs: surface algebras, the B family, Heisenberg
algebras, the positive Witt algebra and a handful of graph families.
"""

import logging
from typing import Callable, Dict, List

import networkx as nx

from utils.arith import RATIONALS, FieldSpec
from utils.errors import UsageError
from utils.presentations import GraphSpec, Presentation, presentation

logger = logging.getLogger(__name__)


def surface(d: int, field: FieldSpec = RATIONALS) -> Presentation:
    """G_2d = <x_1, y_1, ..., x_d, y_d | sum [x_i, y_i]>"""
    if d < 1:
        raise UsageError("surface algebras need d >= 1")
    gens = [n for i in range(1, d + 1) for n in (f"x{i}", f"y{i}")]
    relation = ' + '.join(f"[x{i},y{i}]" for i in range(1, d + 1))
    return presentation(f"G{2 * d}", gens, [relation], field)


def b_family(d: int, field: FieldSpec = RATIONALS) -> Presentation:
    """B_2d = <x_1, y_1, ..., x_d, y_d | [x_i, y_i] - [x_1, y_1], i >= 2>"""
    if d < 1:
        raise UsageError("B family needs d >= 1")
    gens = [n for i in range(1, d + 1) for n in (f"x{i}", f"y{i}")]
    relations = [f"[x{i},y{i}] - [x1,y1]" for i in range(2, d + 1)]
    return presentation(f"B{2 * d}", gens, relations, field)


def heisenberg(n: int, field: FieldSpec = RATIONALS) -> Presentation:
    if n < 1:
        raise UsageError("Heisenberg algebras need n >= 1")
    if n == 1:
        return presentation('h1', ['a', 'b'], ['[a,[a,b]]', '[b,[a,b]]'], field)
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, n + 1)]
    relations: List[str] = []
    for i in range(n):
        for j in range(i + 1, n):
            relations.append(f"[{xs[i]},{xs[j]}]")
            relations.append(f"[{ys[i]},{ys[j]}]")
    for i in range(n):
        for j in range(n):
            if i != j:
                relations.append(f"[{xs[i]},{ys[j]}]")
    relations += [f"[{xs[i]},{ys[i]}] - [x1,y1]" for i in range(1, n)]
    return presentation(f"h{n}", xs + ys, relations, field)


def witt_positive(field: FieldSpec = RATIONALS) -> Presentation:
    """
    W+ = <x1:1, x2:2 | r5, r7>. The degree-7 relation is the homogeneous one
    holding under x1 -> e1, x2 -> e2 (both terms map to 18 e7).
    """
    r5 = '6[[x2,x1],x2] - [[[x2,x1],x1],x1]'
    r7 = '9[[[x2,x1],x1],[x2,x1]] - [[[[x2,x1],x1],x1],x2]'
    return presentation('Wplus', [('x1', 1), ('x2', 2)], [r5, r7], field)


def two_gen_koszul(field: FieldSpec = RATIONALS) -> Presentation:
    return presentation('Kosz2', ['x', 'y', 'z', 'w'], ['[x,y] - [z,w]', '[x,w]', '[x,z]'], field)


def free(r: int, field: FieldSpec = RATIONALS) -> Presentation:
    return presentation(f"F{r}", [f"x{i}" for i in range(1, r + 1)], [], field)


def abelian(r: int, field: FieldSpec = RATIONALS) -> Presentation:
    names = [f"x{i}" for i in range(1, r + 1)]
    relations = [f"[{a},{b}]" for k, a in enumerate(names) for b in names[k + 1:]]
    return presentation(f"A{r}", names, relations, field)


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------

def squares_ladder(n: int) -> GraphSpec:
    """n squares glued in a row; its RAAG has Euler characteristic n"""
    if n < 1:
        raise UsageError("a ladder needs at least one square")
    top = [f"a{i}" for i in range(n + 1)]
    bottom = [f"b{i}" for i in range(n + 1)]
    edges = [(top[i], top[i + 1]) for i in range(n)] + [(bottom[i], bottom[i + 1]) for i in range(n)]
    edges += list(zip(top, bottom))
    return GraphSpec(f"Ladder{n}", tuple(top + bottom), tuple(edges))


def complete_plus_isolated(m: int, k: int) -> GraphSpec:
    complete = [f"c{i}" for i in range(1, m + 1)]
    isolated = [f"u{i}" for i in range(1, k + 1)]
    edges = [(a, b) for i, a in enumerate(complete) for b in complete[i + 1:]]
    return GraphSpec(f"K{m}+{k}K1", tuple(complete + isolated), tuple(edges))


def cycle(n: int) -> GraphSpec:
    if n < 3:
        raise UsageError("cycles need at least 3 vertices")
    return GraphSpec.from_networkx(nx.relabel_nodes(nx.cycle_graph(n), lambda v: f"v{v}"), f"C{n}")


def path(n: int) -> GraphSpec:
    if n < 1:
        raise UsageError("paths need at least one vertex")
    return GraphSpec.from_networkx(nx.relabel_nodes(nx.path_graph(n), lambda v: f"v{v}"), f"P{n}")


def all_graphs(max_vertices: int, min_vertices: int = 1) -> List[GraphSpec]:
    """Every graph with min..max vertices up to isomorphism, from the networkx atlas (at most 7 vertices)"""
    if max_vertices > 7:
        raise UsageError("the graph atlas stops at 7 vertices")
    out = []
    for index, graph in enumerate(nx.graph_atlas_g()):
        if min_vertices <= graph.number_of_nodes() <= max_vertices:
            out.append(GraphSpec.from_networkx(nx.relabel_nodes(graph, lambda v: f"v{v}"), f"atlas{index}"))
    logger.debug("graph atlas: %d graphs on %d..%d vertices", len(out), min_vertices, max_vertices)
    return out


PRESENTATIONS: Dict[str, Callable[[FieldSpec], Presentation]] = {
    'g4': lambda f: surface(2, f),
    'g6': lambda f: surface(3, f),
    'b4': lambda f: b_family(2, f),
    'b6': lambda f: b_family(3, f),
    'h1': lambda f: heisenberg(1, f),
    'h2': lambda f: heisenberg(2, f),
    'h3': lambda f: heisenberg(3, f),
    'witt': witt_positive,
    'kosz2': two_gen_koszul,
    'free2': lambda f: free(2, f),
    'free3': lambda f: free(3, f),
    'abelian2': lambda f: abelian(2, f),
    'abelian3': lambda f: abelian(3, f),
}

GRAPHS: Dict[str, Callable[[], GraphSpec]] = {
    'c4': lambda: cycle(4),
    'c5': lambda: cycle(5),
    'p4': lambda: path(4),
    'ladder2': lambda: squares_ladder(2),
    'k7_8k1': lambda: complete_plus_isolated(7, 8),
}


def lookup_presentation(name: str, field: FieldSpec = RATIONALS) -> Presentation:
    if name not in PRESENTATIONS:
        raise UsageError(f"unknown catalog algebra {name!r}; known: {', '.join(sorted(PRESENTATIONS))}")
    return PRESENTATIONS[name](field)


def lookup_graph(name: str) -> GraphSpec:
    if name not in GRAPHS:
        raise UsageError(f"unknown catalog graph {name!r}; known: {', '.join(sorted(GRAPHS))}")
    return GRAPHS[name]()
