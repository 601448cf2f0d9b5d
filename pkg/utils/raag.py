"""
Graphs and their right-angled Artin Lie algebras: presentations, clique
polynomials, Droms and chordal recognition, cone / disjoint-union
decomposition, Euler characteristics and Turán bounds.
"""

import itertools
import logging
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx

from utils.arith import RATIONALS, FieldSpec, PolySeries
from utils.config import MAX_CLIQUE_VERTICES
from utils.errors import DomainError, UsageError
from utils.free_lie import GeneratorSet, LieElement, bracket
from utils.presentations import GraphSpec, Presentation

logger = logging.getLogger(__name__)

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def generator_name(vertex: str) -> str:
    return vertex if _IDENTIFIER.fullmatch(vertex) else f"v{vertex}"


def raag_presentation(g: GraphSpec, field: FieldSpec = RATIONALS) -> Presentation:
    """One degree-1 generator per vertex, one relation [x_v, x_w] per edge"""
    names = [generator_name(v) for v in g.vertices]
    gens = GeneratorSet.standard(names)
    rename = dict(zip(g.vertices, names))
    relations = [bracket(LieElement.generator(gens, rename[a], field), LieElement.generator(gens, rename[b], field))
                 for a, b in g.edges]
    return Presentation(f"RAAG({g.name})", field, gens, tuple(relations))


@dataclass
class CliqueData:
    counts: List[int]

    @property
    def clique_number(self) -> int:
        return len(self.counts) - 1

    @property
    def polynomial(self) -> PolySeries:
        return PolySeries.from_coefficients(self.counts)

    def evaluate(self, x) -> Fraction:
        return self.polynomial.evaluate(x)

    def __str__(self):
        return str(self.polynomial)


def _checked_graph(g: GraphSpec) -> nx.Graph:
    if len(g.vertices) > MAX_CLIQUE_VERTICES:
        raise UsageError(f"exact clique enumeration is limited to {MAX_CLIQUE_VERTICES} vertices")
    return g.to_networkx()


def clique_polynomial(g: GraphSpec) -> CliqueData:
    graph = _checked_graph(g)
    counts = [1]
    for clique in nx.enumerate_all_cliques(graph):
        size = len(clique)
        if size >= len(counts):
            counts.extend([0] * (size + 1 - len(counts)))
        counts[size] += 1
    if graph.number_of_nodes():
        omega = max(len(c) for c in nx.find_cliques(graph))
        if omega != len(counts) - 1:
            raise DomainError(f"clique number mismatch: {omega} vs {len(counts) - 1}")
    return CliqueData(counts)


def euler_characteristic_raag(g: GraphSpec) -> int:
    """Clique polynomial at -1"""
    return sum((-1) ** i * c for i, c in enumerate(clique_polynomial(g).counts))


# ---------------------------------------------------------------------------
# Recognition
# ---------------------------------------------------------------------------

def droms_witness(g: GraphSpec) -> Optional[Tuple[str, Tuple[str, ...]]]:
    """First induced square or path on four vertices, scanning 4-subsets in vertex order"""
    graph = g.to_networkx()
    for quad in itertools.combinations(g.vertices, 4):
        sub = graph.subgraph(quad)
        degrees = sorted(d for _, d in sub.degree())
        if sub.number_of_edges() == 4 and degrees == [2, 2, 2, 2]:
            return 'square', quad
        if sub.number_of_edges() == 3 and degrees == [1, 1, 2, 2] and nx.is_connected(sub):
            return 'path', quad
    return None


def is_droms(g: GraphSpec) -> bool:
    return droms_witness(g) is None


def lex_bfs(g: GraphSpec) -> List[str]:
    """Lexicographic breadth-first order; ties broken by vertex order"""
    graph = g.to_networkx()
    labels: Dict[str, List[int]] = {v: [] for v in g.vertices}
    order: List[str] = []
    remaining = list(g.vertices)
    n = len(remaining)
    while remaining:
        best = max(remaining, key=lambda v: (labels[v], -g.vertices.index(v)))
        remaining.remove(best)
        order.append(best)
        for w in graph.neighbors(best):
            if w in labels and w in remaining:
                labels[w].append(n - len(order))
    return order


def is_perfect_elimination(g: GraphSpec, order: List[str]) -> bool:
    """Each vertex's later neighbours form a clique"""
    graph = g.to_networkx()
    position = {v: k for k, v in enumerate(order)}
    for v in order:
        later = sorted((w for w in graph.neighbors(v) if position[w] > position[v]), key=position.get)
        if not later:
            continue
        head, rest = later[0], later[1:]
        if any(not graph.has_edge(head, w) for w in rest):
            return False
    return True


def is_chordal(g: GraphSpec) -> bool:
    return is_perfect_elimination(g, list(reversed(lex_bfs(g))))


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------

@dataclass
class DecompositionNode:
    kind: str
    vertices: Tuple[str, ...]
    tip: Optional[str] = None
    children: List['DecompositionNode'] = dc_field(default_factory=list)

    def first_obstruction(self) -> Optional['DecompositionNode']:
        if self.kind == 'non_decomposable':
            return self
        for child in self.children:
            found = child.first_obstruction()
            if found is not None:
                return found
        return None

    def to_dict(self) -> Dict:
        out = {"kind": self.kind, "vertices": list(self.vertices)}
        if self.tip is not None:
            out["tip"] = self.tip
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def __str__(self):
        if self.kind == 'vertex':
            return 'vertex'
        if self.kind == 'cone':
            return f"cone({self.tip}, {self.children[0]})"
        if self.kind == 'disjoint_union':
            return f"disjoint_union({', '.join(str(c) for c in self.children)})"
        return f"non_decomposable({{{', '.join(self.vertices)}}})"


def decompose(g: GraphSpec) -> DecompositionNode:
    graph = g.to_networkx()
    vertices = tuple(g.vertices)
    if len(vertices) == 1:
        return DecompositionNode('vertex', vertices)
    if not vertices:
        return DecompositionNode('disjoint_union', vertices)
    if not nx.is_connected(graph):
        parts = []
        for component in sorted(nx.connected_components(graph), key=lambda c: min(vertices.index(v) for v in c)):
            parts.append(decompose(g.induced(sorted(component, key=vertices.index))))
        return DecompositionNode('disjoint_union', vertices, children=parts)
    for v in vertices:
        if graph.degree(v) == len(vertices) - 1:
            rest = g.induced([w for w in vertices if w != v])
            return DecompositionNode('cone', vertices, tip=v, children=[decompose(rest)])
    return DecompositionNode('non_decomposable', vertices)


# ---------------------------------------------------------------------------
# Turán
# ---------------------------------------------------------------------------

def turan_bound(n: int, r: int) -> int:
    """Edges of the Turán graph T(n, r): (1 - 1/r)(n^2 - s^2)/2 + C(s, 2), s = n mod r"""
    if r < 1:
        raise UsageError("r must be at least 1")
    if n < 0:
        raise UsageError("n must be nonnegative")
    s = n % r
    value = (1 - Fraction(1, r)) * (n * n - s * s) / 2 + Fraction(s * (s - 1), 2)
    return int(value)


def clique_lower_bound(v: int, e: int) -> Fraction:
    """v^2 / (v^2 - 2e), a lower bound for the clique number"""
    if v * v <= 2 * e:
        raise DomainError(f"bound needs v^2 > 2e, got v={v}, e={e}")
    return Fraction(v * v, v * v - 2 * e)
