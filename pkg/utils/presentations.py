"""
Presentations and graphs: the DSL / graph-file parsers, renderers and the
syntactic builders (direct sum, free product, quotient by a degree-1 span).

Presentation DSL:

    algebra G4
    field rational            # or gf(101); optional, rational by default
    generators x:1, y:1, z:1, w:1
    relations [x,y] - [z,w]

Graph file:

    graph C4
    vertices a b c d
    edges a-b b-c c-d d-a
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
from sympy import isprime

from utils.arith import RATIONALS, EchelonSpace, FieldSpec
from utils.errors import (BracketSyntaxError, CharacteristicTwoError, DomainError, DuplicateEdgeError,
                          DuplicateGeneratorError, FieldMismatchError, InhomogeneousRelationError,
                          LoopEdgeError, ParseError, UndeclaredVertexError, UnknownGeneratorError,
                          UsageError)
from utils.free_lie import GeneratorSet, LieElement, bracket, embed, substitute

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Presentation:
    name: str
    field: FieldSpec
    generators: GeneratorSet
    relations: Tuple[LieElement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'relations', tuple(r for r in self.relations if not r.is_zero()))
        for r in self.relations:
            if r.generators != self.generators:
                raise UsageError("relation uses generators outside the presentation")
            if r.field != self.field:
                raise FieldMismatchError(f"relation over {r.field} in a presentation over {self.field}")
            if r.degree < 2:
                raise UsageError(f"relation {r} has degree {r.degree}; degree-1 relations go through quotient_by_span")

    @property
    def max_generator_degree(self) -> int:
        return max(self.generators.degrees, default=1)

    def is_standard(self) -> bool:
        return self.generators.is_standard()

    def is_quadratic(self) -> bool:
        return self.is_standard() and all(r.degree == 2 for r in self.relations)

    def relation_degrees(self) -> List[int]:
        return [r.degree for r in self.relations]

    def relations_of_degree(self, d: int) -> List[LieElement]:
        return [r for r in self.relations if r.degree == d]

    def degree_one_names(self) -> List[str]:
        return [n for n, d in zip(self.generators.names, self.generators.degrees) if d == 1]

    def gen(self, name: str) -> LieElement:
        return LieElement.generator(self.generators, name, self.field)

    def with_relations(self, relations: Sequence[LieElement], name: Optional[str] = None) -> 'Presentation':
        return Presentation(name or self.name, self.field, self.generators, tuple(relations))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Presentation):
            return NotImplemented
        return (self.name == other.name and self.field == other.field
                and self.generators == other.generators and self.relations == other.relations)

    def __hash__(self):
        return hash((self.name, self.field, self.generators, len(self.relations)))

    def __str__(self):
        return render_presentation(self)


@dataclass(frozen=True)
class GraphSpec:
    name: str
    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        order = {v: k for k, v in enumerate(self.vertices)}
        if len(order) != len(self.vertices):
            raise UsageError(f"duplicate vertex in {self.vertices}")
        canonical = set()
        for a, b in self.edges:
            if a == b:
                raise LoopEdgeError(f"loop edge {a}-{a}")
            if a not in order or b not in order:
                raise UndeclaredVertexError(f"edge {a}-{b} uses an undeclared vertex")
            pair = (a, b) if order[a] < order[b] else (b, a)
            if pair in canonical:
                raise DuplicateEdgeError(f"duplicate edge {a}-{b}")
            canonical.add(pair)
        object.__setattr__(self, 'vertices', tuple(self.vertices))
        object.__setattr__(self, 'edges', tuple(sorted(canonical, key=lambda e: (order[e[0]], order[e[1]]))))

    @classmethod
    def from_networkx(cls, graph: nx.Graph, name: str = 'G') -> 'GraphSpec':
        vertices = tuple(str(v) for v in graph.nodes)
        return cls(name, vertices, tuple((str(a), str(b)) for a, b in graph.edges))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def induced(self, keep: Sequence[str], name: Optional[str] = None) -> 'GraphSpec':
        kept = [v for v in self.vertices if v in set(keep)]
        return GraphSpec(name or f"{self.name}[{','.join(kept)}]", tuple(kept),
                         tuple(e for e in self.edges if e[0] in kept and e[1] in kept))

    def __str__(self):
        return render_graph(self)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<int>\d+)|(?P<sym>[\[\],+\-*/:;()]))")


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str, line: int, offset: int = 0) -> List[_Token]:
    text = text.replace('−', '-')
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == '':
            break
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise BracketSyntaxError(f"unexpected character {text[bad]!r}", line, offset + bad + 1)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), line, offset + start + 1))
        pos = match.end()
    return tokens


def _strip_comment(raw: str) -> str:
    return raw.split('#', 1)[0].rstrip()


# ---------------------------------------------------------------------------
# Expression parsing
# ---------------------------------------------------------------------------

@dataclass
class _Atom:
    name: Optional[str]
    left: Optional['_Expr']
    right: Optional['_Expr']
    line: int
    column: int


@dataclass
class _Term:
    coef: Fraction
    atom: _Atom
    line: int = 0
    column: int = 0


@dataclass
class _Expr:
    terms: List[_Term]
    line: int
    column: int


class _ExprParser:
    def __init__(self, tokens: List[_Token], line: int, end_column: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.end_column = end_column

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, text: Optional[str] = None) -> _Token:
        tok = self.peek()
        if tok is None:
            raise BracketSyntaxError(
                f"unexpected end of line, expected {text!r}" if text else "unexpected end of line",
                self.line, self.end_column)
        if text is not None and tok.text != text:
            raise BracketSyntaxError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.column)
        self.pos += 1
        return tok

    def expr(self) -> _Expr:
        start = self.peek()
        if start is None:
            raise BracketSyntaxError("empty expression", self.line, self.end_column)
        terms = []
        sign = 1
        if start.text in '+-' and start.kind == 'sym':
            sign = -1 if self.take().text == '-' else 1
        terms.append(self.term(sign))
        while self.peek() is not None and self.peek().text in ('+', '-'):
            sign = -1 if self.take().text == '-' else 1
            terms.append(self.term(sign))
        return _Expr(terms, start.line, start.column)

    def term(self, sign: int) -> _Term:
        tok = self.peek()
        coef = Fraction(sign)
        if tok is not None and tok.kind == 'int':
            value = Fraction(int(self.take().text))
            if self.peek() is not None and self.peek().text == '/':
                self.take('/')
                den = self.take()
                if den.kind != 'int' or int(den.text) == 0:
                    raise BracketSyntaxError("denominator must be a positive integer", den.line, den.column)
                value /= int(den.text)
            coef *= value
            if self.peek() is not None and self.peek().text == '*':
                self.take('*')
        atom = self.atom()
        return _Term(coef, atom, tok.line, tok.column)

    def atom(self) -> _Atom:
        tok = self.take()
        if tok.kind == 'name':
            return _Atom(tok.text, None, None, tok.line, tok.column)
        if tok.text != '[':
            raise BracketSyntaxError(f"expected a generator or '[', found {tok.text!r}", tok.line, tok.column)
        left = self.expr()
        self.take(',')
        right = self.expr()
        self.take(']')
        return _Atom(None, left, right, tok.line, tok.column)


def _degree_of(node: Union[_Expr, _Atom], gens: GeneratorSet) -> int:
    if isinstance(node, _Atom):
        if node.name is not None:
            if node.name not in gens.names:
                raise UnknownGeneratorError(f"unknown generator {node.name!r}", node.line, node.column)
            return gens.degree_of(node.name)
        return _degree_of(node.left, gens) + _degree_of(node.right, gens)
    degrees = []
    for term in node.terms:
        d = _degree_of(term.atom, gens)
        if degrees and d != degrees[0]:
            raise InhomogeneousRelationError((degrees[0], d), term.atom.line, term.atom.column)
        degrees.append(d)
    return degrees[0]


def _evaluate(node: Union[_Expr, _Atom], gens: GeneratorSet, field: FieldSpec) -> LieElement:
    if isinstance(node, _Atom):
        if node.name is not None:
            return LieElement.generator(gens, node.name, field)
        return bracket(_evaluate(node.left, gens, field), _evaluate(node.right, gens, field))
    total = LieElement.zero(gens, _degree_of(node, gens), field)
    for term in node.terms:
        try:
            coef = field(term.coef)
        except DomainError as exc:
            raise ParseError(str(exc), term.line, term.column) from exc
        total = total + _evaluate(term.atom, gens, field).scale(coef)
    return total


def _parse_expr_tokens(tokens: List[_Token], gens: GeneratorSet, field: FieldSpec,
                       line: int, end_column: int) -> Tuple[LieElement, int, int, int]:
    parser = _ExprParser(tokens, line, end_column)
    tree = parser.expr()
    if parser.peek() is not None:
        tok = parser.peek()
        raise BracketSyntaxError(f"unexpected {tok.text!r} after expression", tok.line, tok.column)
    degree = _degree_of(tree, gens)
    return _evaluate(tree, gens, field), degree, tree.line, tree.column


def parse_relation(text: str, gens: GeneratorSet, field: FieldSpec = RATIONALS) -> LieElement:
    """Parse a single Lie expression over the given generators"""
    tokens = _tokenize(_strip_comment(text), 1)
    element, _, _, _ = _parse_expr_tokens(tokens, gens, field, 1, len(text) + 1)
    return element


def _split_on(tokens: List[_Token], separator: str) -> List[List[_Token]]:
    groups: List[List[_Token]] = [[]]
    depth = 0
    for tok in tokens:
        if tok.text == '[':
            depth += 1
        elif tok.text == ']':
            depth -= 1
        if tok.text == separator and depth == 0:
            groups.append([])
        else:
            groups[-1].append(tok)
    return groups


def _parse_field(tokens: List[_Token], line: int) -> FieldSpec:
    text = ''.join(t.text for t in tokens).lower()
    column = tokens[0].column if tokens else 1
    if text in ('rational', 'rationals', 'q'):
        return RATIONALS
    match = re.fullmatch(r'gf\((\d+)\)', text)
    if not match:
        raise ParseError(f"unknown field {text!r}; use 'rational' or 'gf(P)'", line, column)
    p = int(match.group(1))
    if p == 2:
        raise CharacteristicTwoError("characteristic 2 is not supported", line, column)
    if not isprime(p):
        raise ParseError(f"gf({p}): modulus is not prime", line, column)
    return FieldSpec.prime(p)


def _parse_generators(tokens: List[_Token], line: int) -> GeneratorSet:
    pairs: List[Tuple[str, int]] = []
    seen: Dict[str, _Token] = {}
    for group in _split_on(tokens, ','):
        if not group:
            raise ParseError("empty generator entry", line, tokens[-1].column if tokens else 1)
        name_tok = group[0]
        if name_tok.kind != 'name':
            raise ParseError(f"expected a generator name, found {name_tok.text!r}", line, name_tok.column)
        degree = 1
        if len(group) > 1:
            if len(group) != 3 or group[1].text != ':' or group[2].kind != 'int' or int(group[2].text) < 1:
                raise ParseError("generator must be written NAME:DEGREE with DEGREE >= 1", line, group[1].column)
            degree = int(group[2].text)
        if name_tok.text in seen:
            raise DuplicateGeneratorError(f"duplicate generator {name_tok.text!r}", line, name_tok.column)
        seen[name_tok.text] = name_tok
        pairs.append((name_tok.text, degree))
    return GeneratorSet.from_pairs(pairs)


def parse_presentation(text: str) -> Presentation:
    name = 'L'
    field = RATIONALS
    gens: Optional[GeneratorSet] = None
    relation_lines: List[Tuple[int, int, List[_Token]]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        stripped = body.lstrip()
        indent = len(body) - len(stripped)
        keyword, _, rest = stripped.partition(' ')
        offset = indent + len(keyword) + 1
        tokens = _tokenize(rest, number, offset)
        if keyword == 'algebra':
            if len(tokens) != 1 or tokens[0].kind != 'name':
                raise ParseError("expected 'algebra NAME'", number, indent + 1)
            name = tokens[0].text
        elif keyword == 'field':
            field = _parse_field(tokens, number)
        elif keyword == 'generators':
            if gens is not None:
                raise ParseError("generators declared twice", number, indent + 1)
            gens = _parse_generators(tokens, number)
        elif keyword == 'relations':
            relation_lines.append((number, len(body) + 1, tokens))
        else:
            raise ParseError(f"unknown section {keyword!r}", number, indent + 1)
    if gens is None:
        raise ParseError("missing 'generators' line", 1, 1)
    relations: List[LieElement] = []
    for number, end_column, tokens in relation_lines:
        for group in _split_on(tokens, ';'):
            if not group:
                continue
            element, degree, line, column = _parse_expr_tokens(group, gens, field, number, end_column)
            if degree < 2:
                raise ParseError(f"relation of degree {degree}; relations start in degree 2", line, column)
            if element.is_zero():
                logger.debug("dropping relation at %d:%d, it vanishes in the free algebra", line, column)
                continue
            relations.append(element)
    presentation = Presentation(name, field, gens, tuple(relations))
    logger.info("parsed %s: %d generators, %d relations", name, len(gens), len(relations))
    return presentation


def parse_graph(text: str) -> GraphSpec:
    name = 'G'
    vertices: Optional[List[str]] = None
    edges: List[Tuple[str, str]] = []
    seen_edges: set = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        stripped = body.lstrip()
        indent = len(body) - len(stripped)
        keyword, _, rest = stripped.partition(' ')
        offset = indent + len(keyword) + 1
        if keyword == 'graph':
            name = rest.strip() or name
        elif keyword == 'vertices':
            vertices = []
            for match in re.finditer(r'\S+', rest):
                v = match.group(0)
                if not re.fullmatch(r"[A-Za-z0-9_']+", v):
                    raise ParseError(f"bad vertex name {v!r}", number, offset + match.start() + 1)
                if v in vertices:
                    raise ParseError(f"duplicate vertex {v!r}", number, offset + match.start() + 1)
                vertices.append(v)
        elif keyword == 'edges':
            if vertices is None:
                raise ParseError("edges listed before vertices", number, indent + 1)
            for match in re.finditer(r'\S+', rest):
                column = offset + match.start() + 1
                parts = match.group(0).split('-')
                if len(parts) != 2 or not all(parts):
                    raise ParseError(f"edge must be written A-B, found {match.group(0)!r}", number, column)
                a, b = parts
                if a == b:
                    raise LoopEdgeError(f"loop edge {a}-{b}", number, column)
                for v in (a, b):
                    if v not in vertices:
                        raise UndeclaredVertexError(f"undeclared vertex {v!r}", number, column)
                key = frozenset((a, b))
                if key in seen_edges:
                    raise DuplicateEdgeError(f"duplicate edge {a}-{b}", number, column)
                seen_edges.add(key)
                edges.append((a, b))
        else:
            raise ParseError(f"unknown section {keyword!r}", number, indent + 1)
    if vertices is None:
        raise ParseError("missing 'vertices' line", 1, 1)
    return GraphSpec(name, tuple(vertices), tuple(edges))


def render_presentation(p: Presentation) -> str:
    gens = ', '.join(f"{n}:{d}" for n, d in zip(p.generators.names, p.generators.degrees))
    relations = '; '.join(r.render() for r in p.relations)
    lines = [f"algebra {p.name}", f"field {p.field}", f"generators {gens}",
             f"relations {relations}".rstrip()]
    return '\n'.join(lines) + '\n'


def render_graph(g: GraphSpec) -> str:
    edges = ' '.join(f"{a}-{b}" for a, b in g.edges)
    return f"graph {g.name}\nvertices {' '.join(g.vertices)}\nedges {edges}".rstrip() + '\n'


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _check_disjoint(p: Presentation, q: Presentation) -> None:
    if p.field != q.field:
        raise FieldMismatchError(f"cannot combine presentations over {p.field} and {q.field}")
    clash = set(p.generators.names) & set(q.generators.names)
    if clash:
        raise UsageError(f"generator names clash: {sorted(clash)}")


def free_product(p: Presentation, q: Presentation, name: Optional[str] = None) -> Presentation:
    _check_disjoint(p, q)
    gens = p.generators.extend(list(zip(q.generators.names, q.generators.degrees)))
    relations = [embed(r, gens) for r in p.relations] + [embed(r, gens) for r in q.relations]
    return Presentation(name or f"{p.name}*{q.name}", p.field, gens, tuple(relations))


def direct_sum(p: Presentation, q: Presentation, name: Optional[str] = None) -> Presentation:
    product = free_product(p, q, name or f"{p.name}x{q.name}")
    gens = product.generators
    cross = [bracket(LieElement.generator(gens, a, p.field), LieElement.generator(gens, b, p.field))
             for a in p.generators.names for b in q.generators.names]
    return product.with_relations(list(product.relations) + cross)


DegreeOneVector = Union[LieElement, Mapping[str, Any]]


def degree_one_coordinates(p: Presentation, vector: DegreeOneVector) -> Dict[int, Any]:
    """Coordinates of a degree-1 element over p's degree-1 generators"""
    ones = p.degree_one_names()
    if isinstance(vector, LieElement):
        if vector.generators != p.generators or (not vector.is_zero() and vector.degree != 1):
            raise UsageError("vector is not a degree-1 element of the presentation")
        items = {p.generators.names[w[0]]: c for w, c in vector.coords.items()}
    else:
        items = {k: p.field(v) for k, v in vector.items()}
    out = {}
    for name, value in items.items():
        if name not in ones:
            raise UsageError(f"{name!r} is not a degree-1 generator")
        if value:
            out[ones.index(name)] = value
    return out


def quotient_by_span(p: Presentation, vectors: Sequence[DegreeOneVector], name: Optional[str] = None) -> Presentation:
    """
    Kill a span V of degree-1 elements: echelonize V over the degree-1
    generators, drop each pivot generator and substitute its residue
    modulo V into the relations.
    """
    ones = p.degree_one_names()
    space = EchelonSpace.span([degree_one_coordinates(p, v) for v in vectors], len(ones), p.field)
    dropped = {ones[c] for c in space.pivots}
    kept = [(n, d) for n, d in zip(p.generators.names, p.generators.degrees) if n not in dropped]
    gens = GeneratorSet.from_pairs(kept)
    images: Dict[int, LieElement] = {}
    pivot_rows = dict(zip(space.pivots, space.rows))
    for i, gname in enumerate(p.generators.names):
        if gname not in dropped:
            images[i] = LieElement.generator(gens, gname, p.field)
            continue
        row = pivot_rows[ones.index(gname)]
        residue = LieElement.zero(gens, 1, p.field)
        for c, value in row.items():
            if ones[c] != gname:
                residue = residue - LieElement.generator(gens, ones[c], p.field).scale(value)
        images[i] = residue
    relations = [substitute(r, images, gens) for r in p.relations]
    return Presentation(name or f"{p.name}/V", p.field, gens, tuple(relations))


def presentation(name: str, generators: Sequence[Union[str, Tuple[str, int]]],
                 relations: Sequence[str] = (), field: FieldSpec = RATIONALS) -> Presentation:
    """Build a presentation from generator names (or (name, degree) pairs) and relation strings"""
    pairs = [(g, 1) if isinstance(g, str) else (g[0], int(g[1])) for g in generators]
    gens = GeneratorSet.from_pairs(pairs)
    return Presentation(name, field, gens, tuple(parse_relation(r, gens, field) for r in relations))
