"""
HNN-extensions of graded Lie algebras.

HNN_φ(M, t) = <M, t | [t, a] - φ(a), a in A> for a derivation φ: A -> M of
degree d. This module composes and (for quadratic algebras) decomposes such
extensions, checks the Betti recursion of the Koszul case, and runs the
embedding pipeline: standardize() removes generators of degree > 1 and
quadratize() trades relations of degree >= 3 for quadratic ones.
"""

import logging
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from utils.arith import EchelonSpace, ExactMatrix, PolySeries, Vector, axpy, rref, solve
from utils.config import DEFAULT_MAX_DEGREE
from utils.errors import DomainError, InvalidDerivationError, NonQuadraticError, UsageError
from utils.free_lie import GeneratorSet, LieElement, bracket, embed, split_left, substitute, word_index
from utils.presentations import Presentation, degree_one_coordinates, parse_relation
from utils.quotient import AlgebraTable, expand_tables, generated_subalgebra

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DerivationSpec:
    """
    φ on the subalgebra A generated by `domain`, given by its values on
    those generators; every value has degree deg(a) + degree.
    """

    domain: Tuple[LieElement, ...]
    values: Tuple[LieElement, ...]
    degree: int

    def __post_init__(self):
        object.__setattr__(self, 'domain', tuple(self.domain))
        object.__setattr__(self, 'values', tuple(self.values))
        if self.degree < 1:
            raise UsageError("derivation degree must be at least 1")
        if len(self.domain) != len(self.values):
            raise UsageError("every domain generator needs exactly one value")
        gens = {e.generators for e in self.domain + self.values}
        if len(gens) > 1:
            raise UsageError("derivation values live outside M")
        for a, v in zip(self.domain, self.values):
            if a.is_zero():
                raise UsageError("domain generators must be nonzero")
            if not v.is_zero() and v.degree != a.degree + self.degree:
                raise DomainError(f"value {v} of {a} has degree {v.degree}, expected {a.degree + self.degree}")

    @property
    def generators(self) -> Optional[GeneratorSet]:
        return self.domain[0].generators if self.domain else None

    @classmethod
    def parse(cls, m: Presentation, mapping: Mapping[str, str], degree: int) -> 'DerivationSpec':
        """Domain generators and values written in the DSL, e.g. {"y": "[z,w]", "z": "0"}"""
        domain, values = [], []
        for source, target in mapping.items():
            a = parse_relation(source, m.generators, m.field)
            if target.strip() == '0':
                v = LieElement.zero(m.generators, a.degree + degree, m.field)
            else:
                v = parse_relation(target, m.generators, m.field)
            domain.append(a)
            values.append(v)
        return cls(tuple(domain), tuple(values), degree)

    @classmethod
    def zero(cls, domain: Sequence[LieElement], degree: int = 1) -> 'DerivationSpec':
        values = [LieElement.zero(a.generators, a.degree + degree, a.field) for a in domain]
        return cls(tuple(domain), tuple(values), degree)

    def render(self) -> Dict[str, str]:
        return {a.render(): (v.render() if not v.is_zero() else '0') for a, v in zip(self.domain, self.values)}


@dataclass
class DerivationCheck:
    ok: bool
    checked_to: int
    witness: Optional[Dict[str, Any]] = None

    def __bool__(self):
        return self.ok


def validate_derivation(m: AlgebraTable, spec: DerivationSpec, n: Optional[int] = None) -> DerivationCheck:
    """
    Extend φ over left-normed brackets of the domain generators by the
    Leibniz rule and check that every linear dependency among brackets of
    degree <= n - d is sent to zero in M.
    """
    n = m.cutoff if n is None else min(n, m.cutoff)
    d = spec.degree
    field = m.field
    gens = [(a.degree, m.project(a), m.project(v) if not v.is_zero() else {})
            for a, v in zip(spec.domain, spec.values)]
    levels: Dict[int, List[Tuple[Vector, Vector]]] = {}
    for e in range(1, n - d + 1):
        pairs = [(u, phi) for k, u, phi in gens if k == e]
        for k, g, phi_g in gens:
            if k >= e:
                continue
            for u, phi_u in levels.get(e - k, []):
                new_u = m.bracket(k, g, e - k, u)
                new_phi = m.bracket(k + d, phi_g, e - k, u)
                axpy(new_phi, field.one, m.bracket(k, g, e - k + d, phi_u))
                pairs.append((new_u, new_phi))
        if not pairs:
            continue
        matrix = ExactMatrix.from_column_vectors([u for u, _ in pairs], m.dim(e), field)
        rows, pivots = rref(matrix)
        pivot_set = set(pivots)
        for free in range(len(pairs)):
            if free in pivot_set:
                continue
            combination = {free: field.one}
            for row, pivot in zip(rows, pivots):
                if row.get(free):
                    combination[pivot] = -row[free]
            image: Vector = {}
            for k, c in combination.items():
                axpy(image, c, pairs[k][1])
            if image:
                witness = {
                    "degree": e,
                    "combination": {str(k): field.render(c) for k, c in sorted(combination.items())},
                    "image": m.lift(e + d, image).render(),
                }
                logger.info("derivation fails in degree %d: %s", e, witness)
                return DerivationCheck(False, e, witness)
        levels[e] = [pairs[p] for p in pivots]
    return DerivationCheck(True, n - d)


def hnn_compose(m: Presentation, spec: DerivationSpec, stable_letter: str = 't',
                validate: bool = True, max_degree: Optional[int] = None) -> Presentation:
    if spec.generators is not None and spec.generators != m.generators:
        raise UsageError("derivation is defined over another presentation")
    if stable_letter in m.generators.names:
        raise UsageError(f"stable letter {stable_letter!r} clashes with a generator of {m.name}")
    if validate and spec.domain:
        n = max(max_degree or DEFAULT_MAX_DEGREE, spec.degree + max(a.degree for a in spec.domain), 2)
        check = validate_derivation(expand_tables(m, n), spec, n)
        if not check.ok:
            raise InvalidDerivationError(f"map is not a derivation (degree {check.checked_to})", check.witness)
    gens = m.generators.extend([(stable_letter, spec.degree)])
    t = LieElement.generator(gens, stable_letter, m.field)
    relations = [embed(r, gens) for r in m.relations]
    for a, v in zip(spec.domain, spec.values):
        relations.append(bracket(t, embed(a, gens)) - embed(v, gens))
    return Presentation(f"HNN({m.name},{stable_letter})", m.field, gens, tuple(relations))


@dataclass
class HnnDecomposition:
    stable_letter: str
    m: Presentation
    a_basis: List[LieElement]
    derivation: DerivationSpec
    reconstruction: Presentation

    @property
    def values(self) -> List[LieElement]:
        return list(self.derivation.values)


DegreeOne = Union[str, Mapping[str, Any]]


def _as_mapping(v: DegreeOne) -> Mapping[str, Any]:
    return {v: 1} if isinstance(v, str) else v


def hnn_decompose(p: Presentation, x: DegreeOne, complement: Optional[Sequence[DegreeOne]] = None,
                  stable_letter: Optional[str] = None) -> HnnDecomposition:
    """
    Split quadratic L = <V | R> along L_1 = M_1 ⊕ kx: relations with an x-part
    become [x, a_i] + m_i, so A_1 = span{a_i} and φ(a_i) = -m_i.
    """
    if not p.is_quadratic():
        raise NonQuadraticError(f"{p.name} is not quadratic; the split needs quadratic relations")
    field = p.field
    names = p.generators.names
    n = len(names)
    xv = degree_one_coordinates(p, _as_mapping(x))
    if complement is None:
        lead = min(xv) if xv else 0
        complement = [names[i] for i in range(n) if i != lead]
    basis = [xv] + [degree_one_coordinates(p, _as_mapping(c)) for c in complement]
    if len(basis) != n or EchelonSpace.span(basis, n, field).dim != n:
        raise UsageError("x and the complement must form a basis of L_1")

    taken = set()
    new_names = []
    for k, (vec, given) in enumerate(zip(basis, [x] + list(complement))):
        if isinstance(given, str):
            label = given
        elif len(vec) == 1 and list(vec.values())[0] == field.one:
            label = names[next(iter(vec))]
        else:
            label = f"u{k}"
        if k == 0 and stable_letter:
            label = stable_letter
        while label in taken:
            label += "'"
        taken.add(label)
        new_names.append(label)
    gens = GeneratorSet.standard(new_names)

    change = ExactMatrix.from_column_vectors(basis, n, field)
    images: Dict[int, LieElement] = {}
    for i in range(n):
        c = solve(change, {i: field.one}) or {}
        element = LieElement.zero(gens, 1, field)
        for j, value in c.items():
            element = element + LieElement.generator(gens, new_names[j], field).scale(value)
        images[i] = element
    relations = [substitute(r, images, gens) for r in p.relations]

    index = word_index(gens, 2)
    space = EchelonSpace.span([r.to_vector() for r in relations], len(index), field)
    words = {k: w for w, k in index.items()}
    m_gens = GeneratorSet.standard(new_names[1:])
    m_relations, domain, values = [], [], []
    for row in space.rows:
        x_part = {w[1] - 1: c for k, c in row.items() for w in [words[k]] if w[0] == 0}
        rest = {(w[0] - 1, w[1] - 1): c for k, c in row.items() for w in [words[k]] if w[0] != 0}
        m_part = LieElement(m_gens, field, 2, rest)
        if x_part:
            a = LieElement(m_gens, field, 1, {(j,): c for j, c in x_part.items()})
            domain.append(a)
            values.append(-m_part)
        else:
            m_relations.append(m_part)
    m = Presentation(f"{p.name}_M", field, m_gens, tuple(m_relations))
    spec = DerivationSpec(tuple(domain), tuple(values), 1)
    reconstruction = hnn_compose(m, spec, new_names[0], validate=False)
    logger.info("decomposed %s along %s: dim A_1 = %d, %d relations in M",
                p.name, new_names[0], len(domain), len(m_relations))
    return HnnDecomposition(new_names[0], m, domain, spec, reconstruction)


# ---------------------------------------------------------------------------
# Betti bookkeeping
# ---------------------------------------------------------------------------

def _diagonal(b) -> List[int]:
    if hasattr(b, 'diagonal'):
        values = b.diagonal()
        while len(values) > 1 and values[-1] == 0:
            values.pop()
        return values
    if isinstance(b, PolySeries):
        return [int(c) for c in b.coefficients()]
    return [int(c) for c in b]


@dataclass
class RecursionCheck:
    ok: bool
    failing_index: Optional[int] = None
    rows: List[Tuple[int, int, int, int]] = dc_field(default_factory=list)

    def __bool__(self):
        return self.ok


def betti_recursion_check(l, m, a, n: Optional[int] = None) -> RecursionCheck:
    """b_(i+1)(L) = b_i(A) + b_(i+1)(M) for -1 <= i <= n - 1, on diagonal Betti numbers"""
    bl, bm, ba = _diagonal(l), _diagonal(m), _diagonal(a)
    n = max(len(bl), len(bm), len(ba)) if n is None else n

    def get(seq: List[int], k: int) -> int:
        return seq[k] if 0 <= k < len(seq) else 0

    rows = []
    for i in range(-1, n):
        lhs, left, right = get(bl, i + 1), get(ba, i), get(bm, i + 1)
        rows.append((i, lhs, left, right))
        if lhs != left + right:
            return RecursionCheck(False, i, rows)
    return RecursionCheck(True, None, rows)


def euler_characteristic(poincare) -> int:
    """P(-1)"""
    return sum((-1) ** i * b for i, b in enumerate(_diagonal(poincare)))


@dataclass
class CocyclicCheck:
    ok: bool
    product_matches: bool
    euler: int

    def __bool__(self):
        return self.ok


def cocyclic_poincare_check(p_l, p_m) -> CocyclicCheck:
    """HNN over A = M: P_L = (1 + t) P_M, hence P_L(-1) = 0"""
    bl, bm = _diagonal(p_l), _diagonal(p_m)
    expected = [(bm[i] if i < len(bm) else 0) + (bm[i - 1] if 0 < i <= len(bm) else 0)
                for i in range(len(bm) + 1)]
    width = max(len(bl), len(expected))
    matches = all((bl[i] if i < len(bl) else 0) == (expected[i] if i < len(expected) else 0)
                  for i in range(width))
    chi = euler_characteristic(bl)
    return CocyclicCheck(matches and chi == 0, matches, chi)


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------

@dataclass
class EmbeddingCertificate:
    """Dimensions of the image subalgebra against the source, up to cutoff"""

    source: Presentation
    target: Presentation
    images: Dict[str, LieElement]
    cutoff: int
    source_dims: List[int]
    image_dims: List[int]

    @property
    def ok(self) -> bool:
        return self.source_dims == self.image_dims

    def __bool__(self):
        return self.ok


def certify_embedding(source: Presentation, target: Presentation, images: Mapping[str, LieElement],
                      n: int) -> EmbeddingCertificate:
    src = expand_tables(source, n)
    tgt = expand_tables(target, n)
    gens = [(img.degree, tgt.project(img)) for img in images.values()
            if not img.is_zero() and img.degree <= n]
    view = generated_subalgebra(tgt, gens, n)
    cert = EmbeddingCertificate(source, target, dict(images), n, src.dim_list(), view.dim_list())
    logger.info("embedding certificate to degree %d: source %s, image %s",
                n, cert.source_dims, cert.image_dims)
    return cert


def _fresh(base: str, taken: set) -> str:
    name = base
    k = 1
    while name in taken:
        k += 1
        name = f"{base}{k}"
    taken.add(name)
    return name


def _identity_images(p: Presentation) -> Dict[str, LieElement]:
    return {name: p.gen(name) for name in p.generators.names}


def _pad(p: Presentation, images: Dict[str, LieElement]) -> Tuple[Presentation, Dict[str, LieElement]]:
    # direct sum with a one-dimensional abelian algebra in degree 1
    taken = set(p.generators.names)
    name = _fresh('x', taken)
    gens = p.generators.extend([(name, 1)])
    x = LieElement.generator(gens, name, p.field)
    relations = [embed(r, gens) for r in p.relations]
    relations += [bracket(x, LieElement.generator(gens, g, p.field)) for g in p.generators.names]
    images = {k: embed(v, gens) for k, v in images.items()}
    return Presentation(p.name, p.field, gens, tuple(relations)), images


def _lower_top_degree(p: Presentation,
                      images: Dict[str, LieElement]) -> Tuple[Presentation, Dict[str, LieElement]]:
    """HNN over <x> with φ(x) = g for every top-degree generator g, then drop g = [t_g, x]"""
    top = p.max_generator_degree
    old = p.generators
    x_name = p.degree_one_names()[0]
    taken = set(old.names)
    pairs, stable = [], {}
    for name, d in zip(old.names, old.degrees):
        if d == top:
            stable[name] = _fresh(f"t_{name}", taken)
            pairs.append((stable[name], top - 1))
        else:
            pairs.append((name, d))
    gens = GeneratorSet.from_pairs(pairs)
    x = LieElement.generator(gens, x_name, p.field)
    subs: Dict[int, LieElement] = {}
    for i, name in enumerate(old.names):
        if name in stable:
            subs[i] = bracket(LieElement.generator(gens, stable[name], p.field), x)
        else:
            subs[i] = LieElement.generator(gens, name, p.field)
    relations = [substitute(r, subs, gens) for r in p.relations]
    images = {k: substitute(v, subs, gens) for k, v in images.items()}
    logger.debug("lowered %d generators of degree %d", len(stable), top)
    return Presentation(p.name, p.field, gens, tuple(relations)), images


def _standardize(p: Presentation,
                 images: Dict[str, LieElement]) -> Tuple[Presentation, Dict[str, LieElement]]:
    if p.is_standard():
        return p, images
    if not p.degree_one_names():
        p, images = _pad(p, images)
    while not p.is_standard():
        p, images = _lower_top_degree(p, images)
    return p, images


@dataclass
class EmbeddingResult:
    presentation: Presentation
    images: Dict[str, LieElement]
    certificate: Optional[EmbeddingCertificate] = None
    rounds: int = 0


def standardize(p: Presentation, max_degree: Optional[int] = None, certify: bool = True) -> EmbeddingResult:
    """Embed p into a presentation with all generators in degree 1"""
    images = _identity_images(p)
    target, images = _standardize(p, images)
    if target is not p:
        target = Presentation(f"{p.name}^std", p.field, target.generators, target.relations)
    cert = certify_embedding(p, target, images, max_degree or DEFAULT_MAX_DEGREE) if certify else None
    return EmbeddingResult(target, images, cert)


def _quadratize_round(p: Presentation, images: Dict[str, LieElement],
                      round_no: int) -> Tuple[Presentation, Dict[str, LieElement]]:
    """
    Remove every relation of the top degree d at once. One central letter t
    of degree 1 serves the whole round. Each relation r = sum_i [x_i, a_i]
    gets a stable letter u of degree d - 2 with [u, t] = a_1 and
    [u, x_1] = sum_(i >= 2) [x_i, s_i], where [s_i, t] = a_i and s_i is
    shared by every relation with the same x_i and a_i.
    """
    d = max(p.relation_degrees())
    top = [r for r in p.relations if r.degree == d]
    others = [r for r in p.relations if r.degree != d]
    old = p.generators
    field = p.field

    taken = set(old.names)
    central = _fresh('t', taken)
    pairs = [(central, 1)]
    shared: Dict[Tuple[int, LieElement], str] = {}
    plans = []
    for r in top:
        split = split_left(r)
        letters = list(split)
        first, rest = letters[0], letters[1:]
        s_names = {}
        for i in rest:
            key = (i, split[i])
            if key not in shared:
                shared[key] = _fresh(f"s_{old.names[i]}", taken)
                pairs.append((shared[key], d - 2))
            s_names[i] = shared[key]
        stable = _fresh('u', taken)
        pairs.append((stable, d - 2))
        plans.append((first, split[first], s_names, stable))
    gens = old.extend(pairs)

    def gen(name: str) -> LieElement:
        return LieElement.generator(gens, name, field)

    def lift(e: LieElement) -> LieElement:
        return embed(e, gens)

    t = gen(central)
    relations = [lift(q) for q in others]
    relations += [bracket(t, gen(g)) for g in old.names]
    relations += [bracket(gen(name), t) - lift(a) for (_, a), name in shared.items()]
    for first, a_first, s_names, stable in plans:
        u = gen(stable)
        relations.append(bracket(u, t) - lift(a_first))
        psi = LieElement.zero(gens, d - 1, field)
        for i, name in s_names.items():
            psi = psi + bracket(gen(old.names[i]), gen(name))
        relations.append(bracket(u, gen(old.names[first])) - psi)
    q = Presentation(p.name, field, gens, tuple(relations))
    images = {k: lift(v) for k, v in images.items()}
    logger.info("quadratize round %d: removed %d relations of degree %d, %d generators, %d relations",
                round_no, len(top), d, len(gens), len(relations))
    return _standardize(q, images)


def quadratize(p: Presentation, max_degree: Optional[int] = None, certify: bool = True) -> EmbeddingResult:
    """
    Embed p into a quadratic Lie algebra. Each round clears the current top
    relation degree, so a standard input with relations up to degree d takes
    d - 2 rounds.
    """
    images = _identity_images(p)
    current, images = _standardize(p, images)
    rounds = 0
    while current.relations and max(current.relation_degrees()) > 2:
        rounds += 1
        current, images = _quadratize_round(current, images, rounds)
    if current is not p:
        current = Presentation(f"{p.name}^quad", p.field, current.generators, current.relations)
    cert = certify_embedding(p, current, images, max_degree or DEFAULT_MAX_DEGREE) if certify else None
    return EmbeddingResult(current, images, cert, rounds)
