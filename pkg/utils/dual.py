"""
Quadratic duals: L^! = Λ(V*)/(R⊥) for quadratic L = <V | R>.

Also the universal quadratic cover, the Fröberg identity
H_U(L)(t) H_L!(-t) = 1, Darboux bases of skew forms and the
one-relator / two-relator classifications built on them.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from utils.arith import EchelonSpace, ExactMatrix, FieldSpec, PolySeries, Vector, axpy, rank_kernel
from utils.errors import DomainError, NonQuadraticError, RelationCountError
from utils.free_lie import GeneratorSet, LieElement
from utils.presentations import Presentation
from utils.quotient import AlgebraTable, expand_tables, hilbert_series_U

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def _pairs(n: int) -> List[Tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


@dataclass
class QuadraticData:
    """V = L_1 with R ⊆ Λ²V and its annihilator R⊥ ⊆ Λ²V*, over the pair basis (i < j)"""

    field: FieldSpec
    names: Tuple[str, ...]
    relations: EchelonSpace
    annihilator: EchelonSpace

    @property
    def n(self) -> int:
        return len(self.names)

    def pair_label(self, k: int) -> str:
        i, j = _pairs(self.n)[k]
        return f"[{self.names[i]},{self.names[j]}]"


def relation_vector(r: LieElement) -> Vector:
    """Coefficients of a quadratic relation over the pairs (i < j)"""
    index = {pair: k for k, pair in enumerate(_pairs(len(r.generators)))}
    return {index[tuple(w)]: c for w, c in r.coords.items()}


def quadratic_data(p: Presentation) -> QuadraticData:
    if not p.is_quadratic():
        raise NonQuadraticError(f"{p.name} is not quadratic: relation degrees {p.relation_degrees()}, "
                                f"generator degrees {list(p.generators.degrees)}")
    n = len(p.generators)
    size = n * (n - 1) // 2
    relations = EchelonSpace.span([relation_vector(r) for r in p.relations], size, p.field)
    if relations.dim:
        _, kernel = rank_kernel(ExactMatrix.from_row_vectors(relations.rows, size, p.field))
    else:
        kernel = [{k: p.field.one} for k in range(size)]
    annihilator = EchelonSpace.span(kernel, size, p.field)
    return QuadraticData(p.field, p.generators.names, relations, annihilator)


def annihilator(space: EchelonSpace) -> EchelonSpace:
    if not space.dim:
        return EchelonSpace.full(space.ambient, space.field)
    _, kernel = rank_kernel(ExactMatrix.from_row_vectors(space.rows, space.ambient, space.field))
    return EchelonSpace.span(kernel, space.ambient, space.field)


def quadratic_cover(p: Presentation, table: Optional[AlgebraTable] = None) -> Presentation:
    """
    Keep the degree-1 generators and the degree-2 relations of a minimal
    presentation: the kernel of the bracket Λ²L_1 -> L_2.
    """
    t = table if table is not None else expand_tables(p, 2)
    ones = p.degree_one_names()
    gens = GeneratorSet.standard(ones)
    field = p.field
    n = len(ones)
    pairs = _pairs(n)
    columns = [t.bracket(1, {i: field.one}, 1, {j: field.one}) for i, j in pairs]
    if pairs:
        _, kernel = rank_kernel(ExactMatrix.from_column_vectors(columns, max(t.dim(2), 1), field))
    else:
        kernel = []
    relations = [LieElement(gens, field, 2, {pairs[k]: c for k, c in v.items()}) for v in kernel]
    logger.info("quadratic cover of %s: %d generators, %d relations", p.name, n, len(relations))
    return Presentation(f"{p.name}^q", field, gens, tuple(relations))


# ---------------------------------------------------------------------------
# The dual algebra
# ---------------------------------------------------------------------------

def wedge_sign(a: Monomial, b: Monomial) -> int:
    """Sign of sorting a + b, or 0 when they share an index"""
    if set(a) & set(b):
        return 0
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions % 2 else 1


class DualAlgebraTable:
    """Λ(V*)/(Λ(V*) ∧ R⊥) with its induced wedge product"""

    def __init__(self, data: QuadraticData):
        self.data = data
        self.field = data.field
        n = data.n
        self.monomials: Dict[int, List[Monomial]] = {
            i: list(itertools.combinations(range(n), i)) for i in range(n + 1)
        }
        self._monomial_index = {i: {m: k for k, m in enumerate(ms)} for i, ms in self.monomials.items()}
        self.ideals: Dict[int, EchelonSpace] = {}
        for i in range(n + 1):
            spanning = []
            if i >= 2:
                for omega in data.annihilator.rows:
                    for m in self.monomials[i - 2]:
                        spanning.append(self._wedge_vectors(2, omega, i - 2, {self._monomial_index[i - 2][m]: self.field.one}))
            self.ideals[i] = EchelonSpace.span(spanning, len(self.monomials[i]), self.field)
        self.basis_positions = {i: self.ideals[i].complement() for i in self.ideals}

    def _wedge_vectors(self, a: int, u: Vector, b: int, v: Vector) -> Vector:
        out: Vector = {}
        if a + b > self.data.n:
            return out
        target = self._monomial_index[a + b]
        for i, cu in u.items():
            ma = self.monomials[a][i]
            for j, cv in v.items():
                mb = self.monomials[b][j]
                sign = wedge_sign(ma, mb)
                if sign:
                    axpy(out, cu * cv if sign > 0 else -(cu * cv), {target[tuple(sorted(ma + mb))]: self.field.one})
        return out

    def dim(self, i: int) -> int:
        if i < 0 or i > self.data.n:
            return 0
        return len(self.basis_positions[i])

    @property
    def dims(self) -> List[int]:
        return [self.dim(i) for i in range(self.data.n + 1)]

    def basis(self, i: int) -> List[Monomial]:
        return [self.monomials[i][k] for k in self.basis_positions[i]]

    def basis_label(self, i: int, k: int) -> str:
        m = self.basis(i)[k]
        return '∧'.join(f"{self.data.names[a]}*" for a in m) if m else '1'

    def _to_quotient(self, i: int, vector: Vector) -> Vector:
        remainder = self.ideals[i].reduce(vector)
        index = {pos: k for k, pos in enumerate(self.basis_positions[i])}
        return {index[p]: c for p, c in remainder.items()}

    def multiply(self, a: int, u: Vector, b: int, v: Vector) -> Vector:
        """Product of quotient-basis vectors of degrees a and b"""
        if a + b > self.data.n:
            return {}
        lift_u = {self.basis_positions[a][k]: c for k, c in u.items()}
        lift_v = {self.basis_positions[b][k]: c for k, c in v.items()}
        return self._to_quotient(a + b, self._wedge_vectors(a, lift_u, b, lift_v))

    def multiplication_table(self, a: int, b: int) -> Dict[Tuple[int, int], Vector]:
        out = {}
        for i in range(self.dim(a)):
            for j in range(self.dim(b)):
                product = self.multiply(a, {i: self.field.one}, b, {j: self.field.one})
                if product:
                    out[(i, j)] = product
        return out

    def hilbert_polynomial(self) -> PolySeries:
        return PolySeries.from_coefficients(self.dims)


def dual_algebra(p: Presentation) -> DualAlgebraTable:
    table = DualAlgebraTable(quadratic_data(p))
    logger.info("dual of %s: dims %s", p.name, table.dims)
    return table


@dataclass(frozen=True)
class FrobergResult:
    ok: bool
    cutoff: int
    degree: Optional[int] = None
    value: Any = 0

    def __bool__(self):
        return self.ok

    def __str__(self):
        return f"OK({self.cutoff})" if self.ok else f"FirstDefect({self.degree}, {self.value})"


def froberg_check(t: AlgebraTable, dual: DualAlgebraTable, n: Optional[int] = None) -> FrobergResult:
    """Least k <= n where H_U(t) H_L!(-t) differs from 1"""
    n = t.cutoff if n is None else n
    product = hilbert_series_U(t).truncate(n) * dual.hilbert_polynomial().at_negative().truncate(n)
    for k, c in enumerate(product.coefficients(n)):
        expected = 1 if k == 0 else 0
        if c != expected:
            return FrobergResult(False, n, k, c)
    return FrobergResult(True, n)


# ---------------------------------------------------------------------------
# Skew forms
# ---------------------------------------------------------------------------

def _pairing(beta: Sequence[Sequence[Any]], u: Vector, v: Vector) -> Any:
    total = 0
    for i, a in u.items():
        for j, b in v.items():
            if beta[i][j]:
                total = total + a * beta[i][j] * b
    return total


def skew_form(data: QuadraticData, relation: Vector) -> List[List[Any]]:
    field = data.field
    beta = [[field.zero] * data.n for _ in range(data.n)]
    for k, c in relation.items():
        i, j = _pairs(data.n)[k]
        beta[i][j] = c
        beta[j][i] = -c
    return beta


def darboux_decompose(beta: Sequence[Sequence[Any]],
                      field: FieldSpec) -> Tuple[List[Vector], List[Tuple[Vector, Vector]]]:
    """
    Radical basis and symplectic pairs (e, f) with beta(e, f) = 1,
    by symplectic Gram-Schmidt.
    """
    n = len(beta)
    beta = [[field(x) for x in row] for row in beta]
    for i in range(n):
        if len(beta[i]) != n:
            raise DomainError("form matrix must be square")
        for j in range(n):
            if beta[i][j] != -beta[j][i]:
                raise DomainError(f"form is not skew-symmetric at ({i},{j})")
    pool: List[Vector] = [{i: field.one} for i in range(n)]
    pairs: List[Tuple[Vector, Vector]] = []
    while True:
        hit = next(((a, b) for a in range(len(pool)) for b in range(a + 1, len(pool))
                    if _pairing(beta, pool[a], pool[b])), None)
        if hit is None:
            break
        a, b = hit
        e = pool[a]
        scale = field.one / _pairing(beta, e, pool[b])
        f = {k: v * scale for k, v in pool[b].items()}
        rest = [w for k, w in enumerate(pool) if k not in (a, b)]
        pool = []
        for w in rest:
            adjusted = dict(w)
            axpy(adjusted, -_pairing(beta, w, f), e)
            axpy(adjusted, _pairing(beta, w, e), f)
            pool.append(adjusted)
        pairs.append((e, f))
    return pool, pairs


@dataclass(frozen=True)
class OneRelatorClass:
    genus: int
    free_rank: int

    @property
    def is_free(self) -> bool:
        return self.genus == 0

    def __str__(self):
        if self.genus == 0:
            return f"free of rank {self.free_rank}"
        surface = f"G_{2 * self.genus}"
        return surface if self.free_rank == 0 else f"{surface} * free({self.free_rank})"


def classify_one_relator(p: Presentation) -> OneRelatorClass:
    """L = G_2d * free(f) from the skew form of the single quadratic relation"""
    data = quadratic_data(p)
    if data.relations.dim != 1:
        raise RelationCountError(f"expected one independent quadratic relation, found {data.relations.dim}")
    radical, pairs = darboux_decompose(skew_form(data, data.relations.rows[0]), data.field)
    return OneRelatorClass(len(pairs), len(radical))


@dataclass(frozen=True)
class TwoRelatorVerdict:
    passed: bool
    dual_dims: Tuple[int, ...]

    def __bool__(self):
        return self.passed

    def __str__(self):
        return "PASS" if self.passed else f"FAIL (dual degree 3 has dimension {self.dual_dims[3]})"


def two_relator_bk_check(p: Presentation) -> TwoRelatorVerdict:
    data = quadratic_data(p)
    if data.relations.dim != 2:
        raise RelationCountError(f"expected two independent quadratic relations, found {data.relations.dim}")
    dims = tuple(DualAlgebraTable(data).dims)
    passed = len(dims) <= 3 or dims[3] == 0
    if not passed:
        logger.error("two-relator algebra %s has a nonzero dual in degree 3", p.name)
    return TwoRelatorVerdict(passed, dims)
