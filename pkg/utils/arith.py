"""
Exact arithmetic substrate
Fields (the rationals and odd prime fields), sparse exact matrices with
rank / kernel / solve, echelonized subspaces, and polynomials and truncated
power series over Q.

Matrix work is delegated to sympy's DomainMatrix (fraction-free elimination
over QQ, plain Gauss-Jordan over GF(p)); series work to sympy's sparse
polynomial rings and ring_series.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.ring_series import rs_mul, rs_pow, rs_series_inversion
from sympy.polys.rings import ring

from utils.errors import DomainError, FieldMismatchError, UsageError

logger = logging.getLogger(__name__)

Vector = Dict[int, Any]
Number = Union[int, Fraction]

# Above this fill ratio matrices are handed to sympy in dense form
DENSE_FILL_RATIO = 0.3


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: the rationals or GF(p) with p an odd prime"""

    kind: str = 'rational'
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == 'rational':
            if self.p is not None:
                raise UsageError("the rational field takes no modulus")
        elif self.kind == 'prime':
            if self.p is None or not isprime(self.p):
                raise UsageError(f"field modulus must be prime, got {self.p}")
            if self.p == 2:
                raise UsageError("characteristic 2 is not supported")
        else:
            raise UsageError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> 'FieldSpec':
        return cls('rational')

    @classmethod
    def prime(cls, p: int) -> 'FieldSpec':
        return cls('prime', int(p))

    @classmethod
    def parse(cls, text: str) -> 'FieldSpec':
        """Accepts 'rational', 'Q', 'gf(p)' or a bare prime"""
        token = str(text).strip().lower()
        if token in ('rational', 'rationals', 'q', 'qq'):
            return cls.rationals()
        if token.startswith('gf(') and token.endswith(')'):
            token = token[3:-1]
        try:
            return cls.prime(int(token))
        except ValueError:
            raise UsageError(f"cannot read field {text!r}")

    @cached_property
    def domain(self):
        return QQ if self.kind == 'rational' else GF(self.p)

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def __call__(self, value: Any):
        """Convert an int, Fraction or 'p/q' string into a field element"""
        if self.domain.of_type(value):
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            num, den = value.numerator, value.denominator
        elif isinstance(value, int):
            num, den = value, 1
        else:
            raise FieldMismatchError(f"{value!r} is not an element of {self}")
        if self.kind == 'rational':
            return QQ(num, den)
        if den % self.p == 0:
            raise DomainError(f"denominator {den} vanishes in GF({self.p})")
        return self.domain(num) / self.domain(den)

    def is_element(self, value: Any) -> bool:
        return self.domain.of_type(value)

    def to_python(self, value: Any) -> Number:
        """Field element as a Fraction (over Q) or an int in [0, p)"""
        if self.kind == 'rational':
            return Fraction(int(value.numerator), int(value.denominator))
        return int(self.domain.to_int(value)) % self.p

    def render(self, value: Any) -> str:
        return str(self.to_python(value))

    def __str__(self):
        return 'rational' if self.kind == 'rational' else f'gf({self.p})'


RATIONALS = FieldSpec.rationals()


def axpy(target: Vector, coef: Any, source: Mapping[int, Any]) -> None:
    """target += coef * source, dropping entries that cancel"""
    if not coef:
        return
    for key, value in source.items():
        updated = target[key] + coef * value if key in target else coef * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)


def scale(vector: Mapping[int, Any], coef: Any) -> Vector:
    if not coef:
        return {}
    return {k: coef * v for k, v in vector.items()}


@dataclass(frozen=True)
class ExactMatrix:
    """Sparse exact matrix; entries map (row, col) to elements of one field"""

    rows: int
    cols: int
    field: FieldSpec
    entries: Mapping[Tuple[int, int], Any]

    def __post_init__(self):
        cleaned = {}
        for (r, c), value in self.entries.items():
            if not self.field.is_element(value):
                raise FieldMismatchError(
                    f"entry ({r},{c}) = {value!r} does not lie in {self.field}"
                )
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise UsageError(f"entry ({r},{c}) outside a {self.rows}x{self.cols} matrix")
            if value:
                cleaned[(r, c)] = value
        object.__setattr__(self, 'entries', cleaned)

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[Any]], field: FieldSpec = RATIONALS,
                  cols: Optional[int] = None) -> 'ExactMatrix':
        n_cols = cols if cols is not None else (len(data[0]) if data else 0)
        entries = {}
        for r, row in enumerate(data):
            for c, value in enumerate(row):
                element = field(value)
                if element:
                    entries[(r, c)] = element
        return cls(len(data), n_cols, field, entries)

    @classmethod
    def from_row_vectors(cls, vectors: Sequence[Mapping[int, Any]], cols: int,
                         field: FieldSpec) -> 'ExactMatrix':
        entries = {(r, c): v for r, vec in enumerate(vectors) for c, v in vec.items()}
        return cls(len(vectors), cols, field, entries)

    @classmethod
    def from_column_vectors(cls, vectors: Sequence[Mapping[int, Any]], rows: int,
                            field: FieldSpec) -> 'ExactMatrix':
        entries = {(r, c): v for c, vec in enumerate(vectors) for r, v in vec.items()}
        return cls(rows, len(vectors), field, entries)

    @classmethod
    def from_domain_matrix(cls, dm: DomainMatrix, field: FieldSpec) -> 'ExactMatrix':
        rows, cols = dm.shape
        sparse = dm.to_sparse().rep
        entries = {(r, c): v for r, row in sparse.items() for c, v in row.items()}
        return cls(rows, cols, field, entries)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @property
    def density(self) -> float:
        cells = self.rows * self.cols
        return self.nnz / cells if cells else 0.0

    def to_domain_matrix(self) -> DomainMatrix:
        grouped: Dict[int, Dict[int, Any]] = {}
        for (r, c), value in self.entries.items():
            grouped.setdefault(r, {})[c] = value
        dm = DomainMatrix(grouped, (self.rows, self.cols), self.field.domain)
        if self.density > DENSE_FILL_RATIO:
            dm = dm.to_dense()
        return dm

    def row_vectors(self) -> List[Vector]:
        out: List[Vector] = [{} for _ in range(self.rows)]
        for (r, c), value in self.entries.items():
            out[r][c] = value
        return out

    def transpose(self) -> 'ExactMatrix':
        return ExactMatrix(self.cols, self.rows, self.field,
                           {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other: 'ExactMatrix') -> 'ExactMatrix':
        if self.field != other.field:
            raise FieldMismatchError(f"cannot multiply over {self.field} and {other.field}")
        if self.cols != other.rows:
            raise UsageError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if not self.entries or not other.entries:
            return ExactMatrix(self.rows, other.cols, self.field, {})
        product = self.to_domain_matrix().to_sparse() * other.to_domain_matrix().to_sparse()
        return ExactMatrix.from_domain_matrix(product, self.field)

    def apply(self, vector: Mapping[int, Any]) -> Vector:
        """Matrix times a sparse column vector"""
        out: Vector = {}
        for (r, c), value in self.entries.items():
            if c in vector:
                axpy(out, vector[c], {r: value})
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def rank(self) -> int:
        if not self.entries:
            return 0
        return int(self.to_domain_matrix().rank())


def rref(m: ExactMatrix) -> Tuple[List[Vector], List[int]]:
    """Reduced row echelon form: nonzero rows (sparse) and their pivot columns"""
    if not m.entries:
        return [], []
    reduced, pivots = m.to_domain_matrix().rref()
    sparse = reduced.to_sparse().rep
    rows = [dict(sparse[k]) for k in range(len(pivots))]
    return rows, list(pivots)


def rank_kernel(m: ExactMatrix) -> Tuple[int, List[Vector]]:
    """
    Rank and a kernel basis of m.

    Kernel vectors are sparse maps column -> element, one per free column,
    with a 1 in that column.
    """
    rows, pivots = rref(m)
    pivot_set = set(pivots)
    one = m.field.one
    kernel: List[Vector] = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vector: Vector = {free: one}
        for row, pivot in zip(rows, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        kernel.append(vector)
    logger.debug("rank_kernel %dx%d: rank %d", m.rows, m.cols, len(pivots))
    return len(pivots), kernel


def solve(m: ExactMatrix, rhs: Mapping[int, Any]) -> Optional[Vector]:
    """A particular solution of m x = rhs (free variables zero), or None"""
    augmented = dict(m.entries)
    for r, value in rhs.items():
        augmented[(r, m.cols)] = value
    rows, pivots = rref(ExactMatrix(m.rows, m.cols + 1, m.field, augmented))
    if m.cols in pivots:
        return None
    return {pivot: row[m.cols] for row, pivot in zip(rows, pivots) if row.get(m.cols)}


@dataclass
class EchelonSpace:
    """
    Subspace of field^ambient held as reduced row echelon rows.

    Pivot order is the column order, so every basis derived from it is
    deterministic.
    """

    field: FieldSpec
    ambient: int
    rows: List[Vector]
    pivots: List[int]

    @classmethod
    def span(cls, vectors: Iterable[Mapping[int, Any]], ambient: int,
             field: FieldSpec) -> 'EchelonSpace':
        vectors = [v for v in vectors if v]
        if not vectors:
            return cls.zero(ambient, field)
        rows, pivots = rref(ExactMatrix.from_row_vectors(vectors, ambient, field))
        return cls(field, ambient, rows, pivots)

    @classmethod
    def zero(cls, ambient: int, field: FieldSpec) -> 'EchelonSpace':
        return cls(field, ambient, [], [])

    @classmethod
    def full(cls, ambient: int, field: FieldSpec) -> 'EchelonSpace':
        return cls(field, ambient, [{c: field.one} for c in range(ambient)], list(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def codim(self) -> int:
        return self.ambient - self.dim

    @cached_property
    def _pivot_rows(self) -> Dict[int, Vector]:
        return dict(zip(self.pivots, self.rows))

    def reduce(self, vector: Mapping[int, Any]) -> Vector:
        """Remainder of vector modulo the space; zero on every pivot column"""
        remainder = dict(vector)
        for column in [c for c in vector if c in self._pivot_rows]:
            coef = remainder.get(column)
            if coef:
                axpy(remainder, -coef, self._pivot_rows[column])
        return remainder

    def contains(self, vector: Mapping[int, Any]) -> bool:
        return not self.reduce(vector)

    def coordinates(self, vector: Mapping[int, Any]) -> Vector:
        """Coordinates of a member of the space in the echelon basis"""
        if not self.contains(vector):
            raise DomainError("vector does not lie in the subspace")
        index = {p: k for k, p in enumerate(self.pivots)}
        return {index[c]: v for c, v in vector.items() if c in index and v}

    def complement(self) -> List[int]:
        """Non-pivot columns, in order"""
        taken = set(self.pivots)
        return [c for c in range(self.ambient) if c not in taken]

    def extend(self, vectors: Iterable[Mapping[int, Any]]) -> 'EchelonSpace':
        return EchelonSpace.span(list(self.rows) + list(vectors), self.ambient, self.field)

    def same_as(self, other: 'EchelonSpace') -> bool:
        return self.pivots == other.pivots and self.rows == other.rows


# ---------------------------------------------------------------------------
# Polynomials and truncated series over Q
# ---------------------------------------------------------------------------

SERIES_RING, T = ring('t', QQ)


def _qq(value: Number):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class PolySeries:
    """
    Exact polynomial in t, or a power series known modulo t^(truncation+1)
    """

    poly: Any
    truncation: Optional[int] = None

    def __post_init__(self):
        if self.truncation is not None:
            if self.truncation < 0:
                raise UsageError("truncation must be nonnegative")
            kept = {m: c for m, c in self.poly.items() if m[0] <= self.truncation}
            object.__setattr__(self, 'poly', SERIES_RING.from_dict(kept) if kept else SERIES_RING.zero)

    @classmethod
    def from_coefficients(cls, coefficients: Union[Sequence[Number], Mapping[int, Number]],
                          truncation: Optional[int] = None) -> 'PolySeries':
        if isinstance(coefficients, Mapping):
            items = coefficients.items()
        else:
            items = enumerate(coefficients)
        terms = {(int(k),): _qq(c) for k, c in items if c}
        poly = SERIES_RING.from_dict(terms) if terms else SERIES_RING.zero
        return cls(poly, truncation)

    @classmethod
    def one(cls, truncation: Optional[int] = None) -> 'PolySeries':
        return cls(SERIES_RING.one, truncation)

    @property
    def kind(self) -> str:
        return 'polynomial' if self.truncation is None else 'series'

    @property
    def degree(self) -> int:
        """Largest exponent with a nonzero coefficient; -1 for zero"""
        return max((m[0] for m in self.poly.keys()), default=-1)

    def coefficient(self, k: int) -> Fraction:
        if self.truncation is not None and k > self.truncation:
            raise DomainError(f"coefficient t^{k} lies beyond the truncation t^{self.truncation}")
        return _fraction(self.poly.get((k,), QQ.zero))

    def coefficients(self, upto: Optional[int] = None) -> List[Fraction]:
        top = self.degree if upto is None else upto
        if self.truncation is not None:
            top = self.truncation if upto is None else min(upto, self.truncation)
        return [self.coefficient(k) for k in range(top + 1)]

    def integer_coefficients(self, upto: Optional[int] = None) -> List[int]:
        out = []
        for c in self.coefficients(upto):
            if c.denominator != 1:
                raise DomainError(f"coefficient {c} is not an integer")
            out.append(int(c))
        return out

    def _joint_truncation(self, other: 'PolySeries') -> Optional[int]:
        cuts = [x for x in (self.truncation, other.truncation) if x is not None]
        return min(cuts) if cuts else None

    def __add__(self, other: 'PolySeries') -> 'PolySeries':
        return PolySeries(self.poly + other.poly, self._joint_truncation(other))

    def __sub__(self, other: 'PolySeries') -> 'PolySeries':
        return PolySeries(self.poly - other.poly, self._joint_truncation(other))

    def __neg__(self) -> 'PolySeries':
        return PolySeries(-self.poly, self.truncation)

    def __mul__(self, other: 'PolySeries') -> 'PolySeries':
        return series_mul(self, other)

    def truncate(self, n: int) -> 'PolySeries':
        cut = n if self.truncation is None else min(n, self.truncation)
        return PolySeries(self.poly, cut)

    def inverse(self, n: int) -> 'PolySeries':
        return series_inv(self, n)

    def evaluate(self, x: Number) -> Fraction:
        x = Fraction(x)
        return sum((_fraction(c) * x ** m[0] for m, c in self.poly.items()), Fraction(0))

    def at_negative(self) -> 'PolySeries':
        """P(-t)"""
        flipped = {m: (-c if m[0] % 2 else c) for m, c in self.poly.items()}
        poly = SERIES_RING.from_dict(flipped) if flipped else SERIES_RING.zero
        return PolySeries(poly, self.truncation)

    def divmod(self, other: 'PolySeries') -> Tuple['PolySeries', 'PolySeries']:
        """Exact polynomial division with remainder"""
        if other.poly == SERIES_RING.zero:
            raise DomainError("division by the zero polynomial")
        quotient, remainder = self.poly.div(other.poly)
        return PolySeries(quotient), PolySeries(remainder)

    def is_zero(self) -> bool:
        return self.poly == SERIES_RING.zero

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coefficients()):
            if not c:
                continue
            mono = '' if k == 0 else ('t' if k == 1 else f't^{k}')
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f'-{mono}')
            else:
                terms.append(f'{c}{mono}')
        text = ' + '.join(terms).replace('+ -', '- ') or '0'
        if self.truncation is not None:
            text += f' + O(t^{self.truncation + 1})'
        return text


def series_mul(a: PolySeries, b: PolySeries) -> PolySeries:
    cut = a._joint_truncation(b)
    if cut is None:
        return PolySeries(a.poly * b.poly)
    return PolySeries(rs_mul(a.poly, b.poly, T, cut + 1), cut)


def series_inv(a: PolySeries, n: int) -> PolySeries:
    """Inverse of a modulo t^(n+1); needs a nonzero constant term"""
    if not a.poly.get((0,), QQ.zero):
        raise DomainError("series with zero constant term has no inverse")
    cut = n if a.truncation is None else min(n, a.truncation)
    return PolySeries(rs_series_inversion(a.poly, T, cut + 1), cut)


def pbw_series(dims: Mapping[int, int], n: int) -> PolySeries:
    """prod_i 1/(1 - t^i)^dims[i] modulo t^(n+1)"""
    denominator = SERIES_RING.one
    for i, ell in sorted(dims.items()):
        if ell and i <= n:
            factor = rs_pow(SERIES_RING.one - T ** i, ell, T, n + 1)
            denominator = rs_mul(denominator, factor, T, n + 1)
    return series_inv(PolySeries(denominator, n), n)
