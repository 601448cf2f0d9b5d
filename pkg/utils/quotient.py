"""
Degree-truncated models of finitely presented graded Lie algebras.

expand_tables() builds L = F/(R) up to a cutoff N by ideal closure,
I_d = span(R_d) + sum_g [g, I_(d - deg g)], and keeps L_d as the span of the
Lyndon words that are not pivots of I_d. Subalgebra views, center, derived
and upper central series are computed on top of any table.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from utils.arith import EchelonSpace, ExactMatrix, FieldSpec, PolySeries, Vector, axpy, pbw_series, rank_kernel
from utils.errors import DomainError, UsageError
from utils.free_lie import (GeneratorSet, LieElement, Word, _basis_bracket_in, bracketing_text, free_dimension,
                            lyndon_words, word_index)
from utils.presentations import Presentation

logger = logging.getLogger(__name__)

Homogeneous = Tuple[int, Vector]


class GradedLieTable:
    """
    Common interface of expanded algebras and their subalgebra views:
    per-degree dimensions, basis brackets and generators, all up to cutoff.
    """

    field: FieldSpec
    cutoff: int

    def __init__(self, field: FieldSpec, cutoff: int):
        self.field = field
        self.cutoff = cutoff
        self._brackets: Dict[Tuple[int, int, int, int], Vector] = {}

    def dim(self, d: int) -> int:
        raise NotImplementedError

    def generator_vectors(self) -> List[Homogeneous]:
        raise NotImplementedError

    def _compute_bracket(self, a: int, i: int, b: int, j: int) -> Vector:
        raise NotImplementedError

    def basis_label(self, d: int, i: int) -> str:
        return f"e{d}_{i}"

    @property
    def dims(self) -> Dict[int, int]:
        return {d: self.dim(d) for d in range(1, self.cutoff + 1)}

    def dim_list(self) -> List[int]:
        return [self.dim(d) for d in range(1, self.cutoff + 1)]

    @property
    def generator_degrees(self) -> List[int]:
        return sorted({d for d, v in self.generator_vectors() if v})

    def bracket_basis(self, a: int, i: int, b: int, j: int) -> Vector:
        """[e_(a,i), e_(b,j)] in the basis of degree a + b"""
        if a + b > self.cutoff:
            raise DomainError(f"bracket lands in degree {a + b} beyond the cutoff {self.cutoff}")
        if (a, i) == (b, j):
            return {}
        if (a, i) > (b, j):
            return {k: -v for k, v in self.bracket_basis(b, j, a, i).items()}
        key = (a, i, b, j)
        if key not in self._brackets:
            self._brackets[key] = self._compute_bracket(a, i, b, j)
        return self._brackets[key]

    def bracket(self, a: int, u: Mapping[int, Any], b: int, v: Mapping[int, Any]) -> Vector:
        out: Vector = {}
        if a + b > self.cutoff:
            raise DomainError(f"bracket lands in degree {a + b} beyond the cutoff {self.cutoff}")
        for i, cu in u.items():
            for j, cv in v.items():
                axpy(out, cu * cv, self.bracket_basis(a, i, b, j))
        return out

    def unit(self, d: int, i: int) -> Vector:
        return {i: self.field.one}


# ---------------------------------------------------------------------------
# Quotients of free Lie algebras
# ---------------------------------------------------------------------------

class AlgebraTable(GradedLieTable):
    """L = F/(R) truncated at degree cutoff"""

    def __init__(self, presentation: Presentation, cutoff: int,
                 ideals: Dict[int, EchelonSpace]):
        super().__init__(presentation.field, cutoff)
        self.presentation = presentation
        self.generators = presentation.generators
        self.ideals = ideals
        self.basis_positions: Dict[int, List[int]] = {d: ideals[d].complement() for d in ideals}
        self._basis_index = {d: {pos: k for k, pos in enumerate(cols)}
                             for d, cols in self.basis_positions.items()}

    def dim(self, d: int) -> int:
        if d < 1 or d > self.cutoff:
            raise DomainError(f"degree {d} outside 1..{self.cutoff}")
        return len(self.basis_positions[d])

    def basis_words(self, d: int) -> List[Word]:
        words = lyndon_words(self.generators, d)
        return [words[p] for p in self.basis_positions[d]]

    def basis_label(self, d: int, i: int) -> str:
        return bracketing_text(self.basis_words(d)[i], self.generators)

    def project_free(self, d: int, free_vector: Mapping[int, Any]) -> Vector:
        """Image of a vector of F_d (Lyndon positions) in the basis of L_d"""
        remainder = self.ideals[d].reduce(free_vector)
        index = self._basis_index[d]
        return {index[p]: c for p, c in remainder.items()}

    def project(self, element: LieElement) -> Vector:
        if element.generators != self.generators:
            raise UsageError("element belongs to another free Lie algebra")
        if element.is_zero():
            return {}
        return self.project_free(element.degree, element.to_vector())

    def lift(self, d: int, vector: Mapping[int, Any]) -> LieElement:
        words = self.basis_words(d)
        return LieElement(self.generators, self.field, d, {words[i]: c for i, c in vector.items()})

    def generator_vectors(self) -> List[Homogeneous]:
        out = []
        for name, d in zip(self.generators.names, self.generators.degrees):
            if d <= self.cutoff:
                out.append((d, self.project(LieElement.generator(self.generators, name, self.field))))
        return out

    def _compute_bracket(self, a: int, i: int, b: int, j: int) -> Vector:
        wa = self.basis_words(a)[i]
        wb = self.basis_words(b)[j]
        index = word_index(self.generators, a + b)
        free = {index[w]: c for w, c in _basis_bracket_in(self.field, wa, wb).items()}
        return self.project_free(a + b, free)


def expand_tables(p: Presentation, n: int) -> AlgebraTable:
    if n < 2:
        raise UsageError("the cutoff N must be at least 2")
    gens = p.generators
    field = p.field
    ideals: Dict[int, EchelonSpace] = {}
    ad_cache: Dict[Tuple[int, int], Vector] = {}

    def ad(letter: int, word: Word, index: Dict[Word, int]) -> Vector:
        key = (letter, word)
        if key not in ad_cache:
            ad_cache[key] = {index[w]: c for w, c in _basis_bracket_in(field, (letter,), word).items()}
        return ad_cache[key]

    for d in range(1, n + 1):
        size = free_dimension(gens, d)
        index = word_index(gens, d)
        lower = [(g, d - k) for g, k in enumerate(gens.degrees) if k < d]
        has_top_generator = d in gens.degrees
        if (d > 1 and not has_top_generator and lower and not p.relations_of_degree(d)
                and all(ideals[e].codim == 0 for _, e in lower)):
            ideals[d] = EchelonSpace.full(size, field)
            logger.debug("degree %d: lower components vanish, L_%d = 0", d, d)
            continue
        spanning = [r.to_vector() for r in p.relations_of_degree(d)]
        for letter, e in lower:
            words = lyndon_words(gens, e)
            for row in ideals[e].rows:
                image: Vector = {}
                for position, coef in row.items():
                    axpy(image, coef, ad(letter, words[position], index))
                if image:
                    spanning.append(image)
        ideals[d] = EchelonSpace.span(spanning, size, field)
        logger.info("degree %d: dim F = %d, dim I = %d, dim L = %d",
                    d, size, ideals[d].dim, ideals[d].codim)
    return AlgebraTable(p, n, ideals)


def hilbert_series_L(t: GradedLieTable) -> PolySeries:
    return PolySeries.from_coefficients({d: t.dim(d) for d in range(1, t.cutoff + 1)}, t.cutoff)


def hilbert_series_U(t: GradedLieTable) -> PolySeries:
    return pbw_series(t.dims, t.cutoff)


# ---------------------------------------------------------------------------
# Subalgebras
# ---------------------------------------------------------------------------

class SubalgebraView(GradedLieTable):
    """Subalgebra of a parent table generated by homogeneous elements"""

    def __init__(self, parent: GradedLieTable, generators: Sequence[Homogeneous], cutoff: int,
                 spaces: Dict[int, EchelonSpace]):
        super().__init__(parent.field, cutoff)
        self.parent = parent
        self.generators = [(d, dict(v)) for d, v in generators]
        self.spaces = spaces

    def dim(self, d: int) -> int:
        if d < 1 or d > self.cutoff:
            raise DomainError(f"degree {d} outside 1..{self.cutoff}")
        return self.spaces[d].dim

    def basis(self, d: int) -> List[Vector]:
        """Basis of S_d in parent coordinates"""
        return self.spaces[d].rows

    def coordinates(self, d: int, parent_vector: Mapping[int, Any]) -> Vector:
        return self.spaces[d].coordinates(parent_vector)

    def to_parent(self, d: int, vector: Mapping[int, Any]) -> Vector:
        out: Vector = {}
        rows = self.spaces[d].rows
        for i, c in vector.items():
            axpy(out, c, rows[i])
        return out

    def generator_vectors(self) -> List[Homogeneous]:
        return [(d, self.coordinates(d, v)) for d, v in self.generators if v]

    def basis_label(self, d: int, i: int) -> str:
        return f"s{d}_{i}"

    def _compute_bracket(self, a: int, i: int, b: int, j: int) -> Vector:
        u = self.spaces[a].rows[i]
        v = self.spaces[b].rows[j]
        return self.coordinates(a + b, self.parent.bracket(a, u, b, v))


def generated_subalgebra(t: GradedLieTable, generators: Sequence[Homogeneous],
                         n: Optional[int] = None) -> SubalgebraView:
    """
    Subalgebra generated by homogeneous elements (degree, parent vector):
    S_d = span(generators of degree d) + sum_g [g, S_(d - deg g)].
    """
    cutoff = t.cutoff if n is None else n
    if cutoff > t.cutoff:
        raise UsageError(f"subalgebra cutoff {cutoff} exceeds the parent cutoff {t.cutoff}")
    gens = [(d, dict(v)) for d, v in generators if v]
    spaces: Dict[int, EchelonSpace] = {}
    for d in range(1, cutoff + 1):
        spanning = [v for k, v in gens if k == d]
        for k, g in gens:
            if k < d:
                for row in spaces[d - k].rows:
                    image = t.bracket(k, g, d - k, row)
                    if image:
                        spanning.append(image)
        spaces[d] = EchelonSpace.span(spanning, t.dim(d), t.field)
    return SubalgebraView(t, gens, cutoff, spaces)


def _as_degree_one(t: GradedLieTable, vector: Union[LieElement, Mapping[int, Any]]) -> Vector:
    if isinstance(vector, LieElement):
        if not isinstance(t, AlgebraTable):
            raise UsageError("free Lie elements can only be projected into an expanded table")
        if not vector.is_zero() and vector.degree != 1:
            raise UsageError(f"generating vectors must have degree 1, got degree {vector.degree}")
        return t.project(vector)
    out = {}
    for i, c in vector.items():
        if not 0 <= i < t.dim(1):
            raise UsageError(f"coordinate {i} outside L_1 of dimension {t.dim(1)}")
        value = t.field(c)
        if value:
            out[i] = value
    return out


def subalgebra_tables(t: GradedLieTable, vectors: Sequence[Union[LieElement, Mapping[int, Any]]],
                      n: Optional[int] = None) -> SubalgebraView:
    """Standard subalgebra generated by a subspace V of L_1"""
    space = EchelonSpace.span([_as_degree_one(t, v) for v in vectors], t.dim(1), t.field)
    return generated_subalgebra(t, [(1, row) for row in space.rows], n)


def coordinate_subalgebra(t: GradedLieTable, indices: Sequence[int], n: Optional[int] = None) -> SubalgebraView:
    return subalgebra_tables(t, [{i: 1} for i in indices], n)


# ---------------------------------------------------------------------------
# Center and series
# ---------------------------------------------------------------------------

@dataclass
class GradedSubspaces:
    """Degreewise subspaces of a table, known on degrees 1..window"""

    window: int
    spaces: Dict[int, EchelonSpace]

    @property
    def dims(self) -> Dict[int, int]:
        return {d: self.spaces[d].dim for d in range(1, self.window + 1)}

    def is_zero(self) -> bool:
        return all(s.dim == 0 for s in self.spaces.values())

    def degrees(self) -> List[int]:
        return [d for d, s in sorted(self.spaces.items()) if s.dim]


def _kernel_of_brackets(t: GradedLieTable, d: int, targets: Dict[int, EchelonSpace]) -> EchelonSpace:
    """x in L_d with [x, g] in targets[deg] for every generator g"""
    size = t.dim(d)
    if size == 0:
        return EchelonSpace.zero(0, t.field)
    columns: List[Vector] = []
    for i in range(size):
        stacked: Vector = {}
        offset = 0
        for k, g in t.generator_vectors():
            image = t.bracket(d, {i: t.field.one}, k, g)
            residue = targets[d + k].reduce(image) if d + k in targets else image
            for pos, c in residue.items():
                stacked[offset + pos] = c
            offset += t.dim(d + k)
        columns.append(stacked)
    rows = max(sum(t.dim(d + k) for k, _ in t.generator_vectors()), 1)
    _, kernel = rank_kernel(ExactMatrix.from_column_vectors(columns, rows, t.field))
    return EchelonSpace.span(kernel, size, t.field)


def center(t: GradedLieTable) -> GradedSubspaces:
    """Z(L)_d for d <= cutoff - (largest generator degree)"""
    top = max(t.generator_degrees, default=1)
    window = t.cutoff - top
    zero = {e: EchelonSpace.zero(t.dim(e), t.field) for e in range(1, t.cutoff + 1)}
    spaces = {d: _kernel_of_brackets(t, d, zero) for d in range(1, window + 1)}
    return GradedSubspaces(window, spaces)


def center_degrees(t: GradedLieTable) -> List[int]:
    return center(t).degrees()


@dataclass
class SeriesReport:
    levels: List[GradedSubspaces] = dc_field(default_factory=list)
    terminated: bool = False

    def dims(self) -> List[Dict[int, int]]:
        return [level.dims for level in self.levels]


def derived_series(t: GradedLieTable, max_levels: int = 8) -> SeriesReport:
    """L^(0) = L, L^(k+1) = [L^(k), L^(k)], degreewise up to the cutoff"""
    current = {d: EchelonSpace.full(t.dim(d), t.field) for d in range(1, t.cutoff + 1)}
    report = SeriesReport([GradedSubspaces(t.cutoff, current)])
    for _ in range(max_levels):
        nxt: Dict[int, EchelonSpace] = {}
        for d in range(1, t.cutoff + 1):
            spanning = []
            for a in range(1, d // 2 + 1):
                b = d - a
                for i, u in enumerate(current[a].rows):
                    rows_b = current[b].rows[i + 1:] if a == b else current[b].rows
                    for v in rows_b:
                        image = t.bracket(a, u, b, v)
                        if image:
                            spanning.append(image)
            nxt[d] = EchelonSpace.span(spanning, t.dim(d), t.field)
        level = GradedSubspaces(t.cutoff, nxt)
        report.levels.append(level)
        if level.is_zero():
            report.terminated = True
            break
        if all(nxt[d].dim == current[d].dim for d in nxt):
            break
        current = nxt
    return report


def upper_central_series(t: GradedLieTable, max_levels: int = 16) -> SeriesReport:
    """
    Z_0 = 0, Z_(n+1) = {x : [x, L] in Z_n}. Each level is known on one
    generator degree fewer than the previous one.
    """
    top = max(t.generator_degrees, default=1)
    current = GradedSubspaces(t.cutoff, {d: EchelonSpace.zero(t.dim(d), t.field)
                                         for d in range(1, t.cutoff + 1)})
    report = SeriesReport([current])
    for _ in range(max_levels):
        window = current.window - top
        if window < 1:
            break
        spaces = {d: _kernel_of_brackets(t, d, current.spaces) for d in range(1, window + 1)}
        level = GradedSubspaces(window, spaces)
        report.levels.append(level)
        if all(spaces[d].dim == current.spaces[d].dim for d in spaces):
            report.terminated = True
            break
        current = level
    return report


def z_infinity(t: GradedLieTable) -> GradedSubspaces:
    return upper_central_series(t).levels[-1]


def is_abelian(t: GradedLieTable) -> bool:
    return derived_series(t, max_levels=1).levels[1].is_zero()


def observed_solvable(t: GradedLieTable) -> bool:
    return derived_series(t).terminated


def observed_nilpotent(t: GradedLieTable) -> bool:
    top = z_infinity(t)
    return top.window >= 1 and all(top.dims[d] == t.dim(d) for d in range(1, top.window + 1))


def free_dims(rank: int, n: int) -> List[int]:
    gens = GeneratorSet.standard([f"g{i}" for i in range(rank)])
    return [free_dimension(gens, d) if rank else 0 for d in range(1, n + 1)]
