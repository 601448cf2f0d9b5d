"""
Bigraded Betti numbers through the exterior (Chevalley-Eilenberg) chain complex

b_ij = dim H_i(L)_j is read off the ranks of the boundary maps
Λ_i(L)_j -> Λ_(i-1)(L)_j, where j is the internal degree. Internal degree j
only involves L_1..L_j, so every entry is exact linear algebra inside the
truncation.
"""

import itertools
import logging
from bisect import bisect_left
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from utils.arith import ExactMatrix, Vector
from utils.config import MAX_CANDIDATES
from utils.errors import UsageError
from utils.quotient import GradedLieTable, SubalgebraView, free_dims, subalgebra_tables

logger = logging.getLogger(__name__)

Chain = Tuple[int, ...]


@dataclass(frozen=True)
class Verdict:
    """PASS up to a degree, or the first failing bidegree (ordered by j, then i)"""

    passed: bool
    cutoff: int
    bidegree: Optional[Tuple[int, int]] = None
    value: int = 0

    def __bool__(self):
        return self.passed

    def __str__(self):
        if self.passed:
            return f"PASS({self.cutoff})"
        i, j = self.bidegree
        return f"FAIL({i},{j},{self.value})"


class ExteriorComplex:
    """Λ_•(L) with internal grading, restricted to internal degrees <= n"""

    def __init__(self, t: GradedLieTable, n: Optional[int] = None):
        self.table = t
        self.cutoff = t.cutoff if n is None else n
        if self.cutoff > t.cutoff:
            raise UsageError(f"cannot compute beyond the table cutoff {t.cutoff}")
        self.field = t.field
        # global order of basis elements: by degree, then index
        self.elements: List[Tuple[int, int]] = [
            (d, k) for d in range(1, self.cutoff + 1) for k in range(t.dim(d))
        ]
        self.position = {e: p for p, e in enumerate(self.elements)}
        self._bases: Dict[Tuple[int, int], List[Chain]] = {}
        self._indices: Dict[Tuple[int, int], Dict[Chain, int]] = {}
        self._ranks: Dict[Tuple[int, int], int] = {}

    def _chains(self, start: int, count: int, degree: int) -> Iterator[Chain]:
        if count == 0:
            if degree == 0:
                yield ()
            return
        for p in range(start, len(self.elements)):
            d = self.elements[p][0]
            if d > degree - (count - 1):
                break
            for rest in self._chains(p + 1, count - 1, degree - d):
                yield (p,) + rest

    def basis(self, i: int, j: int) -> List[Chain]:
        key = (i, j)
        if key not in self._bases:
            if i < 0 or i > j:
                chains = []
            else:
                chains = list(self._chains(0, i, j))
            self._bases[key] = chains
            self._indices[key] = {c: k for k, c in enumerate(chains)}
        return self._bases[key]

    def dim(self, i: int, j: int) -> int:
        return len(self.basis(i, j))

    def boundary(self, i: int, j: int) -> ExactMatrix:
        """d_i : Λ_i(L)_j -> Λ_(i-1)(L)_j as a (rows = target, cols = source) matrix"""
        source = self.basis(i, j)
        target = self.basis(i - 1, j)
        target_index = self._indices[(i - 1, j)]
        field = self.field
        entries: Dict[Tuple[int, int], Any] = {}
        if i < 2:
            return ExactMatrix(len(target), len(source), field, {})
        for col, chain in enumerate(source):
            for a, b in itertools.combinations(range(i), 2):
                da, ka = self.elements[chain[a]]
                db, kb = self.elements[chain[b]]
                image = self.table.bracket_basis(da, ka, db, kb)
                if not image:
                    continue
                rest = chain[:a] + chain[a + 1:b] + chain[b + 1:]
                sign = -1 if (a + b) % 2 else 1
                for k, coef in image.items():
                    e = self.position[(da + db, k)]
                    slot = bisect_left(rest, e)
                    if slot < len(rest) and rest[slot] == e:
                        continue
                    row = target_index[rest[:slot] + (e,) + rest[slot:]]
                    value = coef if (sign * (-1) ** slot) > 0 else -coef
                    key = (row, col)
                    entries[key] = entries[key] + value if key in entries else value
        return ExactMatrix(len(target), len(source), field, entries)

    def rank(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._ranks:
            if i < 2 or not self.dim(i, j) or not self.dim(i - 1, j):
                self._ranks[key] = 0
            else:
                self._ranks[key] = self.boundary(i, j).rank()
                logger.debug("rank d_%d at degree %d: %d", i, j, self._ranks[key])
        return self._ranks[key]

    def betti(self, i: int, j: int) -> int:
        return self.dim(i, j) - self.rank(i, j) - self.rank(i + 1, j)

    def squares_vanish(self) -> bool:
        """d_(i-1) d_i = 0 on every recorded bidegree"""
        for j in range(2, self.cutoff + 1):
            for i in range(3, j + 1):
                if not self.dim(i, j) or not self.dim(i - 2, j):
                    continue
                if not (self.boundary(i - 1, j) @ self.boundary(i, j)).is_zero():
                    return False
        return True


@dataclass
class BettiTable:
    cutoff: int
    entries: Dict[Tuple[int, int], int]
    chain_dims: Dict[Tuple[int, int], int] = dc_field(default_factory=dict)

    def b(self, i: int, j: int) -> int:
        if j > self.cutoff:
            raise UsageError(f"internal degree {j} lies beyond the cutoff {self.cutoff}")
        return self.entries.get((i, j), 0)

    def nonzero(self) -> Dict[Tuple[int, int], int]:
        return {k: v for k, v in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0])) if v}

    def first_failure(self, ok) -> Verdict:
        for (i, j), value in self.nonzero().items():
            if not ok(i, j):
                return Verdict(False, self.cutoff, (i, j), value)
        return Verdict(True, self.cutoff)

    @property
    def quadratic_verdict(self) -> Verdict:
        return self.first_failure(lambda i, j: i not in (1, 2) or j == i)

    @property
    def koszul_verdict(self) -> Verdict:
        return self.first_failure(lambda i, j: i == j)

    @property
    def quadratic_up_to(self) -> bool:
        return self.quadratic_verdict.passed

    @property
    def koszul_up_to(self) -> bool:
        return self.koszul_verdict.passed

    @property
    def cd_lower_bound(self) -> int:
        """Largest homological degree observed with a nonzero entry"""
        return max((i for (i, _), v in self.entries.items() if v), default=0)

    def diagonal(self) -> List[int]:
        return [self.b(i, i) for i in range(self.cutoff + 1)]

    def euler_consistent(self) -> bool:
        """sum_i (-1)^i dim Λ_i,j = sum_i (-1)^i b_ij for each j"""
        for j in range(self.cutoff + 1):
            chains = sum((-1) ** i * self.chain_dims.get((i, j), 0) for i in range(j + 1))
            homology = sum((-1) ** i * self.entries.get((i, j), 0) for i in range(j + 1))
            if chains != homology:
                return False
        return True

    def to_frame(self) -> pd.DataFrame:
        """Rows i, columns j"""
        data = [[self.entries.get((i, j), 0) if i <= j else None for j in range(self.cutoff + 1)]
                for i in range(self.cutoff + 1)]
        frame = pd.DataFrame(data, index=pd.Index(range(self.cutoff + 1), name='i'),
                             columns=pd.Index(range(self.cutoff + 1), name='j'))
        return frame.astype('Int64')

    def __str__(self):
        return self.to_frame().to_string(na_rep='.')


def betti_table(t: GradedLieTable, n: Optional[int] = None) -> BettiTable:
    cx = ExteriorComplex(t, n)
    entries = {(0, 0): 1}
    chain_dims = {(0, 0): 1}
    for j in range(1, cx.cutoff + 1):
        for i in range(1, j + 1):
            size = cx.dim(i, j)
            chain_dims[(i, j)] = size
            if size:
                entries[(i, j)] = cx.betti(i, j)
    logger.info("betti table to degree %d: %s", cx.cutoff,
                {f"{i},{j}": v for (i, j), v in entries.items() if v})
    return BettiTable(cx.cutoff, entries, chain_dims)


def is_quadratic_up_to(t: Union[GradedLieTable, BettiTable], n: Optional[int] = None) -> Verdict:
    table = t if isinstance(t, BettiTable) else betti_table(t, n)
    return table.quadratic_verdict


def is_koszul_up_to(t: Union[GradedLieTable, BettiTable], n: Optional[int] = None) -> Verdict:
    table = t if isinstance(t, BettiTable) else betti_table(t, n)
    return table.koszul_verdict


def minimal_presentation_degrees(t: Union[GradedLieTable, BettiTable],
                                 n: Optional[int] = None) -> Tuple[Dict[int, int], Dict[int, int]]:
    """Generator degrees (from b_1j) and relation degrees (from b_2j), with multiplicities"""
    table = t if isinstance(t, BettiTable) else betti_table(t, n)
    gens = {j: table.b(1, j) for j in range(1, table.cutoff + 1) if table.b(1, j)}
    rels = {j: table.b(2, j) for j in range(2, table.cutoff + 1) if table.b(2, j)}
    return gens, rels


def goncharova_degrees(q: int) -> Tuple[int, int]:
    """Internal degrees of H_q of the positive Witt algebra: (3q^2 -+ q)/2"""
    if q < 1:
        raise UsageError("q must be positive")
    return (3 * q * q - q) // 2, (3 * q * q + q) // 2


# ---------------------------------------------------------------------------
# Sampling subalgebras
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoordinateSubsets:
    """All coordinate subspaces of L_1 with min_size <= dimension < dim L_1"""

    min_size: int = 2
    max_size: Optional[int] = None

    def candidates(self, t: GradedLieTable) -> Iterator[Tuple[str, List[Vector]]]:
        n1 = t.dim(1)
        top = n1 - 1 if self.max_size is None else min(self.max_size, n1 - 1)
        for k in range(top, self.min_size - 1, -1):
            for subset in itertools.combinations(range(n1), k):
                yield f"span{{{', '.join(t.basis_label(1, i) for i in subset)}}}", \
                    [{i: t.field.one} for i in subset]


@dataclass(frozen=True)
class RandomSubspaces:
    """Seeded random subspaces of L_1 with small integer coordinates"""

    count: int = 20
    seed: int = 0
    dimension: Optional[int] = None

    def candidates(self, t: GradedLieTable) -> Iterator[Tuple[str, List[Vector]]]:
        rng = np.random.default_rng(self.seed)
        n1 = t.dim(1)
        for k in range(self.count):
            if self.dimension:
                size = min(self.dimension, n1)
            else:
                size = int(rng.integers(2, n1)) if n1 > 2 else n1
            matrix = rng.integers(-3, 4, size=(size, n1))
            vectors = [{c: t.field(int(v)) for c, v in enumerate(row) if v} for row in matrix]
            yield f"random#{k}", vectors


@dataclass(frozen=True)
class ExplicitSubspaces:
    spaces: Sequence[Sequence[Mapping[int, Any]]] = ()

    def candidates(self, t: GradedLieTable) -> Iterator[Tuple[str, List[Vector]]]:
        for k, space in enumerate(self.spaces):
            yield f"explicit#{k}", [{i: t.field(c) for i, c in v.items()} for v in space]


Strategy = Union[CoordinateSubsets, RandomSubspaces, ExplicitSubspaces]


@dataclass
class SubalgebraReport:
    label: str
    vectors: List[Vector]
    view: SubalgebraView
    betti: BettiTable
    verdict: Verdict

    @property
    def dims(self) -> List[int]:
        return self.view.dim_list()


def _view_report(t: GradedLieTable, label: str, vectors: List[Vector], n: int) -> SubalgebraReport:
    view = subalgebra_tables(t, vectors, n)
    betti = betti_table(view, n)
    return SubalgebraReport(label, vectors, view, betti, betti.quadratic_verdict)


def bk_check(t: GradedLieTable, strategy: Strategy, n: Optional[int] = None,
             limit: int = MAX_CANDIDATES) -> List[SubalgebraReport]:
    """Quadraticity of sampled standard subalgebras; PASS is relative to the sample"""
    n = t.cutoff if n is None else n
    reports = []
    for label, vectors in itertools.islice(strategy.candidates(t), limit):
        report = _view_report(t, label, vectors, n)
        if not report.verdict:
            logger.warning("subalgebra %s is not quadratic: %s", label, report.verdict)
        reports.append(report)
    return reports


@dataclass
class FiltrationReport:
    chain: List[SubalgebraReport]
    success: bool
    failed_level: Optional[int] = None


def quadratic_filtration_search(t: GradedLieTable, n: Optional[int] = None,
                                drop_order: Optional[Sequence[int]] = None,
                                limit: int = MAX_CANDIDATES) -> FiltrationReport:
    """
    Greedy chain L_1 = V_0 ⊃ V_1 ⊃ ... of codimension-one generating spaces
    whose subalgebras are quadratic up to n. Coordinates are dropped from
    the last one backwards unless drop_order is given.
    """
    n = t.cutoff if n is None else n
    field = t.field
    current = list(range(t.dim(1)))
    top = _view_report(t, "L", [{i: field.one} for i in current], n)
    chain = [top]
    if not top.verdict:
        return FiltrationReport(chain, False, 0)
    forced = list(drop_order) if drop_order is not None else None
    level = 0
    while len(current) > 1:
        level += 1
        if forced:
            options = [forced.pop(0)]
        else:
            options = list(reversed(current))[:limit]
        step = None
        for drop in options:
            if drop not in current:
                raise UsageError(f"coordinate {drop} was already dropped")
            keep = [i for i in current if i != drop]
            label = f"span{{{', '.join(t.basis_label(1, i) for i in keep)}}}"
            report = _view_report(t, label, [{i: field.one} for i in keep], n)
            if report.verdict:
                step = (keep, report)
                break
        if step is None:
            logger.info("no quadratic codimension-one subalgebra at level %d", level)
            return FiltrationReport(chain, False, level)
        current, report = step
        chain.append(report)
    return FiltrationReport(chain, True)


@dataclass
class FreeRankProbe:
    rank: int
    witness: List[Vector]
    label: str
    checked: int


def _is_free_view(view: SubalgebraView, betti: BettiTable, rank: int) -> bool:
    if view.dim_list() != free_dims(rank, view.cutoff):
        return False
    return all(betti.b(2, j) == 0 for j in range(2, betti.cutoff + 1))


def probe_free_rank(t: GradedLieTable, strategy: Optional[Strategy] = None, n: Optional[int] = None,
                    limit: int = MAX_CANDIDATES) -> FreeRankProbe:
    """
    Lower bound for the free rank: the largest generating space found whose
    subalgebra is free up to n. Coordinate subspaces are tried by decreasing
    dimension, then the strategy's candidates.
    """
    n = t.cutoff if n is None else n
    n1 = t.dim(1)
    checked = 0
    candidates: List[Tuple[str, List[Vector]]] = [
        ("L", [{i: t.field.one} for i in range(n1)])
    ]
    candidates += list(itertools.islice(CoordinateSubsets(min_size=1).candidates(t), limit))
    if strategy is not None:
        candidates += list(itertools.islice(strategy.candidates(t), limit))
    sized = []
    for label, vectors in candidates:
        view = subalgebra_tables(t, vectors, n)
        sized.append((view.dim(1), label, vectors, view))
    sized.sort(key=lambda item: -item[0])
    for rank, label, vectors, view in sized:
        if rank == 0:
            continue
        checked += 1
        if _is_free_view(view, betti_table(view, n), rank):
            logger.info("free subalgebra of rank %d generated by %s", rank, label)
            return FreeRankProbe(rank, vectors, label, checked)
    return FreeRankProbe(0, [], "", checked)
