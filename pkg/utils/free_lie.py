"""
Free graded Lie algebras on weighted generators.

Basis: Lyndon words with their standard bracketings P_w. Words are tuples of
generator indices (declaration order is the letter order). Coordinates of a
Lie polynomial are recovered from its tensor expansion by repeatedly peeling
off the lexicographically smallest word, which is always Lyndon, using
P_w = w + (larger words).
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy import factorint

from utils.arith import RATIONALS, EchelonSpace, ExactMatrix, FieldSpec, axpy, solve
from utils.errors import DomainError, FieldMismatchError, UsageError

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
TensorPoly = Dict[Word, int]


@dataclass(frozen=True)
class GeneratorSet:
    names: Tuple[str, ...]
    degrees: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'names', tuple(self.names))
        object.__setattr__(self, 'degrees', tuple(int(d) for d in self.degrees))
        if len(self.names) != len(self.degrees):
            raise UsageError("every generator needs exactly one degree")
        if len(set(self.names)) != len(self.names):
            raise UsageError(f"duplicate generator names in {self.names}")
        if any(d < 1 for d in self.degrees):
            raise UsageError("generator degrees must be positive")

    @classmethod
    def standard(cls, names: Sequence[str]) -> 'GeneratorSet':
        return cls(tuple(names), tuple(1 for _ in names))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[str, int]]) -> 'GeneratorSet':
        return cls(tuple(n for n, _ in pairs), tuple(d for _, d in pairs))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UsageError(f"unknown generator {name!r}")

    def degree_of(self, name: str) -> int:
        return self.degrees[self.index(name)]

    def weight(self, word: Word) -> int:
        return sum(self.degrees[i] for i in word)

    def is_standard(self) -> bool:
        return all(d == 1 for d in self.degrees)

    def extend(self, pairs: Sequence[Tuple[str, int]]) -> 'GeneratorSet':
        return GeneratorSet(self.names + tuple(n for n, _ in pairs),
                            self.degrees + tuple(d for _, d in pairs))

    def spell(self, word: Word) -> str:
        return ''.join(self.names[i] for i in word) if all(len(n) == 1 for n in self.names) \
            else ' '.join(self.names[i] for i in word)


def is_lyndon(word: Word) -> bool:
    """Strictly smaller than every proper suffix"""
    return len(word) > 0 and all(word < word[i:] for i in range(1, len(word)))


@lru_cache(maxsize=None)
def standard_factorization(word: Word) -> Tuple[Word, Word]:
    """w = uv with v the longest proper Lyndon suffix"""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise DomainError(f"{word} has no standard factorization")


def _lyndon_words_upto(alphabet: int, max_len: int) -> Iterator[Word]:
    # Duval's generation, lexicographic order
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet - 1:
            w.pop()


@lru_cache(maxsize=None)
def lyndon_words(gens: GeneratorSet, n: int) -> Tuple[Word, ...]:
    """Lyndon words of weight n, lexicographic order"""
    if n < 1:
        raise UsageError("degree must be at least 1")
    if not gens.names:
        return ()
    max_len = n // min(gens.degrees)
    words = tuple(w for w in _lyndon_words_upto(len(gens), max_len) if gens.weight(w) == n)
    logger.debug("lyndon_words: %d words of weight %d on %d letters", len(words), n, len(gens))
    return words


@lru_cache(maxsize=None)
def word_index(gens: GeneratorSet, n: int) -> Dict[Word, int]:
    return {w: k for k, w in enumerate(lyndon_words(gens, n))}


def bracketing_text(word: Word, gens: GeneratorSet) -> str:
    if len(word) == 1:
        return gens.names[word[0]]
    u, v = standard_factorization(word)
    return f"[{bracketing_text(u, gens)},{bracketing_text(v, gens)}]"


@dataclass(frozen=True)
class LyndonBasisElement:
    word: Word
    generators: GeneratorSet

    @property
    def weight(self) -> int:
        return self.generators.weight(self.word)

    @property
    def letters(self) -> Tuple[str, ...]:
        return tuple(self.generators.names[i] for i in self.word)

    @property
    def bracketing(self) -> str:
        return bracketing_text(self.word, self.generators)

    def __str__(self):
        return self.bracketing


def lyndon_basis(gens: GeneratorSet, n: int) -> List[LyndonBasisElement]:
    return [LyndonBasisElement(w, gens) for w in lyndon_words(gens, n)]


def _mobius(n: int) -> int:
    exponents = factorint(n).values()
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


@lru_cache(maxsize=None)
def free_dimension(gens: GeneratorSet, n: int) -> int:
    """
    dim F_n by the weighted necklace formula.

    With q_j generators of degree j and 1/(1 - sum q_j t^j) = sum h_m t^m,
    s_m = sum_j j q_j h_(m-j) and dim F_n = (1/n) sum_(d | n) mu(n/d) s_d.
    """
    if n < 1:
        raise UsageError("degree must be at least 1")
    q = [0] * (n + 1)
    for d in gens.degrees:
        if d <= n:
            q[d] += 1
    h = [1] + [0] * n
    for m in range(1, n + 1):
        h[m] = sum(q[j] * h[m - j] for j in range(1, m + 1))
    s = [0] * (n + 1)
    for m in range(1, n + 1):
        s[m] = sum(j * q[j] * h[m - j] for j in range(1, m + 1))
    total = sum(_mobius(n // d) * s[d] for d in range(1, n + 1) if n % d == 0)
    return total // n


# ---------------------------------------------------------------------------
# Tensor algebra and basis brackets (field independent, integer coefficients)
# ---------------------------------------------------------------------------

def _tensor_mul(a: Mapping[Word, int], b: Mapping[Word, int]) -> TensorPoly:
    out: TensorPoly = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            c = out.get(w, 0) + ca * cb
            if c:
                out[w] = c
            else:
                out.pop(w, None)
    return out


def _tensor_commutator(a: Mapping[Word, int], b: Mapping[Word, int]) -> TensorPoly:
    out = _tensor_mul(a, b)
    for w, c in _tensor_mul(b, a).items():
        value = out.get(w, 0) - c
        if value:
            out[w] = value
        else:
            out.pop(w, None)
    return out


@lru_cache(maxsize=None)
def _word_expansion(word: Word) -> Dict[Word, int]:
    if len(word) == 1:
        return {word: 1}
    u, v = standard_factorization(word)
    return _tensor_commutator(_word_expansion(u), _word_expansion(v))


def tensor_to_lyndon(poly: Mapping[Word, Any], zero: Any = 0) -> Dict[Word, Any]:
    """Lyndon coordinates of a Lie polynomial given by its tensor expansion"""
    work = {w: c for w, c in poly.items() if c}
    heap = list(work)
    heapq.heapify(heap)
    queued = set(heap)
    out: Dict[Word, Any] = {}
    while heap:
        word = heapq.heappop(heap)
        queued.discard(word)
        coef = work.get(word)
        if not coef:
            continue
        if not is_lyndon(word):
            raise DomainError(f"tensor {word} is not a Lie polynomial")
        out[word] = coef
        for w, c in _word_expansion(word).items():
            value = work.get(w, zero) - coef * c
            if value:
                work[w] = value
                if w not in queued:
                    heapq.heappush(heap, w)
                    queued.add(w)
            else:
                work.pop(w, None)
    return out


@lru_cache(maxsize=None)
def _basis_bracket(a: Word, b: Word) -> Dict[Word, int]:
    """[P_a, P_b] in Lyndon coordinates"""
    if a == b:
        return {}
    if a > b:
        return {w: -c for w, c in _basis_bracket(b, a).items()}
    joined = a + b
    if len(joined) > 1 and standard_factorization(joined) == (a, b):
        return {joined: 1}
    return tensor_to_lyndon(_tensor_commutator(_word_expansion(a), _word_expansion(b)))


@lru_cache(maxsize=None)
def _basis_bracket_in(field: FieldSpec, a: Word, b: Word) -> Dict[Word, Any]:
    out = {}
    for w, c in _basis_bracket(a, b).items():
        value = field(c)
        if value:
            out[w] = value
    return out


# ---------------------------------------------------------------------------
# Lie elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieElement:
    """Homogeneous element of a free Lie algebra in Lyndon coordinates"""

    generators: GeneratorSet
    field: FieldSpec
    degree: int
    coords: Mapping[Word, Any]

    def __post_init__(self):
        cleaned = {}
        for word, value in self.coords.items():
            if not value:
                continue
            if self.generators.weight(word) != self.degree:
                raise DomainError(
                    f"basis word of weight {self.generators.weight(word)} in an element of degree {self.degree}"
                )
            cleaned[tuple(word)] = value
        object.__setattr__(self, 'coords', cleaned)

    @classmethod
    def zero(cls, gens: GeneratorSet, degree: int, field: FieldSpec = RATIONALS) -> 'LieElement':
        return cls(gens, field, degree, {})

    @classmethod
    def generator(cls, gens: GeneratorSet, name: str, field: FieldSpec = RATIONALS) -> 'LieElement':
        i = gens.index(name)
        return cls(gens, field, gens.degrees[i], {(i,): field.one})

    @classmethod
    def from_vector(cls, gens: GeneratorSet, degree: int, vector: Mapping[int, Any],
                    field: FieldSpec) -> 'LieElement':
        """From coordinates indexed by positions in lyndon_words(gens, degree)"""
        words = lyndon_words(gens, degree)
        return cls(gens, field, degree, {words[k]: v for k, v in vector.items()})

    def to_vector(self) -> Dict[int, Any]:
        index = word_index(self.generators, self.degree)
        return {index[w]: c for w, c in self.coords.items()}

    def is_zero(self) -> bool:
        return not self.coords

    def _check(self, other: 'LieElement') -> None:
        if self.generators != other.generators:
            raise UsageError("elements belong to different free Lie algebras")
        if self.field != other.field:
            raise FieldMismatchError(f"cannot combine {self.field} and {other.field} elements")

    def _combine(self, other: 'LieElement', sign: int) -> 'LieElement':
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other if sign > 0 else -other
        if self.degree != other.degree:
            raise DomainError(f"cannot add elements of degrees {self.degree} and {other.degree}")
        coords = dict(self.coords)
        axpy(coords, self.field(sign), other.coords)
        return LieElement(self.generators, self.field, self.degree, coords)

    def __add__(self, other: 'LieElement') -> 'LieElement':
        return self._combine(other, 1)

    def __sub__(self, other: 'LieElement') -> 'LieElement':
        return self._combine(other, -1)

    def __neg__(self) -> 'LieElement':
        return LieElement(self.generators, self.field, self.degree,
                          {w: -c for w, c in self.coords.items()})

    def scale(self, coef: Any) -> 'LieElement':
        c = self.field(coef)
        return LieElement(self.generators, self.field, self.degree,
                          {w: c * v for w, v in self.coords.items()})

    def __rmul__(self, coef: Any) -> 'LieElement':
        return self.scale(coef)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        if self.generators != other.generators or self.field != other.field:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and dict(self.coords) == dict(other.coords)

    def __hash__(self):
        return hash((self.generators, self.degree, frozenset(self.coords)))

    def letters(self) -> set:
        return {i for w in self.coords for i in w}

    def expand_to_tensor(self) -> Dict[Word, Any]:
        return expand_to_tensor(self)

    def render(self) -> str:
        if self.is_zero():
            return '0'
        parts = []
        for word in sorted(self.coords):
            value = self.field.to_python(self.coords[word])
            if self.field.kind == 'prime' and value > self.field.p // 2:
                value -= self.field.p
            text = bracketing_text(word, self.generators)
            sign = '-' if value < 0 else '+'
            magnitude = abs(Fraction(value))
            body = text if magnitude == 1 else f"{magnitude}*{text}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ('-' if first_sign == '-' else '') + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"LieElement(degree={self.degree}, {self.render()})"


def bracket(u: LieElement, v: LieElement) -> LieElement:
    u._check(v)
    degree = u.degree + v.degree
    out: Dict[Word, Any] = {}
    for a, ca in u.coords.items():
        for b, cb in v.coords.items():
            if a != b:
                axpy(out, ca * cb, _basis_bracket_in(u.field, a, b))
    return LieElement(u.generators, u.field, degree, out)


def expand_to_tensor(u: LieElement) -> Dict[Word, Any]:
    out: Dict[Word, Any] = {}
    for word, coef in u.coords.items():
        axpy(out, coef, {w: u.field(c) for w, c in _word_expansion(word).items()})
    return out


def from_tensor(gens: GeneratorSet, field: FieldSpec, degree: int,
                poly: Mapping[Word, Any]) -> LieElement:
    return LieElement(gens, field, degree, tensor_to_lyndon(poly, field.zero))


def basis_element(gens: GeneratorSet, word: Word, field: FieldSpec = RATIONALS) -> LieElement:
    return LieElement(gens, field, gens.weight(word), {tuple(word): field.one})


def substitute(u: LieElement, images: Mapping[int, LieElement], target: GeneratorSet) -> LieElement:
    """
    Image of u under the homomorphism of free Lie algebras sending letter i to
    images[i]. Images must be homogeneous of the letter's degree (or zero).
    """
    for i, image in images.items():
        if image.generators != target:
            raise UsageError("substitution images live in another free Lie algebra")
        if not image.is_zero() and image.degree != u.generators.degrees[i]:
            raise DomainError(
                f"image of {u.generators.names[i]} has degree {image.degree}, expected {u.generators.degrees[i]}"
            )
    memo: Dict[Word, LieElement] = {}

    def image_of(word: Word) -> LieElement:
        if word in memo:
            return memo[word]
        if len(word) == 1:
            result = images[word[0]]
        else:
            left, right = standard_factorization(word)
            result = bracket(image_of(left), image_of(right))
        memo[word] = result
        return result

    out: Dict[Word, Any] = {}
    for word, coef in u.coords.items():
        axpy(out, coef, image_of(word).coords)
    return LieElement(target, u.field, u.degree, out)


def embed(u: LieElement, target: GeneratorSet, rename: Optional[Mapping[str, str]] = None) -> LieElement:
    """Move u into a larger free Lie algebra whose names contain u's (possibly renamed)"""
    rename = rename or {}
    images = {i: LieElement.generator(target, rename.get(name, name), u.field)
              for i, name in enumerate(u.generators.names)}
    return substitute(u, images, target)


def _ad_columns(gens: GeneratorSet, field: FieldSpec, letter: int, degree: int,
                target_index: Mapping[Word, int]) -> List[Dict[int, Any]]:
    columns = []
    for word in lyndon_words(gens, degree):
        image = _basis_bracket_in(field, (letter,), word)
        columns.append({target_index[w]: c for w, c in image.items()})
    return columns


def ad_matrix(gens: GeneratorSet, field: FieldSpec, letter: int, degree: int) -> ExactMatrix:
    """Matrix of ad_letter: F_degree -> F_(degree + deg letter) in Lyndon bases"""
    target_index = word_index(gens, degree + gens.degrees[letter])
    return ExactMatrix.from_column_vectors(_ad_columns(gens, field, letter, degree, target_index),
                                           len(target_index), field)


def _split_bracket(left: Word, right: LieElement) -> Dict[int, LieElement]:
    # [P_left, right] written as sum over letters x of [x, a_x]
    if len(left) == 1:
        return {left[0]: right}
    first, second = standard_factorization(left)
    p_first = basis_element(right.generators, first, right.field)
    p_second = basis_element(right.generators, second, right.field)
    out = _split_bracket(first, bracket(p_second, right))
    for letter, part in _split_bracket(second, bracket(p_first, right)).items():
        out[letter] = out[letter] - part if letter in out else -part
    return out


def split_left(u: LieElement, prefer_single: bool = True, solve_limit: int = 2000,
               max_letters: int = 2) -> Dict[int, LieElement]:
    """
    Write u = sum_i [x_i, a_i] over generators x_i, dropping zero a_i.

    When prefer_single is set, look for a split over as few letters as
    possible, trying single letters and then sets of up to max_letters in
    letter order. The linear systems live on the letters occurring in u and
    a letter is skipped when its free component is larger than solve_limit.
    Otherwise, or when no such split exists, the split is read off the
    standard factorizations of u's Lyndon words.
    """
    if u.is_zero():
        return {}
    gens = u.generators
    if prefer_single:
        solved = _fewest_letter_split(u, solve_limit, max_letters)
        if solved is not None:
            return solved
    out: Dict[int, LieElement] = {}
    for word, coef in u.coords.items():
        if len(word) < 2:
            raise DomainError(f"generator {gens.names[word[0]]} cannot be written as a bracket")
        first, second = standard_factorization(word)
        for letter, part in _split_bracket(first, basis_element(gens, second, u.field)).items():
            scaled = part.scale(coef)
            out[letter] = out[letter] + scaled if letter in out else scaled
    return {letter: part for letter, part in sorted(out.items()) if not part.is_zero()}


def _fewest_letter_split(u: LieElement, solve_limit: int,
                         max_letters: int) -> Optional[Dict[int, LieElement]]:
    gens = u.generators
    used = sorted(u.letters())
    sub = GeneratorSet(tuple(gens.names[i] for i in used), tuple(gens.degrees[i] for i in used))
    local = substitute_letters(u, sub, {i: k for k, i in enumerate(used)})
    target_index = word_index(sub, u.degree)
    rhs = {target_index[w]: c for w, c in local.coords.items()}
    rests = {}
    for k in range(len(used)):
        rest = u.degree - sub.degrees[k]
        if rest >= 1 and free_dimension(sub, rest) <= solve_limit:
            rests[k] = rest
    back = {k: i for k, i in enumerate(used)}
    for size in range(1, min(max_letters, len(rests)) + 1):
        for chosen in combinations(sorted(rests), size):
            columns: List[Dict[int, Any]] = []
            offsets = []
            for k in chosen:
                offsets.append((k, len(columns)))
                columns.extend(_ad_columns(sub, u.field, k, rests[k], target_index))
            x = solve(ExactMatrix.from_column_vectors(columns, len(target_index), u.field), rhs)
            if x is None:
                continue
            out: Dict[int, LieElement] = {}
            for k, start in offsets:
                width = free_dimension(sub, rests[k])
                part = {c - start: v for c, v in x.items() if start <= c < start + width}
                if part:
                    a_local = LieElement.from_vector(sub, rests[k], part, u.field)
                    out[used[k]] = substitute_letters(a_local, gens, back)
            logger.debug("split of a degree-%d element over %d letters", u.degree, len(out))
            return out
    return None


def substitute_letters(u: LieElement, target: GeneratorSet, letter_map: Mapping[int, int]) -> LieElement:
    """Rename letters by an injective index map into target"""
    images = {i: LieElement(target, u.field, target.degrees[j], {(j,): u.field.one})
              for i, j in letter_map.items()}
    return substitute(u, images, target)


def span_in_free(elements: Sequence[LieElement], gens: GeneratorSet, field: FieldSpec,
                 degree: int) -> EchelonSpace:
    vectors = [e.to_vector() for e in elements if not e.is_zero()]
    return EchelonSpace.span(vectors, free_dimension(gens, degree), field)
