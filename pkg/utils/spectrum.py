"""
Poincaré polynomials and what can be read off them.

Eigenvalues are the λ_i with P(t) = prod(1 + λ_i t), i.e. the roots of
Q(λ) = sum_k (-1)^k b_k λ^(n-k). Q is split exactly into square-free parts
with sympy; rational roots come out exact and the remaining factors go to
an Aberth iteration in numpy. Root finding is the only floating-point
computation here; every inequality check stays exact.
"""

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, QQ, Symbol

from utils.arith import PolySeries, series_inv
from utils.config import EIGEN_MAX_ITER, EIGEN_TOL
from utils.errors import DomainError, EigenvalueError, UsageError

logger = logging.getLogger(__name__)

LAMBDA = Symbol('lambda')

# roots closer than this are one eigenvalue with summed multiplicity
MERGE_DISTANCE = 1e-7


@dataclass(frozen=True)
class PoincarePoly:
    coefficients: Tuple[int, ...]
    provenance: str = 'given'
    cutoff: Optional[int] = None

    def __post_init__(self):
        coeffs = [int(c) for c in self.coefficients]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs or coeffs[0] != 1:
            raise DomainError("a Poincaré polynomial has constant term 1")
        if self.provenance in ('betti', 'clique') and any(c < 0 for c in coeffs):
            raise DomainError("Betti numbers are nonnegative")
        object.__setattr__(self, 'coefficients', tuple(coeffs))

    @classmethod
    def from_betti(cls, table) -> 'PoincarePoly':
        """Diagonal of a Betti table, asserted complete up to its cutoff"""
        return cls(tuple(table.diagonal()), 'betti', table.cutoff)

    @classmethod
    def from_clique(cls, data) -> 'PoincarePoly':
        return cls(tuple(data.counts), 'clique')

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def b(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        return sum((c * x ** k for k, c in enumerate(self.coefficients)), Fraction(0))

    @property
    def euler_characteristic(self) -> int:
        return int(self.evaluate(-1))

    def lambda_poly(self) -> Poly:
        n = self.degree
        terms = {n - k: (-1) ** k * c for k, c in enumerate(self.coefficients)}
        return Poly.from_dict({(e,): c for e, c in terms.items() if c}, LAMBDA, domain=QQ)

    def __str__(self):
        return str(PolySeries.from_coefficients(self.coefficients))


@dataclass
class EigenvalueSet:
    values: List[Tuple[complex, int]]
    residual: float
    reconstruction_error: float = 0.0

    @property
    def flat(self) -> List[complex]:
        return [v for v, m in self.values for _ in range(m)]

    def conjugate_pairs(self) -> List[Tuple[complex, complex]]:
        upper = [v for v, _ in self.values if v.imag > 0]
        return [(v, v.conjugate()) for v in upper]

    def real_values(self) -> List[Tuple[float, int]]:
        return [(v.real, m) for v, m in self.values if v.imag == 0]


def _aberth(coeffs: np.ndarray, tol: float, max_iter: int) -> Tuple[np.ndarray, float]:
    """All roots of a monic polynomial with simple roots (coefficients highest first)"""
    n = len(coeffs) - 1
    derivative = np.polyder(coeffs)
    radius = 1 + np.max(np.abs(coeffs[1:]))
    z = radius * np.exp(2j * np.pi * (np.arange(n) + 0.25) / n)
    weights = np.abs(coeffs)
    best = np.inf
    for iteration in range(max_iter):
        p = np.polyval(coeffs, z)
        dp = np.polyval(derivative, z)
        dp[dp == 0] = tol
        ratio = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        correction = ratio / (1 - ratio * np.sum(1 / diff, axis=1))
        z = z - correction
        scale = np.polyval(weights, np.abs(z))
        residual = float(np.max(np.abs(np.polyval(coeffs, z)) / scale))
        best = min(best, residual)
        if np.max(np.abs(correction) / np.maximum(1, np.abs(z))) < tol or residual < tol:
            logger.debug("aberth converged after %d iterations, residual %.2e", iteration + 1, residual)
            return z, residual
    raise EigenvalueError(f"root iteration did not converge in {max_iter} steps", best)


def _merge(roots: List[Tuple[complex, int]]) -> List[Tuple[complex, int]]:
    merged: List[List] = []
    for value, mult in roots:
        for entry in merged:
            if abs(entry[0] - value) < MERGE_DISTANCE:
                entry[1] += mult
                break
        else:
            merged.append([value, mult])
    return [(complex(v), m) for v, m in merged]


def _order(values: List[Tuple[complex, int]]) -> List[Tuple[complex, int]]:
    # reals ascending, then conjugate pairs by real part with the upper root first
    return sorted(values, key=lambda vm: (vm[0].imag != 0, vm[0].real, abs(vm[0].imag), -vm[0].imag))


def eigenvalues(p: PoincarePoly, tol: float = EIGEN_TOL, max_iter: int = EIGEN_MAX_ITER) -> EigenvalueSet:
    if p.degree == 0:
        return EigenvalueSet([], 0.0)
    _, square_free = p.lambda_poly().sqf_list()
    roots: List[Tuple[complex, int]] = []
    residual = 0.0
    for part, multiplicity in square_free:
        _, factors = part.factor_list()
        for factor, _ in factors:
            if factor.degree() == 1:
                a, b = factor.all_coeffs()
                root = -Fraction(int(b.p), int(b.q)) / Fraction(int(a.p), int(a.q))
                roots.append((complex(float(root), 0.0), multiplicity))
                continue
            monic = factor.monic()
            coeffs = np.array([float(c) for c in monic.all_coeffs()], dtype=complex)
            found, res = _aberth(coeffs, tol, max_iter)
            residual = max(residual, res)
            for z in found:
                if abs(z.imag) <= 1e-9 * max(1.0, abs(z)):
                    z = complex(z.real, 0.0)
                roots.append((complex(z), multiplicity))
    values = _order(_merge(roots))
    result = EigenvalueSet(values, residual)
    result.reconstruction_error = reconstruction_error(p, result)
    logger.info("eigenvalues of %s: %s", p, [(complex(round(v.real, 6), round(v.imag, 6)), m) for v, m in values])
    return result


def reconstruction_error(p: PoincarePoly, e: EigenvalueSet) -> float:
    """Largest relative coefficient error of prod(1 + λ t) against P"""
    product = np.array([1.0 + 0j])
    for v in e.flat:
        product = np.convolve(product, np.array([1.0, v]))
    target = np.array(p.coefficients, dtype=complex)
    width = max(len(product), len(target))
    product = np.pad(product, (0, width - len(product)))
    target = np.pad(target, (0, width - len(target)))
    scale = max(1.0, float(np.max(np.abs(target))))
    return float(np.max(np.abs(product - target)) / scale)


# ---------------------------------------------------------------------------
# Exact diagnostics
# ---------------------------------------------------------------------------

@dataclass
class PositivityReport:
    real: List[Tuple[float, int]]
    violations: List[Tuple[float, int]]

    @property
    def ok(self) -> bool:
        return not self.violations


def positivity_report(e: EigenvalueSet) -> PositivityReport:
    """Real eigenvalues of type-FP algebras are positive; anything <= 0 is flagged"""
    real = e.real_values()
    violations = [(v, m) for v, m in real if v <= MERGE_DISTANCE]
    if violations:
        logger.warning("nonpositive real eigenvalues: %s", violations)
    return PositivityReport(real, violations)


def omega_b2(b1: int, b2: int, n: int) -> int:
    """(n - 1) b1^2 - 2 n b2"""
    if n < 1:
        raise UsageError("n must be at least 1")
    return (n - 1) * b1 * b1 - 2 * n * b2


@dataclass(frozen=True)
class InequalityVerdict:
    passed: bool
    lhs: Fraction
    rhs: Fraction

    @property
    def slack(self) -> Fraction:
        return self.rhs - self.lhs

    def __bool__(self):
        return self.passed


def newton_check(p: PoincarePoly, j: int, n: Optional[int] = None) -> InequalityVerdict:
    """b_(j-1) b_(j+1) <= j(n-j) / ((j+1)(n-j+1)) b_j^2 with n the degree of P unless given"""
    n = p.degree if n is None else n
    if n < 2 or not 1 <= j <= n - 1:
        raise UsageError(f"need 1 <= j <= n - 1, got j={j}, n={n}")
    lhs = Fraction(p.b(j - 1) * p.b(j + 1))
    rhs = Fraction(j * (n - j), (j + 1) * (n - j + 1)) * p.b(j) ** 2
    return InequalityVerdict(lhs <= rhs, lhs, rhs)


def newton_check_all(p: PoincarePoly) -> Dict[int, InequalityVerdict]:
    return {j: newton_check(p, j) for j in range(1, p.degree)}


@dataclass
class BogvadReport:
    inverse: PolySeries
    looks_polynomial: bool
    verdicts: Dict[int, str] = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v != 'not divisible' for v in self.verdicts.values())


def bogvad_divisibility(h_u: PolySeries, center_degrees: Iterable[int]) -> BogvadReport:
    """
    1/H_U as a series on the window; when it looks polynomial (vanishing top
    coefficient) test divisibility by 1 - t^n for each center degree n.
    """
    if h_u.truncation is None:
        raise UsageError("expected a truncated Hilbert series")
    n = h_u.truncation
    inverse = series_inv(h_u, n)
    looks_polynomial = inverse.coefficient(n) == 0
    polynomial = PolySeries.from_coefficients(inverse.coefficients())
    verdicts = {}
    for degree in sorted(set(center_degrees)):
        if not looks_polynomial:
            verdicts[degree] = 'inconclusive'
            continue
        _, remainder = polynomial.divmod(PolySeries.from_coefficients({0: 1, degree: -1}))
        verdicts[degree] = 'divisible' if remainder.is_zero() else 'not divisible'
    return BogvadReport(inverse, looks_polynomial, verdicts)


def trc_check(p: PoincarePoly, z: int) -> InequalityVerdict:
    """dim H(L) = P(1) >= 2^z"""
    total = p.evaluate(1)
    bound = Fraction(2 ** z)
    return InequalityVerdict(total >= bound, bound, total)


@dataclass
class CenterConstraintReport:
    flags: List[str]

    @property
    def ok(self) -> bool:
        return not self.flags


def center_constraints(center_degrees: Iterable[int], cd: Optional[int] = None, koszul: bool = False,
                       bk: bool = False, solvable: Optional[bool] = None,
                       abelian: Optional[bool] = None) -> CenterConstraintReport:
    """
    Under a Koszul assertion the center sits in odd degrees below cd/2 + 1 and
    a solvable algebra is abelian; under a BK assertion the center sits in degree 1.
    """
    flags = []
    for d in sorted(set(center_degrees)):
        if koszul and d % 2 == 0:
            flags.append(f"center in even degree {d}")
        if koszul and cd is not None and Fraction(d) >= Fraction(cd, 2) + 1:
            flags.append(f"center in degree {d} >= cd/2 + 1 = {Fraction(cd, 2) + 1}")
        if bk and d >= 2:
            flags.append(f"center in degree {d} >= 2")
    if koszul and solvable and abelian is False:
        flags.append("solvable but not abelian")
    return CenterConstraintReport(flags)


def free_rank_upper_bound(dim_l1: int, cd: int) -> int:
    """dim L_1 - cd + 1"""
    return dim_l1 - cd + 1
