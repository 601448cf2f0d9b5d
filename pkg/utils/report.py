"""
JSON reports: the run configuration, the versioned envelope and the
conversion of exact results into plain JSON values.

Rationals become "p/q" strings, complex numbers [re, im] pairs.
"""

import dataclasses
import re
from fractions import Fraction
from numbers import Integral
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

from utils.arith import FieldSpec, PolySeries
from utils.config import DEFAULT_FIELD, DEFAULT_MAX_DEGREE, DEFAULT_SEED
from utils.errors import UsageError

REPORT_VERSION = "1.0"

_STRATEGY = re.compile(r"coordinate|random:\d+|list:.+")


class RunConfig(BaseModel):
    command: str
    inputs: List[str] = Field(default_factory=list)
    catalog: Optional[str] = None
    max_degree: int = DEFAULT_MAX_DEGREE
    field: str = DEFAULT_FIELD
    json_output: bool = False
    seed: int = DEFAULT_SEED
    strategy: str = 'coordinate'
    assert_cd: Optional[int] = None
    assert_koszul: bool = False
    assert_bk: bool = False
    plot: Optional[str] = None
    options: Dict[str, Any] = Field(default_factory=dict)

    @field_validator('max_degree')
    @classmethod
    def _max_degree(cls, value: int) -> int:
        if value < 2:
            raise ValueError("max degree must be at least 2")
        return value

    @field_validator('field')
    @classmethod
    def _field(cls, value: str) -> str:
        try:
            return str(FieldSpec.parse(value))
        except UsageError as exc:
            raise ValueError(str(exc))

    @field_validator('strategy')
    @classmethod
    def _strategy(cls, value: str) -> str:
        if not _STRATEGY.fullmatch(value):
            raise ValueError("strategy must be coordinate, random:COUNT or list:FILE")
        return value

    @property
    def field_spec(self) -> FieldSpec:
        return FieldSpec.parse(self.field)

    def public(self) -> Dict[str, Any]:
        """Configuration as echoed into reports"""
        return self.model_dump(mode='json', exclude={'json_output', 'plot'})


class Envelope(BaseModel):
    version: str = REPORT_VERSION
    command: str
    config: Dict[str, Any]
    result: Any


def jsonable(value: Any) -> Any:
    """Recursively turn exact results into JSON-ready values"""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Integral):
        return int(value)
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, PolySeries):
        return jsonable(value.coefficients())
    if isinstance(value, BaseModel):
        return value.model_dump(mode='json')
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {_key(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v) for v in items]
    if hasattr(value, 'numerator') and hasattr(value, 'denominator'):
        return jsonable(Fraction(int(value.numerator), int(value.denominator)))
    if hasattr(value, 'val'):
        return int(value.val)
    return str(value)


def _key(key: Any) -> str:
    if isinstance(key, tuple):
        return ','.join(str(k) for k in key)
    return str(key)


def envelope(config: RunConfig, result: Any) -> Dict[str, Any]:
    return Envelope(command=config.command, config=config.public(), result=jsonable(result)).model_dump(mode='json')


# ---------------------------------------------------------------------------
# Result models
# ---------------------------------------------------------------------------

class VerdictModel(BaseModel):
    passed: bool
    cutoff: int
    bidegree: Optional[Tuple[int, int]] = None
    value: int = 0
    text: str


class BettiReport(BaseModel):
    cutoff: int
    nonzero: List[Tuple[int, int, int]]
    diagonal: List[int]
    quadratic: VerdictModel
    koszul: VerdictModel
    cd_lower_bound: int


class EigenvalueReport(BaseModel):
    polynomial: List[int]
    provenance: str
    values: List[Tuple[Tuple[float, float], int]]
    inverses: List[Tuple[float, float]]
    residual: float
    reconstruction_error: float
    positivity_violations: List[Tuple[float, int]]


def verdict_model(v) -> VerdictModel:
    return VerdictModel(passed=v.passed, cutoff=v.cutoff, bidegree=v.bidegree, value=int(v.value), text=str(v))


def betti_report(table) -> BettiReport:
    nonzero = [(i, j, b) for (i, j), b in table.nonzero().items() if i > 0]
    return BettiReport(cutoff=table.cutoff, nonzero=nonzero, diagonal=table.diagonal(),
                       quadratic=verdict_model(table.quadratic_verdict),
                       koszul=verdict_model(table.koszul_verdict),
                       cd_lower_bound=table.cd_lower_bound)


def eigenvalue_report(p, e, positivity) -> EigenvalueReport:
    inverses = [1 / v for v in e.flat if v != 0]
    return EigenvalueReport(
        polynomial=list(p.coefficients),
        provenance=p.provenance,
        values=[((v.real, v.imag), m) for v, m in e.values],
        inverses=[(z.real, z.imag) for z in inverses],
        residual=e.residual,
        reconstruction_error=e.reconstruction_error,
        positivity_violations=positivity.violations,
    )
