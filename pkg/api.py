"""
FastAPI wrapper for the graded Lie algebra workbench
Batch endpoints over the same library calls as the kla command line
"""

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field
from typing import List, Optional

from utils.arith import FieldSpec
from utils.cohomology import betti_table
from utils.config import DEFAULT_MAX_DEGREE
from utils.dual import dual_algebra
from utils.errors import KlaError
from utils.presentations import Presentation, parse_graph, parse_presentation, render_presentation
from utils.quotient import expand_tables, hilbert_series_U
from utils.raag import clique_polynomial, droms_witness, is_chordal, raag_presentation
from utils.report import betti_report, eigenvalue_report, jsonable
from utils.spectrum import PoincarePoly, eigenvalues, positivity_report

app = FastAPI(
    title="Graded Lie Algebra Workbench API",
    description="Truncated structure, cohomology and graph analytics for finitely presented graded Lie algebras",
    version="1.0.0"
)


class PresentationRequest(BaseModel):
    text: str = Field(..., description="presentation in the .lie format")
    max_degree: int = Field(DEFAULT_MAX_DEGREE, ge=2, le=12)
    field: Optional[str] = None


class GraphRequest(BaseModel):
    text: str = Field(..., description="graph in the .graph format")
    field: str = 'rational'


class PolynomialRequest(BaseModel):
    coefficients: List[int] = Field(..., min_length=1)


def _presentation(request: PresentationRequest) -> Presentation:
    p = parse_presentation(request.text)
    if request.field is not None and FieldSpec.parse(request.field) != p.field:
        raise HTTPException(status_code=400, detail=f"presentation is over {p.field}, not {request.field}")
    return p


@app.get("/")
def root():
    """API root endpoint"""
    return {
        "name": "Graded Lie Algebra Workbench API",
        "version": "1.0.0",
        "endpoints": {
            "dims": "/api/dims",
            "betti": "/api/betti",
            "dual": "/api/dual",
            "raag": "/api/raag",
            "eigenvalues": "/api/eigenvalues"
        }
    }


@app.post("/api/dims")
def get_dims(request: PresentationRequest):
    """Dimensions of L_d and of U(L)_d up to max_degree"""
    try:
        p = _presentation(request)
        t = expand_tables(p, request.max_degree)
        return {
            "name": p.name,
            "dims": t.dim_list(),
            "hilbert_U": hilbert_series_U(t).integer_coefficients(request.max_degree)
        }
    except KlaError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.post("/api/betti")
def get_betti(request: PresentationRequest):
    """Bigraded Betti numbers with quadratic and Koszul verdicts"""
    try:
        p = _presentation(request)
        table = betti_table(expand_tables(p, request.max_degree))
        return {"name": p.name, **betti_report(table).model_dump(mode='json')}
    except KlaError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.post("/api/dual")
def get_dual(request: PresentationRequest):
    """Quadratic dual of a quadratic presentation"""
    try:
        dual = dual_algebra(_presentation(request))
        return {
            "dims": dual.dims,
            "basis": {i: [dual.basis_label(i, k) for k in range(dual.dim(i))] for i in range(len(dual.dims))}
        }
    except KlaError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.post("/api/raag")
def get_raag(request: GraphRequest):
    """RAAG presentation, clique polynomial and graph recognition"""
    try:
        g = parse_graph(request.text)
        witness = droms_witness(g)
        return {
            "presentation": render_presentation(raag_presentation(g, FieldSpec.parse(request.field))),
            "clique_polynomial": clique_polynomial(g).counts,
            "droms": witness is None,
            "droms_witness": jsonable(witness),
            "chordal": is_chordal(g)
        }
    except KlaError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.post("/api/eigenvalues")
def get_eigenvalues(request: PolynomialRequest):
    """Eigenvalues of a Poincaré polynomial"""
    try:
        p = PoincarePoly(tuple(request.coefficients), 'given')
        e = eigenvalues(p)
        return eigenvalue_report(p, e, positivity_report(e)).model_dump(mode='json')
    except KlaError as exc:
        raise HTTPException(status_code=400, detail=str(exc))

# To run the API:
# uvicorn api:app --reload --port 8000
