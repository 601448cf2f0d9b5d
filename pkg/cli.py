#!/usr/bin/env python3
"""
kla: command-line surface of the graded Lie algebra workbench.

    kla dims samples/g4.lie --max-degree 6
    kla betti samples/g4.lie --json
    kla bk-check samples/c4.graph --strategy list:samples/c4_witness.txt
    kla droms samples/c4.graph
    kla eigenvalues --poly 1,15,21,35,35,21,7,1

Presentation commands read a .lie file (or --catalog NAME), graph commands a
.graph file (or a catalog graph), polynomial commands take --poly or derive
the polynomial from an input. Exit codes: 0 computed and every verdict
passed, 1 computed with a failing verdict, 2 bad input or usage.
"""

import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import networkx as nx
import pandas as pd
from pydantic import ValidationError

from utils.catalog import GRAPHS, lookup_graph, lookup_presentation
from utils.cohomology import (CoordinateSubsets, ExplicitSubspaces, RandomSubspaces, betti_table, bk_check,
                              probe_free_rank, quadratic_filtration_search)
from utils.config import DEFAULT_FIELD, DEFAULT_MAX_DEGREE, DEFAULT_SEED, LOG_LEVEL
from utils.dual import (classify_one_relator, darboux_decompose, dual_algebra, froberg_check, quadratic_cover,
                        quadratic_data, skew_form, two_relator_bk_check)
from utils.errors import InvalidDerivationError, KlaError, ParseError, UsageError
from utils.free_lie import LieElement
from utils.hnn import (DerivationSpec, EmbeddingResult, euler_characteristic, hnn_compose, hnn_decompose,
                       quadratize, standardize)
from utils.presentations import (GraphSpec, Presentation, parse_graph, parse_presentation, parse_relation,
                                 render_presentation)
from utils.quotient import (center, center_degrees, derived_series, expand_tables, free_dims, generated_subalgebra,
                            hilbert_series_L, hilbert_series_U, is_abelian, observed_nilpotent, observed_solvable,
                            upper_central_series)
from utils.raag import (clique_polynomial, decompose, droms_witness, euler_characteristic_raag, is_chordal, lex_bfs,
                        raag_presentation)
from utils.report import RunConfig, betti_report, eigenvalue_report, envelope, verdict_model
from utils.spectrum import (PoincarePoly, bogvad_divisibility, center_constraints, eigenvalues, free_rank_upper_bound,
                            newton_check, newton_check_all, omega_b2, positivity_report, trc_check)
from utils.visualizations import create_betti_heatmap, create_dimension_growth_bar, create_eigenvalue_plane

logger = logging.getLogger('kla')


@dataclass
class CommandResult:
    result: Any
    text: str
    exit_code: int = 0
    figure: Any = None


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _looks_like_graph(text: str) -> bool:
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line:
            return line.split()[0] in ('graph', 'vertices')
    return False


def is_graph_input(config: RunConfig) -> bool:
    if config.catalog:
        return config.catalog in GRAPHS
    if not config.inputs:
        return False
    path = config.inputs[0]
    return path.endswith('.graph') or (Path(path).is_file() and _looks_like_graph(_read(path)))


def load_presentation(config: RunConfig) -> Presentation:
    if config.catalog:
        return lookup_presentation(config.catalog, config.field_spec)
    if not config.inputs:
        raise UsageError("expected a presentation file or --catalog NAME")
    path = config.inputs[0]
    try:
        p = parse_presentation(_read(path))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc.message}", exc.line, exc.column)
    if config.options.get('field_given') and p.field != config.field_spec:
        # re-read the same relations over the requested field
        text = re.sub(r'^field .*$', f'field {config.field}', render_presentation(p), flags=re.M)
        p = parse_presentation(text)
    return p


def load_graph(config: RunConfig) -> GraphSpec:
    if config.catalog:
        return lookup_graph(config.catalog)
    if not config.inputs:
        raise UsageError("expected a graph file or --catalog NAME")
    path = config.inputs[0]
    try:
        return parse_graph(_read(path))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc.message}", exc.line, exc.column)


def load_poincare(config: RunConfig) -> PoincarePoly:
    poly = config.options.get('poly')
    if poly:
        try:
            coefficients = tuple(int(c) for c in poly.split(','))
        except ValueError:
            raise UsageError(f"--poly expects comma-separated integers, got {poly!r}")
        return PoincarePoly(coefficients, 'given')
    if is_graph_input(config):
        return PoincarePoly.from_clique(clique_polynomial(load_graph(config)))
    p = load_presentation(config)
    table = betti_table(expand_tables(p, config.max_degree))
    logger.warning("Poincaré polynomial of %s read off the Betti diagonal, asserted complete up to degree %d",
                   p.name, config.max_degree)
    return PoincarePoly.from_betti(table)


def build_strategy(config: RunConfig, p: Presentation, t):
    spec = config.strategy
    if spec == 'coordinate':
        return CoordinateSubsets()
    if spec.startswith('random:'):
        return RandomSubspaces(count=int(spec.split(':', 1)[1]), seed=config.seed)
    spaces = []
    for number, raw in enumerate(_read(spec.split(':', 1)[1]).splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        vectors = []
        for part in line.split(';'):
            element = parse_relation(part, p.generators, p.field)
            if not element.is_zero() and element.degree != 1:
                raise ParseError(f"subspace vectors must have degree 1, got {element.degree}", number, 1)
            vectors.append(t.project(element))
        spaces.append(vectors)
    return ExplicitSubspaces(tuple(spaces))


def _render_vector(p: Presentation, vector: Dict[int, Any]) -> str:
    ones = p.degree_one_names()
    element = LieElement.zero(p.generators, 1, p.field)
    for i, c in vector.items():
        element = element + p.gen(ones[i]).scale(c)
    return element.render()


def _frame(rows: List[Dict[str, Any]], index: Optional[str] = None) -> str:
    frame = pd.DataFrame(rows)
    if index is not None and not frame.empty:
        frame = frame.set_index(index)
    return frame.to_string()


def _assertion_failures(config: RunConfig, table) -> List[str]:
    failures = []
    if config.assert_koszul and not table.koszul_verdict:
        failures.append(f"Koszul assertion refuted: {table.koszul_verdict}")
    if config.assert_bk and not table.quadratic_verdict:
        failures.append(f"BK assertion refuted, not quadratic: {table.quadratic_verdict}")
    if config.assert_cd is not None and table.cd_lower_bound > config.assert_cd:
        failures.append(f"cd assertion refuted: H^{table.cd_lower_bound} is nonzero")
    return failures


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------

def cmd_dims(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    n = config.max_degree
    t = expand_tables(p, n)
    free = free_dims(len(p.generators), n) if p.is_standard() else None
    rows = [{'degree': d, 'dim': t.dim(d)} for d in range(1, n + 1)]
    if free is not None:
        for row, f in zip(rows, free):
            row['free'] = f
    result = {
        "name": p.name,
        "dims": t.dim_list(),
        "basis": {d: [t.basis_label(d, i) for i in range(t.dim(d))] for d in range(1, n + 1)},
    }
    figure = create_dimension_growth_bar(t.dims, free, f"{p.name}: dim L_d") if config.plot else None
    return CommandResult(result, f"{p.name}\n{_frame(rows, 'degree')}", 0, figure)


def cmd_hilbert(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    t = expand_tables(p, config.max_degree)
    h_l = hilbert_series_L(t).integer_coefficients(config.max_degree)
    h_u = hilbert_series_U(t).integer_coefficients(config.max_degree)
    rows = [{'degree': d, 'L': a, 'U(L)': b} for d, (a, b) in enumerate(zip(h_l, h_u))]
    return CommandResult({"name": p.name, "L": h_l, "U": h_u}, f"{p.name}\n{_frame(rows, 'degree')}")


def cmd_subalgebra(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    n = config.max_degree
    exprs = config.options.get('generators') or []
    if not exprs:
        raise UsageError("subalgebra needs at least one --generators expression")
    t = expand_tables(p, n)
    elements = [parse_relation(e, p.generators, p.field) for e in exprs]
    view = generated_subalgebra(t, [(e.degree, t.project(e)) for e in elements if not e.is_zero()], n)
    table = betti_table(view, n)
    failures = _assertion_failures(config, table)
    result = {"generators": [e.render() for e in elements], "dims": view.dim_list(), "betti": betti_report(table),
              "failures": failures}
    text = f"subalgebra <{', '.join(exprs)}> of {p.name}\ndims {view.dim_list()}\n{table}"
    text += '\nquadratic: ' + str(table.quadratic_verdict)
    return CommandResult(result, '\n'.join([text] + failures), 1 if failures else 0)


def cmd_center(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    t = expand_tables(p, config.max_degree)
    z = center(t)
    degrees = z.degrees()
    basis = {d: [t.lift(d, v).render() for v in z.spaces[d].rows] for d in degrees}
    result = {"window": z.window, "dims": z.dims, "degrees": degrees, "basis": basis}
    lines = [f"center of {p.name} on degrees 1..{z.window}: dims {z.dims}"]
    lines += [f"  degree {d}: {', '.join(vs)}" for d, vs in basis.items()]
    code = 0
    if config.assert_koszul or config.assert_bk:
        report = center_constraints(degrees, config.assert_cd, config.assert_koszul, config.assert_bk,
                                    observed_solvable(t), is_abelian(t))
        result["constraint_flags"] = report.flags
        lines += [f"  violates: {flag}" for flag in report.flags]
        code = 0 if report.ok else 1
    return CommandResult(result, '\n'.join(lines), code)


def cmd_series(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    t = expand_tables(p, config.max_degree)
    derived = derived_series(t)
    central = upper_central_series(t)
    result = {
        "derived": derived.dims(),
        "derived_terminated": derived.terminated,
        "upper_central": central.dims(),
        "abelian": is_abelian(t),
        "observed_solvable": derived.terminated,
        "observed_nilpotent": observed_nilpotent(t),
    }
    lines = [f"{p.name}: derived series"]
    lines += [f"  L^({k}) {dims}" for k, dims in enumerate(derived.dims())]
    lines.append("upper central series")
    lines += [f"  Z_{k} {dims}" for k, dims in enumerate(central.dims())]
    lines.append(f"abelian {result['abelian']}, solvable {result['observed_solvable']}, "
                 f"nilpotent {result['observed_nilpotent']} (within the window)")
    code = 0
    if config.assert_koszul and result["observed_solvable"] and not result["abelian"]:
        lines.append("violates: solvable but not abelian under a Koszul assertion")
        code = 1
    return CommandResult(result, '\n'.join(lines), code)


# ---------------------------------------------------------------------------
# Cohomology
# ---------------------------------------------------------------------------

def cmd_betti(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    table = betti_table(expand_tables(p, config.max_degree))
    report = betti_report(table)
    failures = _assertion_failures(config, table)
    text = '\n'.join([f"{p.name}: Betti numbers b(i,j), j <= {table.cutoff}", str(table),
                      f"quadratic {table.quadratic_verdict}", f"koszul {table.koszul_verdict}"] + failures)
    figure = create_betti_heatmap(table.to_frame(), f"{p.name}: Betti numbers") if config.plot else None
    result = report.model_dump(mode='json')
    result["failures"] = failures
    return CommandResult(result, text, 1 if failures else 0, figure)


def _verdict_command(config: RunConfig, which: str) -> CommandResult:
    p = load_presentation(config)
    table = betti_table(expand_tables(p, config.max_degree))
    verdict = table.quadratic_verdict if which == 'quadratic' else table.koszul_verdict
    return CommandResult(verdict_model(verdict).model_dump(mode='json'), f"{p.name}: {which} {verdict}",
                         0 if verdict else 1)


def cmd_quadratic_check(config: RunConfig) -> CommandResult:
    return _verdict_command(config, 'quadratic')


def cmd_koszul_check(config: RunConfig) -> CommandResult:
    return _verdict_command(config, 'koszul')


def _algebra_for_subspaces(config: RunConfig) -> Presentation:
    if is_graph_input(config):
        return raag_presentation(load_graph(config), config.field_spec)
    return load_presentation(config)


def cmd_bk_check(config: RunConfig) -> CommandResult:
    p = _algebra_for_subspaces(config)
    t = expand_tables(p, config.max_degree)
    reports = bk_check(t, build_strategy(config, p, t), config.max_degree)
    rows, result = [], []
    for r in reports:
        rows.append({'subspace': r.label, 'dims': r.dims, 'verdict': str(r.verdict)})
        result.append({"label": r.label, "vectors": [_render_vector(p, v) for v in r.vectors], "dims": r.dims,
                       "verdict": verdict_model(r.verdict)})
    failed = [r for r in reports if not r.verdict]
    summary = f"{p.name}: {len(reports)} subalgebras checked, {len(failed)} not quadratic"
    if failed:
        i, j = failed[0].verdict.bidegree
        summary += f"; first witness {failed[0].label} with a minimal relation in degree {j}" if i == 2 else ''
    return CommandResult({"subalgebras": result, "passed": not failed},
                         f"{summary}\n{_frame(rows)}", 1 if failed else 0)


def cmd_filtration(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    t = expand_tables(p, config.max_degree)
    report = quadratic_filtration_search(t, config.max_degree)
    chain = [{"label": r.label, "dims": r.dims, "verdict": verdict_model(r.verdict)} for r in report.chain]
    lines = [f"{p.name}: quadratic filtration {'found' if report.success else 'not found'}"]
    lines += [f"  {c['label']} {c['dims']}" for c in chain]
    if not report.success:
        lines.append(f"  stuck at level {report.failed_level}")
    return CommandResult({"success": report.success, "failed_level": report.failed_level, "chain": chain},
                         '\n'.join(lines), 0 if report.success else 1)


def cmd_free_rank(config: RunConfig) -> CommandResult:
    p = _algebra_for_subspaces(config)
    t = expand_tables(p, config.max_degree)
    strategy = None if config.strategy == 'coordinate' else build_strategy(config, p, t)
    probe = probe_free_rank(t, strategy, config.max_degree)
    result = {"rank": probe.rank, "label": probe.label, "checked": probe.checked,
              "witness": [_render_vector(p, v) for v in probe.witness]}
    lines = [f"{p.name}: free subalgebra of rank {probe.rank} found ({probe.label or 'none'}), "
             f"{probe.checked} candidates checked"]
    code = 0
    if config.assert_cd is not None:
        bound = free_rank_upper_bound(t.dim(1), config.assert_cd)
        result["upper_bound"] = bound
        lines.append(f"upper bound dim L_1 - cd + 1 = {bound}")
        if probe.rank > bound:
            lines.append("violates the upper bound: the cd assertion is wrong")
            code = 1
    return CommandResult(result, '\n'.join(lines), code)


# ---------------------------------------------------------------------------
# Quadratic duals
# ---------------------------------------------------------------------------

def cmd_dual(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    dual = dual_algebra(p)
    basis = {i: [dual.basis_label(i, k) for k in range(dual.dim(i))] for i in range(len(dual.dims))}
    products = {f"{dual.basis_label(1, a)}*{dual.basis_label(1, b)}":
                ' + '.join(f"{dual.field.render(c)}*{dual.basis_label(2, k)}" for k, c in v.items())
                for (a, b), v in dual.multiplication_table(1, 1).items() if a < b}
    lines = [f"{p.name}^!: dims {dual.dims}"]
    lines += [f"  degree {i}: {', '.join(b) or '-'}" for i, b in basis.items() if b]
    return CommandResult({"dims": dual.dims, "basis": basis, "products": products}, '\n'.join(lines))


def cmd_froberg(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    t = expand_tables(p, config.max_degree)
    check = froberg_check(t, dual_algebra(p), config.max_degree)
    result = {"ok": check.ok, "cutoff": check.cutoff, "degree": check.degree, "value": check.value,
              "text": str(check)}
    return CommandResult(result, f"{p.name}: H_U(t) H_L!(-t) = 1: {check}", 0 if check else 1)


def cmd_cover(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    q = quadratic_cover(p, expand_tables(p, 2))
    text = render_presentation(q)
    return CommandResult({"presentation": text}, text.rstrip())


def cmd_classify_1rel(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    c = classify_one_relator(p)
    return CommandResult({"genus": c.genus, "free_rank": c.free_rank, "text": str(c)},
                         f"{p.name}: {c} (d={c.genus}, f={c.free_rank})")


def cmd_check_2rel(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    v = two_relator_bk_check(p)
    return CommandResult({"passed": v.passed, "dual_dims": list(v.dual_dims)},
                         f"{p.name}: dual dims {list(v.dual_dims)}, {v}", 0 if v else 1)


def cmd_darboux(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    data = quadratic_data(p)
    result, lines = [], []
    for k, row in enumerate(data.relations.rows):
        radical, pairs = darboux_decompose(skew_form(data, row), data.field)
        entry = {"relation": _render_vector_pairs(data, row),
                 "pairs": [[_render_vector(p, e), _render_vector(p, f)] for e, f in pairs],
                 "radical": [_render_vector(p, v) for v in radical]}
        result.append(entry)
        lines.append(f"relation {entry['relation']}: rank {2 * len(pairs)}, radical dimension {len(radical)}")
        lines += [f"  e = {e}, f = {f}" for e, f in entry["pairs"]]
        lines += [f"  radical {v}" for v in entry["radical"]]
    return CommandResult({"forms": result}, '\n'.join(lines))


def _render_vector_pairs(data, row) -> str:
    terms = [f"{data.field.render(c)}*{data.pair_label(k)}" for k, c in sorted(row.items())]
    return ' + '.join(terms)


# ---------------------------------------------------------------------------
# HNN extensions and embeddings
# ---------------------------------------------------------------------------

def cmd_hnn_compose(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    mapping = {}
    for item in config.options.get('derivation') or []:
        source, sep, target = item.partition('=')
        if not sep:
            raise UsageError(f"--derivation expects SOURCE=TARGET, got {item!r}")
        mapping[source.strip()] = target.strip()
    spec = DerivationSpec.parse(p, mapping, int(config.options.get('derivation_degree') or 1))
    letter = config.options.get('stable_letter') or 't'
    try:
        q = hnn_compose(p, spec, letter, validate=True, max_degree=config.max_degree)
    except InvalidDerivationError as exc:
        return CommandResult({"ok": False, "witness": exc.witness}, f"not a derivation: {exc.witness}", 1)
    text = render_presentation(q)
    return CommandResult({"ok": True, "presentation": text}, text.rstrip())


def cmd_hnn_decompose(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    x = config.options.get('x') or p.generators.names[-1]
    dec = hnn_decompose(p, x, config.options.get('complement') or None, config.options.get('stable_letter'))
    n = config.max_degree
    original = expand_tables(p, n).dim_list()
    rebuilt = expand_tables(dec.reconstruction, n).dim_list()
    result = {
        "stable_letter": dec.stable_letter,
        "m": render_presentation(dec.m),
        "a_basis": [a.render() for a in dec.a_basis],
        "derivation": dec.derivation.render(),
        "reconstruction": render_presentation(dec.reconstruction),
        "dims": original,
        "hilbert_preserved": original == rebuilt,
    }
    lines = [f"{p.name} = HNN(M, {dec.stable_letter}) with A_1 = span{{{', '.join(result['a_basis'])}}}",
             render_presentation(dec.m).rstrip(),
             f"derivation {result['derivation']}",
             f"Hilbert series preserved to degree {n}: {result['hilbert_preserved']}"]
    return CommandResult(result, '\n'.join(lines), 0 if result["hilbert_preserved"] else 1)


def _embedding_result(kind: str, r: EmbeddingResult) -> CommandResult:
    cert = r.certificate
    text = render_presentation(r.presentation)
    result = {
        "presentation": text,
        "images": {k: v.render() for k, v in r.images.items()},
        "rounds": r.rounds,
        "quadratic": r.presentation.is_quadratic(),
        "standard": r.presentation.is_standard(),
        "certificate": {"cutoff": cert.cutoff, "source_dims": cert.source_dims, "image_dims": cert.image_dims,
                        "ok": cert.ok},
    }
    lines = [text.rstrip()]
    lines += [f"{k} -> {v}" for k, v in result["images"].items()]
    lines.append(f"{kind} certificate to degree {cert.cutoff}: source {cert.source_dims}, image {cert.image_dims}: "
                 f"{'OK' if cert.ok else 'MISMATCH'}")
    return CommandResult(result, '\n'.join(lines), 0 if cert.ok else 1)


def cmd_standardize(config: RunConfig) -> CommandResult:
    return _embedding_result('embedding', standardize(load_presentation(config), config.max_degree))


def cmd_quadratize(config: RunConfig) -> CommandResult:
    return _embedding_result('embedding', quadratize(load_presentation(config), config.max_degree))


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------

def cmd_raag(config: RunConfig) -> CommandResult:
    g = load_graph(config)
    p = raag_presentation(g, config.field_spec)
    text = render_presentation(p)
    return CommandResult({"presentation": text, "clique_polynomial": clique_polynomial(g).counts}, text.rstrip())


def cmd_clique_poly(config: RunConfig) -> CommandResult:
    data = clique_polynomial(load_graph(config))
    return CommandResult({"counts": data.counts, "clique_number": data.clique_number},
                         f"{data} (clique number {data.clique_number})")


def cmd_droms(config: RunConfig) -> CommandResult:
    g = load_graph(config)
    witness = droms_witness(g)
    if witness is None:
        return CommandResult({"droms": True, "witness": None}, f"{g.name}: Droms")
    kind, quad = witness
    return CommandResult({"droms": False, "witness": {"kind": kind, "vertices": list(quad)}},
                         f"not Droms: induced {kind} {{{','.join(quad)}}}", 1)


def cmd_chordal(config: RunConfig) -> CommandResult:
    g = load_graph(config)
    order = lex_bfs(g)
    if is_chordal(g):
        return CommandResult({"chordal": True, "lex_bfs": order, "witness": None},
                             f"{g.name}: chordal, perfect elimination order {list(reversed(order))}")
    cycle = next((c for c in nx.chordless_cycles(g.to_networkx()) if len(c) >= 4), None)
    return CommandResult({"chordal": False, "lex_bfs": order, "witness": cycle},
                         f"not chordal: chordless cycle {cycle}", 1)


def cmd_decompose(config: RunConfig) -> CommandResult:
    node = decompose(load_graph(config))
    obstruction = node.first_obstruction()
    result = {"tree": node.to_dict(), "obstruction": obstruction.to_dict() if obstruction else None}
    return CommandResult(result, str(node), 1 if obstruction else 0)


def cmd_euler(config: RunConfig) -> CommandResult:
    if is_graph_input(config):
        g = load_graph(config)
        chi = euler_characteristic_raag(g)
        return CommandResult({"euler": chi, "source": "clique polynomial"}, f"chi(L_{g.name}) = {chi}")
    p = load_presentation(config)
    table = betti_table(expand_tables(p, config.max_degree))
    chi = euler_characteristic(table)
    return CommandResult({"euler": chi, "source": f"Betti diagonal, asserted complete to {table.cutoff}"},
                         f"chi({p.name}) = {chi} (Betti diagonal to degree {table.cutoff})")


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------

def cmd_eigenvalues(config: RunConfig) -> CommandResult:
    poly = load_poincare(config)
    e = eigenvalues(poly)
    positivity = positivity_report(e)
    report = eigenvalue_report(poly, e, positivity)
    lines = [f"P(t) = {poly}"]
    for v, m in e.values:
        inverse = 1 / v if v else float('nan')
        lines.append(f"  {v.real:+.8f} {v.imag:+.8f}i  x{m}   1/λ = {complex(inverse):.6f}")
    lines.append(f"residual {e.residual:.2e}, reconstruction error {e.reconstruction_error:.2e}")
    if positivity.violations:
        lines.append(f"nonpositive real eigenvalues: {positivity.violations}")
    figure = create_eigenvalue_plane([v for v, _ in e.values], [m for _, m in e.values]) if config.plot else None
    return CommandResult(report.model_dump(mode='json'), '\n'.join(lines), 1 if positivity.violations else 0,
                         figure)


def cmd_omega(config: RunConfig) -> CommandResult:
    opts = config.options
    if opts.get('b1') is not None and opts.get('b2') is not None:
        b1, b2 = int(opts['b1']), int(opts['b2'])
        n = int(opts.get('n') or 2)
    else:
        poly = load_poincare(config)
        b1, b2 = poly.b(1), poly.b(2)
        n = int(opts.get('n') or poly.degree)
    value = omega_b2(b1, b2, n)
    return CommandResult({"b1": b1, "b2": b2, "n": n, "omega": value},
                         f"omega = ({n}-1)*{b1}^2 - 2*{n}*{b2} = {value}", 0 if value >= 0 else 1)


def cmd_newton(config: RunConfig) -> CommandResult:
    poly = load_poincare(config)
    j = config.options.get('j')
    checks = {int(j): newton_check(poly, int(j))} if j is not None else newton_check_all(poly)
    result = {k: {"passed": v.passed, "lhs": v.lhs, "rhs": v.rhs, "slack": v.slack} for k, v in checks.items()}
    rows = [{'j': k, 'b(j-1) b(j+1)': str(v.lhs), 'bound': str(v.rhs), 'slack': str(v.slack),
             'verdict': 'PASS' if v else 'FAIL'} for k, v in checks.items()]
    ok = all(checks.values())
    return CommandResult(result, f"P(t) = {poly}\n{_frame(rows, 'j')}", 0 if ok else 1)


def cmd_bogvad(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    t = expand_tables(p, config.max_degree)
    report = bogvad_divisibility(hilbert_series_U(t), center_degrees(t))
    result = {"inverse": report.inverse.coefficients(), "looks_polynomial": report.looks_polynomial,
              "verdicts": report.verdicts}
    lines = [f"1/H_U = {report.inverse} ({'polynomial' if report.looks_polynomial else 'not visibly polynomial'})"]
    lines += [f"  1 - t^{d}: {v}" for d, v in report.verdicts.items()]
    return CommandResult(result, '\n'.join(lines), 0 if report.ok else 1)


def cmd_trc(config: RunConfig) -> CommandResult:
    p = load_presentation(config)
    t = expand_tables(p, config.max_degree)
    z = sum(center(t).dims.values())
    poly = PoincarePoly.from_betti(betti_table(t))
    v = trc_check(poly, z)
    return CommandResult({"passed": v.passed, "dim_cohomology": v.rhs, "bound": v.lhs, "center_dim": z},
                         f"{p.name}: dim H = {v.rhs} >= 2^{z} = {v.lhs}: {'PASS' if v else 'FAIL'}",
                         0 if v else 1)


# ---------------------------------------------------------------------------
# Wiring
# ---------------------------------------------------------------------------

COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    'dims': cmd_dims,
    'hilbert': cmd_hilbert,
    'betti': cmd_betti,
    'quadratic-check': cmd_quadratic_check,
    'koszul-check': cmd_koszul_check,
    'bk-check': cmd_bk_check,
    'dual': cmd_dual,
    'froberg': cmd_froberg,
    'cover': cmd_cover,
    'hnn-compose': cmd_hnn_compose,
    'hnn-decompose': cmd_hnn_decompose,
    'standardize': cmd_standardize,
    'quadratize': cmd_quadratize,
    'subalgebra': cmd_subalgebra,
    'center': cmd_center,
    'series': cmd_series,
    'raag': cmd_raag,
    'clique-poly': cmd_clique_poly,
    'droms': cmd_droms,
    'chordal': cmd_chordal,
    'decompose': cmd_decompose,
    'euler': cmd_euler,
    'eigenvalues': cmd_eigenvalues,
    'omega': cmd_omega,
    'newton': cmd_newton,
    'bogvad': cmd_bogvad,
    'trc': cmd_trc,
    'classify-1rel': cmd_classify_1rel,
    'check-2rel': cmd_check_2rel,
    'darboux': cmd_darboux,
    'free-rank': cmd_free_rank,
    'filtration': cmd_filtration,
}

OPTION_KEYS = ('poly', 'j', 'b1', 'b2', 'n', 'derivation', 'derivation_degree', 'stable_letter', 'x',
               'complement', 'generators')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('inputs', nargs='*', help='presentation (.lie) or graph (.graph) file')
    common.add_argument('--catalog', help='use a named algebra or graph instead of a file')
    common.add_argument('--max-degree', '-N', type=int, default=DEFAULT_MAX_DEGREE, help='truncation degree')
    common.add_argument('--field', default=None, help="'rational' or an odd prime")
    common.add_argument('--json', action='store_true', help='print the JSON report')
    common.add_argument('--seed', type=int, default=DEFAULT_SEED)
    common.add_argument('--strategy', default='coordinate', help='coordinate | random:COUNT | list:FILE')
    common.add_argument('--assert-cd', type=int)
    common.add_argument('--assert-koszul', action='store_true')
    common.add_argument('--assert-bk', action='store_true')
    common.add_argument('--plot', metavar='FILE.html', help='write a plotly figure')
    common.add_argument('--log-level', default=LOG_LEVEL)
    common.add_argument('--poly', help='Poincaré polynomial coefficients b0,b1,...')
    common.add_argument('--j', type=int, help='index for the Newton inequality')
    common.add_argument('--b1', type=int)
    common.add_argument('--b2', type=int)
    common.add_argument('--n', type=int, help='cohomological dimension for omega')
    common.add_argument('--derivation', action='append', metavar='SOURCE=TARGET')
    common.add_argument('--derivation-degree', type=int, default=1)
    common.add_argument('--stable-letter')
    common.add_argument('--x', help='stable direction for hnn-decompose (default: last generator)')
    common.add_argument('--complement', action='append')
    common.add_argument('--generators', action='append', help='subalgebra generator (DSL expression)')

    parser = argparse.ArgumentParser(prog='kla', description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest='command', required=True)
    for name, handler in COMMANDS.items():
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    options = {key: getattr(args, key) for key in OPTION_KEYS if getattr(args, key, None) is not None}
    options['field_given'] = args.field is not None
    return RunConfig(
        command=args.command,
        inputs=args.inputs,
        catalog=args.catalog,
        max_degree=args.max_degree,
        field=args.field or DEFAULT_FIELD,
        json_output=args.json,
        seed=args.seed,
        strategy=args.strategy,
        assert_cd=args.assert_cd,
        assert_koszul=args.assert_koszul,
        assert_bk=args.assert_bk,
        plot=args.plot,
        options=options,
    )


def run(config: RunConfig) -> int:
    try:
        outcome = COMMANDS[config.command](config)
    except KlaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        logger.exception("%s failed", config.command)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if config.json_output:
        print(json.dumps(envelope(config, outcome.result), indent=2, ensure_ascii=False))
    else:
        print(outcome.text)
    if config.plot and outcome.figure is not None:
        outcome.figure.write_html(config.plot)
        logger.info("figure written to %s", config.plot)
    return outcome.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format='%(asctime)s %(name)s %(levelname)s %(message)s', stream=sys.stderr)
    try:
        config = config_from_args(args)
    except ValidationError as exc:
        for error in exc.errors():
            print(f"error: {error['loc'][0]}: {error['msg']}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == '__main__':
    sys.exit(main())
