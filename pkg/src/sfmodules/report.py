"""Analysis report assembly and its JSON/text renderings.

Floats that come out of the eigensolver are rounded to 12 significant digits
and eigenvalues below the zero threshold are written as ``0.0``, so reports
are byte-identical across runs and BLAS builds.
"""

from __future__ import annotations

import json

import numpy as np

from .estimator import ModuleDecomposition
from .model import SystemDesign, VertexOrder
from .modularity import ModuleStats, SplitResult, module_density
from .projectors import render_dirac

METHOD_NAMES = ("oracle", "spectral", "projector")


def _num(x: float) -> float:
    return float(f"{x:.12g}")


def _spectrum(values, tol) -> list[float]:
    return [0.0 if abs(v) < tol else _num(v) for v in values]


def _ids(order: VertexOrder, group) -> list[str]:
    return [order.id(i) for i in group]


def _module_dict(order: VertexOrder, ms: ModuleStats) -> dict:
    return {
        "vertices": _ids(order, ms.vertices),
        "structors": ms.structors,
        "functionals": ms.functionals,
        "edges": ms.edges,
        "density": None if ms.density is None else _num(ms.density),
        "bridges": [list(b) for b in ms.bridges],
        "reducible": ms.reducible,
    }


def build_report(est: ModuleDecomposition, include_matrices: bool = False,
                 verbose_projectors: bool = False) -> dict:
    """Collect a fitted estimator's results into a JSON-ready dict."""
    design: SystemDesign = est.design_
    order = est.order_
    m = est.matrices_
    es, es_rho = est.eigensystem_, est.density_eigensystem_

    terms = [render_dirac(t, order, verbose=verbose_projectors) for t in est.terms_]
    report = {
        "design": {
            "name": design.name,
            "structors": design.n_structors,
            "functionals": design.n_functionals,
            "edges": design.n_edges,
            "vertex_order": list(order.ids),
            "names": {i: n for i, n in design.functionals + design.structors},
            "inheritance": [{"functional": f, "providers": sorted(p, key=order.index)}
                            for f, p in est.inheritance_],
            "sequence": list(design.sequence) if design.sequence is not None else None,
            "isolated": design.isolated(),
        },
        "spectrum": {
            "tolerance": _num(es.tol),
            "laplacian_eigenvalues": _spectrum(es.eigenvalues, es.tol),
            "density_eigenvalues": _spectrum(es_rho.eigenvalues, es_rho.tol),
            "zero_multiplicity": est.n_modules_,
        },
        "partitions": {name: est.partitions_[name].as_ids(order) for name in METHOD_NAMES},
        "agreement": {
            **{f"{a}={b}": eq for (a, b), eq in est.module_report_.agreement.items()},
            "all": bool(est.agreement_),
        },
        "modules": [_module_dict(order, ms) for ms in est.module_report_.modules],
        "projectors": {
            "degree_sum": m.degree_sum,
            "coefficient": _num(1.0 / m.degree_sum),
            "classes": [
                {"terms": [terms[k] for k in sorted(cls)],
                 "module": _ids(order, sorted({x for k in cls for x in est.terms_[k].kets}))}
                for cls in est.term_classes_
            ],
        },
    }
    if include_matrices:
        report["matrices"] = {
            "degree": m.degree.astype(int).tolist(),
            "adjacency": m.adjacency.astype(int).tolist(),
            "laplacian": m.laplacian.astype(int).tolist(),
            "density": [[_num(x) for x in row] for row in m.density],
        }
    report["warnings"] = list(est.warnings_)
    return report


def split_report(design: SystemDesign, result: SplitResult, threshold: float) -> dict:
    order = design.order
    density = module_density(design, result.vertices)
    warnings = []
    if result.degenerate:
        warnings.append("Fiedler eigenvalue is (near) degenerate; the split direction is not unique")
    if result.tie_break:
        warnings.append("Fiedler entries within 1e-10 of zero were assigned to side A")
    return {
        "module": _ids(order, result.vertices),
        "density": None if density is None else _num(density),
        "threshold": threshold,
        "recommended": density is not None and density < threshold and result.valid,
        "fiedler_value": None if result.fiedler_value is None else _num(result.fiedler_value),
        "fiedler_vector": {order.id(i): _num(v) for i, v in zip(result.vertices, result.values)},
        "side_a": _ids(order, result.side_a),
        "side_b": _ids(order, result.side_b),
        "cut": [list(c) for c in result.cut],
        "valid": result.valid,
        "warnings": warnings,
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _fmt_group(ids) -> str:
    return "{" + ", ".join(ids) + "}"


def to_text(report: dict) -> str:
    d = report["design"]
    lines = [
        f"design {d['name']}: {d['structors']} structors, {d['functionals']} functionals, {d['edges']} edges",
        f"vertex order: {' '.join(d['vertex_order'])}",
    ]
    if d["sequence"]:
        lines.append(f"sequence: {' -> '.join(d['sequence'])}")
    for inh in d["inheritance"]:
        lines.append(f"inheritance: {inh['functional']} provided by {_fmt_group(inh['providers'])}")
    sp = report["spectrum"]
    lines.append(f"laplacian eigenvalues: {' '.join(f'{v:.6g}' for v in sp['laplacian_eigenvalues'])}")
    lines.append(f"zero multiplicity: {sp['zero_multiplicity']} (tolerance {sp['tolerance']:.3g})")
    lines.append("")
    lines.append("modules:")
    for k, mod in enumerate(report["modules"], start=1):
        dens = "n/a" if mod["density"] is None else f"{mod['density']:.4g}"
        flag = "  [reducible]" if mod["reducible"] else ""
        lines.append(f"  #{k} {_fmt_group(mod['vertices'])}  density {dens}{flag}")
        for b in mod["bridges"]:
            lines.append(f"      bridge {b[0]}-{b[1]}")
    lines.append("")
    pj = report["projectors"]
    lines.append(f"projectors (coefficient 1/{pj['degree_sum']} omitted):")
    for k, cls in enumerate(pj["classes"], start=1):
        lines.append(f"  #{k} {' + '.join(cls['terms'])}  {_fmt_group(cls['module'])}")
    lines.append("")
    agree = report["agreement"]
    lines.append("methods agree: " + ("yes" if agree["all"] else "NO"))
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def split_to_text(rep: dict) -> str:
    dens = "n/a" if rep["density"] is None else f"{rep['density']:.4g}"
    lines = [
        f"module {_fmt_group(rep['module'])}  density {dens}  threshold {rep['threshold']:g}",
        f"fiedler value: {rep['fiedler_value']}",
        f"side A: {_fmt_group(rep['side_a'])}",
        f"side B: {_fmt_group(rep['side_b'])}",
        "cut: " + (", ".join(f"{s}-{f}" for s, f in rep["cut"]) or "none"),
        f"valid: {'yes' if rep['valid'] else 'no'}  recommended: {'yes' if rep['recommended'] else 'no'}",
    ]
    lines += [f"warning: {w}" for w in rep["warnings"]]
    return "\n".join(lines) + "\n"


def matrix_csv(matrix: np.ndarray, order: VertexOrder, integer: bool) -> str:
    """CSV with vertex ids as header row and first column."""
    rows = ["," + ",".join(order.ids)]
    for ident, row in zip(order.ids, matrix):
        cells = [str(int(x)) if integer else repr(float(x)) for x in row]
        rows.append(ident + "," + ",".join(cells))
    return "\n".join(rows) + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(design: SystemDesign, groups) -> str:
    """Bipartite DOT graph with one cluster per module.

    Structors are boxes, functionals ellipses; nodes follow vertex order.
    """
    order = design.order
    names = design.display_names()
    out = [f"graph {_dot_quote(design.name)} {{", "  rankdir=LR;"]
    for k, group in enumerate(groups):
        out.append(f"  subgraph cluster_{k} {{")
        out.append(f"    label={_dot_quote(f'Module {k + 1}')};")
        for i in group:
            ident = order.id(i)
            shape = "box" if order.is_structor(i) else "ellipse"
            out.append(f"    {_dot_quote(ident)} [shape={shape}, label={_dot_quote(f'{ident}: {names[ident]}')}];")
        out.append("  }")
    for s, f in design.provides:
        out.append(f"  {_dot_quote(s)} -- {_dot_quote(f)};")
    out.append("}")
    return "\n".join(out) + "\n"
