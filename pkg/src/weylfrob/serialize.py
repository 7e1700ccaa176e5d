"""JSON and LaTeX serialization of constructed structures.

Rationals are serialized as exact 'p/q' strings, monomials as variable ->
integer-exponent maps, and polynomial terms in descending graded-lex order,
so an exported document re-imports and re-exports byte-identically.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List

from .exactalg import Chart, Poly
from .frobenius import FrobeniusStructure
from .orbitspace import CoordMap, generator_map, theta_map, zeta_chart


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def poly_to_obj(p: Poly) -> List[Dict]:
    out = []
    for exps, coeff in p.sorted_terms():
        out.append({"m": p.exponents_as_dict(exps), "c": frac_str(coeff)})
    return out


def obj_to_poly(chart: Chart, obj: List[Dict]) -> Poly:
    total = Poly.const(chart, 0)
    for term in obj:
        total = total + Poly.monomial(chart, term["m"], Fraction(term["c"]))
    return total


def chart_to_obj(chart: Chart) -> Dict:
    return {
        "name": chart.name,
        "vars": [{"name": v.name, "weight": frac_str(v.weight), "laurent": v.laurent}
                 for v in chart.vars],
        "log_coord": chart.log_coord,
        "exp_var": chart.exp_var,
    }


def map_to_obj(cmap: CoordMap) -> Dict:
    obj = {"source": cmap.source.name, "target": cmap.target.name}
    if cmap.forward is not None:
        obj["forward"] = {name: poly_to_obj(p) for name, p in sorted(cmap.forward.items())}
    if cmap.pullback is not None:
        obj["pullback"] = {name: poly_to_obj(p) for name, p in sorted(cmap.pullback.items())}
    return obj


def matrix_to_obj(mat) -> List[List[List[Dict]]]:
    return [[poly_to_obj(e) for e in row] for row in mat]


def structure_document(struct: FrobeniusStructure, report: List[Dict]) -> Dict:
    spec = struct.spec
    gen = generator_map(struct.cspec)
    th = theta_map(struct.cspec)
    doc = {
        "spec": {"family": spec.family, "rank": spec.rank, "vertex": spec.vertex},
        "underlying_c_spec": {"family": struct.cspec.family,
                              "rank": struct.cspec.rank,
                              "vertex": struct.cspec.vertex},
        "charts": {
            "zeta": chart_to_obj(zeta_chart(struct.cspec)),
            "theta": chart_to_obj(th.source),
            "y": chart_to_obj(struct.pencil.chart),
            "z": chart_to_obj(struct.flat.z_map.target),
            "w": chart_to_obj(struct.flat.w_map.target),
            "t": chart_to_obj(struct.flat.t_map.target),
        },
        "maps": {
            "generators_zeta_to_y": map_to_obj(gen),
            "theta_to_y": map_to_obj(th),
            "y_to_z": map_to_obj(struct.flat.z_map),
            "z_to_w": map_to_obj(struct.flat.w_map),
            "w_to_t": map_to_obj(struct.flat.t_map),
        },
        "eta_t": matrix_to_obj(struct.eta_t.mat),
        "g_t": matrix_to_obj(struct.g_t.mat),
        "potential": {
            "head": {
                "monomial": {f"t{struct.potential.vertex}": 2,
                             struct.potential.chart.log_coord: 1},
                "coefficient": "1/2",
            },
            "terms": poly_to_obj(struct.potential.poly),
        },
        "euler": {
            "dtilde": [frac_str(x) for x in struct.euler.dtilde],
            "last_component": frac_str(struct.euler.last_component),
        },
        "b_identification": None,
        "verification": report,
    }
    if struct.b_ident is not None:
        doc["b_identification"] = {
            "log_scale": frac_str(struct.b_ident.log_scale),
            "last_generator_squares_to": "y_l^2",
            "oracle_validated": struct.b_ident.validated,
        }
    return doc


def document_json(doc: Dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def load_document(text: str) -> Dict:
    return json.loads(text)


# ---------------------------------------------------------------------------
# LaTeX
# ---------------------------------------------------------------------------

def _latex_coeff(c: Fraction, lead: bool) -> str:
    sign = "-" if c < 0 else ("" if lead else "+")
    c = abs(c)
    if c == 1:
        return sign if sign else ""
    if c.denominator == 1:
        return f"{sign}{c.numerator}"
    return f"{sign}\\frac{{{c.numerator}}}{{{c.denominator}}}"


def poly_latex(p: Poly) -> str:
    if p.is_zero():
        return "0"
    chart = p.chart
    log_idx = chart.index[chart.exp_var] if chart.exp_var else None
    parts = []
    for pos, (exps, coeff) in enumerate(p.sorted_terms()):
        factors = []
        for i, (v, e) in enumerate(zip(chart.vars, exps)):
            if not e:
                continue
            if i == log_idx:
                inner = chart.log_coord
                name = f"{inner[0]}_{{{inner[1:]}}}"
                factors.append(f"e^{{{e} {name}}}" if e != 1 else f"e^{{{name}}}")
            else:
                base = f"{v.name[0]}_{{{v.name[1:]}}}"
                factors.append(base if e == 1 else f"{base}^{{{e}}}")
        body = " ".join(factors)
        sign = "-" if coeff < 0 else ("" if pos == 0 else "+")
        mag = abs(coeff)
        if mag.denominator == 1:
            num = "" if (mag == 1 and body) else str(mag.numerator)
        else:
            num = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}"
        parts.append(f"{sign}{num}{(' ' if num and body else '')}{body}".strip())
    return " ".join(parts)


def structure_latex(struct: FrobeniusStructure) -> str:
    spec = struct.spec
    k = struct.potential.vertex
    l = struct.cspec.rank
    head = f"\\frac{{1}}{{2}} t_{{{k}}}^{{2}} t_{{{l + 1}}}"
    tail = poly_latex(struct.potential.poly)
    joined = f"{head} {tail}" if tail.startswith("-") else f"{head} + {tail}"
    lines = [
        f"% Frobenius structure for {spec.family}_{spec.rank}, vertex k = {spec.vertex}",
        "\\begin{align*}",
        f"F &= {joined} \\\\",
    ]
    euler_terms = [f"{_latex_coeff(c, lead=(i == 0))}t_{{{i + 1}}}\\partial_{{{i + 1}}}"
                   for i, c in enumerate(struct.euler.dtilde)]
    last = _latex_coeff(struct.euler.last_component, lead=False)
    lines.append(f"E &= {' '.join(euler_terms)} {last}\\partial_{{{l + 1}}}")
    lines.append("\\end{align*}")
    return "\n".join(lines) + "\n"
