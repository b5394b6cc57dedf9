"""Text and JSON round-trips: polynomials, charts, graphs, vectors, R-matrices.

Polynomial grammar (also the output of MultiPoly.__str__):

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := base ('^' exponent)?
    base    := rational | symbol | '(' expr ')'
    exponent:= integer | '(' integer '/' integer ')'

Series text lists ``coeff*param^(p/q)`` terms sorted by exponent and ends
with ``O(param^T)`` for a finite truncation.  Chart files are JSON with
fields ``dimension``, ``coords``, ``metric``, ``potential``, ``unit_index``;
the writer reproduces its input bit-exactly.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .frobenius import FrobeniusChart
from .graphs import DecoratedGraph, StrataVector
from .multipoly import MultiPoly

SCHEMA_VERSION = 1


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*([0-9]+|[A-Za-z_@][A-Za-z_0-9]*|\*\*|[-+*/^()])")


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError("cannot tokenize %r" % text[pos:])
            break
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError("expected %s, got %r" % (expected or "token", tok))
        self.pos += 1
        return tok

    def parse_expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -1
        value = self.parse_term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            term = self.parse_term()
            value = value + term if op == "+" else value - term
        return value

    def parse_term(self):
        value = self.parse_factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.parse_factor()
            if op == "*":
                value = value * rhs
            else:
                value = value * rhs.inverse()
        return value

    def parse_factor(self):
        base = self.parse_base()
        if self.peek() in ("^", "**"):
            self.take()
            exp = self.parse_exponent()
            if exp.denominator == 1:
                e = int(exp)
                base = base ** e if e >= 0 else base.inverse() ** (-e)
            else:
                from .multipoly import monomial_power
                base = monomial_power(base, exp)
        return base

    def parse_base(self):
        tok = self.peek()
        if tok == "(":
            self.take("(")
            value = self.parse_expr()
            self.take(")")
            return value
        if tok == "-":
            self.take()
            return -self.parse_base()
        tok = self.take()
        if tok.isdigit():
            return MultiPoly.const(int(tok))
        if re.match(r"[A-Za-z_@]", tok):
            return MultiPoly.var(tok)
        raise ParseError("unexpected token %r" % tok)

    def parse_exponent(self):
        if self.peek() == "(":
            self.take("(")
            num = int(self.take())
            self.take("/")
            den = int(self.take())
            self.take(")")
            return Fraction(num, den)
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        return Fraction(sign * int(self.take()))


def parse_poly(text) -> MultiPoly:
    parser = _Parser(_tokenize(str(text)))
    value = parser.parse_expr()
    if parser.peek() is not None:
        raise ParseError("trailing input %r" % parser.tokens[parser.pos:])
    return value


def poly_text(poly) -> str:
    return str(poly)


# ---------------------------------------------------------------------------
# charts


def chart_to_json(chart) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "dimension": chart.dim,
        "coords": list(chart.coords),
        "metric": [[str(x) for x in row] for row in chart.metric],
        "potential": poly_text(chart.potential),
        "unit_index": next(i for i, x in enumerate(chart.unit) if x != 0)
        if sum(1 for x in chart.unit if x) == 1 else None,
        "unit": [str(x) for x in chart.unit],
        "name": chart.name,
    }
    if getattr(chart, "expansion_point", None) is not None:
        out["expansion_point"] = chart.expansion_point
    return out


def chart_from_json(data) -> FrobeniusChart:
    dim = int(data["dimension"])
    coords = list(data.get("coords") or ["t%d" % i for i in range(dim)])
    if len(coords) != dim:
        raise ParseError("coords length != dimension")
    metric = [[Fraction(x) for x in row] for row in data["metric"]]
    potential = parse_poly(data["potential"])
    if data.get("unit") is not None:
        unit = [Fraction(x) for x in data["unit"]]
    else:
        unit = int(data["unit_index"])
    chart = FrobeniusChart(coords, metric, potential, unit,
                           name=data.get("name"))
    if data.get("expansion_point") is not None:
        chart.expansion_point = data["expansion_point"]
    return chart


def load_chart(path) -> FrobeniusChart:
    with open(path) as fh:
        return chart_from_json(json.load(fh))


def dump_chart(chart, path):
    with open(path, "w") as fh:
        json.dump(chart_to_json(chart), fh, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# graphs and strata vectors


def graph_to_json(dg) -> dict:
    graph = dg.graph
    return {
        "vertices": [{"genus": graph.genera[v],
                      "legs": list(graph.legs[v]),
                      "kappa": list(dg.kappa[v])}
                     for v in range(graph.num_vertices)],
        "edges": [[a, b, dg.edge_psi[i][0], dg.edge_psi[i][1]]
                  for i, (a, b) in enumerate(graph.edges)],
        "leg_psi": {str(l): e for l, e in dg.leg_psi},
    }


def graph_from_json(data) -> DecoratedGraph:
    genera = [v["genus"] for v in data["vertices"]]
    legs = [v["legs"] for v in data["vertices"]]
    kappa = [tuple(v.get("kappa", ())) for v in data["vertices"]]
    edges = [(e[0], e[1]) for e in data["edges"]]
    edge_psi = [(e[2], e[3]) for e in data["edges"]]
    leg_psi = {int(l): e for l, e in data.get("leg_psi", {}).items()}
    from .graphs import _rebuild
    return _rebuild(genera, legs, edges, leg_psi, edge_psi,
                    [list(k) for k in kappa])


def vector_to_json(vector, coeff_text=str) -> dict:
    terms = []
    for dg, c in vector.terms.items():
        terms.append({"graph": graph_to_json(dg), "coefficient": coeff_text(c)})
    terms.sort(key=lambda t: json.dumps(t["graph"], sort_keys=True))
    return {"g": vector.g, "n": vector.n, "terms": terms}


def rational_vector_from_json(data) -> StrataVector:
    vec = StrataVector(int(data["g"]), int(data["n"]))
    for term in data["terms"]:
        dg = graph_from_json(term["graph"])
        vec = vec + StrataVector.single(dg, Fraction(term["coefficient"]))
    return vec


def rmatrix_to_json(R) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "z_orders": [[[str(e) for e in row] for row in R[k].entries]
                     for k in range(R.K + 1)],
        "constants": [[i, k, str(v)] for (i, k), v in sorted(R.constants.items())],
    }


def relations_to_json(rs, config_echo=None) -> dict:
    cells = []
    for cell in rs.cells:
        g, n, d = cell
        cells.append({
            "g": g, "n": n, "codim": d,
            "rank": rs.dim(cell),
            "relations": [vector_to_json(v) for v in rs.vectors(cell)],
            "provenance": [list(map(str, p)) if p else None
                           for p in rs.provenance[cell]],
        })
    out = {"schema_version": SCHEMA_VERSION, "cells": cells}
    if config_echo is not None:
        out["config"] = config_echo
    return out


def relations_from_json(data):
    from .relations import RelationSet
    cells = [(c["g"], c["n"], c["codim"]) for c in data["cells"]]
    rs = RelationSet(cells)
    for c in data["cells"]:
        cell = (c["g"], c["n"], c["codim"])
        for rel, prov in zip(c["relations"], c.get("provenance") or
                             [None] * len(c["relations"])):
            rs.add(cell, rational_vector_from_json(rel),
                   tuple(prov) if prov else None)
    return rs
