"""Command-line front end: reproducible, file-driven pipeline runs.

Subcommands: frame, rmatrix, reconstruct, relations, compare, verify, genus1.
A JSON config file provides defaults and is echoed into every artifact;
command-line flags override config fields.  Exit codes: 0 success, 1
computation error, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import charts as chartlib
from .frobenius import (ChartError, ChartExpansion, NonSemisimpleError,
                        idempotent_frame, local_structure_probe, psi0_frame)
from .multipoly import NonUnitError
from .reconstruct import (CohFTSpec, genus_one_correlator,
                          integrate_reconstruction, reconstruct_class,
                          to_normalized_insertion)
from .relations import (close_relations, compare_spans, extract_relations,
                        verify_relations)
from .rmatrix import solve_2d_family, solve_flatness
from .serialize import (SCHEMA_VERSION, ParseError, load_chart, parse_poly,
                        relations_from_json, relations_to_json, rmatrix_to_json,
                        vector_to_json)

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_INPUT = 2

BUILTIN_CHARTS = {
    "a2": lambda: chartlib.a2_chart(),
    "a2_tilted": lambda: chartlib.a2_tilted_chart(),
    "a3": lambda: chartlib.a3_chart(),
    "a2xa1": lambda: chartlib.extend_chart(chartlib.a2_chart(), 1),
}


def _load_config(args):
    config = {}
    if args.config:
        with open(args.config) as fh:
            config = json.load(fh)
    for key in ("chart", "param", "trunc", "z_order", "codim", "family",
                "out", "jobs", "cover_degree"):
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    if getattr(args, "gn", None):
        config["gn"] = [[int(x) for x in pair.split(",")]
                        for pair in args.gn.split(";")]
    if getattr(args, "insertion", None):
        config["insertion"] = [int(x) for x in args.insertion.split(",")]
    if getattr(args, "constants", None):
        config["constants"] = json.loads(args.constants)
    config.setdefault("trunc", 8)
    config.setdefault("z_order", 3)
    config.setdefault("codim", 2)
    config.setdefault("out", ".")
    return config


def _make_expansion(config):
    name = config.get("chart")
    if not name:
        raise ParseError("no chart given (config 'chart' or --chart)")
    exp_cfg = dict(config.get("expansion") or {})
    if name in BUILTIN_CHARTS:
        chart = BUILTIN_CHARTS[name]()
    else:
        chart = load_chart(name)
        with open(name) as fh:
            file_exp = json.load(fh).get("expansion_point")
        if file_exp and not exp_cfg:
            exp_cfg = dict(file_exp)
    param = config.get("param") or exp_cfg.get("param") or chart.coords[-1]
    subs_cfg = exp_cfg.get("subs") or {}
    subs = {}
    for c in chart.coords:
        subs[c] = parse_poly(subs_cfg.get(c, c))
    cover = int(config.get("cover_degree", exp_cfg.get("cover_degree", 1)))
    return ChartExpansion(chart, param, subs, cover_degree=cover,
                          trunc=Fraction(config["trunc"]))


def _constants(config):
    out = {}
    for item in config.get("constants") or []:
        i, k, v = item
        out[(int(i), int(k))] = Fraction(v)
    return out


def _write(config, name, payload):
    payload = dict(payload)
    payload["schema_version"] = SCHEMA_VERSION
    payload["config"] = {k: v for k, v in sorted(config.items())}
    outdir = config.get("out", ".")
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, name)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def cmd_frame(config):
    exp = _make_expansion(config)
    frame = idempotent_frame(exp)
    report = local_structure_probe(frame)
    i1, i2 = report.singular
    payload = {
        "chart": exp.chart.name,
        "idempotents": [[str(c) for c in eps] for eps in frame.eps],
        "canonical_coordinates": [str(u) for u in frame.u],
        "delta": [str(d) for d in frame.delta],
        "m": str(report.m),
        "singular_pair": report.singular,
        "u1_minus_u2": str(frame.u[i1] - frame.u[i2]),
        "order_u1_minus_u2": str(report.u_diff_order),
    }
    if report.m == Fraction(1, 2):
        p0 = psi0_frame(frame)
        payload["eta0"] = str(p0.eta0)
        payload["eta1"] = str(p0.eta1)
        payload["t"] = str(p0.t)
        payload["psi_tilde_orders"] = [[str(e.order()) for e in row]
                                       for row in p0.psi_tilde.entries]
    path = _write(config, "frame.json", payload)
    print("frame report: %s (m = %s)" % (path, report.m))
    return EXIT_OK


def cmd_rmatrix(config):
    if config.get("family"):
        f = parse_poly(config["family"])
        diag = solve_2d_family(f)
        payload = {
            "family": str(f),
            "gamma": str(diag.gamma_global) if diag.gamma_global is not None else None,
            "gamma_series": {str(c): str(s) for c, s in diag.gamma_series.items()},
            "certificate": diag.certificate,
        }
        path = _write(config, "rmatrix_family.json", payload)
        print("family diagnostics: %s" % path)
        if diag.gamma_global is not None:
            print("gamma = %s" % diag.gamma_global)
        else:
            print(diag.certificate)
        return EXIT_OK
    exp = _make_expansion(config)
    frame = idempotent_frame(exp)
    R = solve_flatness(frame, int(config["z_order"]), _constants(config))
    payload = rmatrix_to_json(R)
    path = _write(config, "rmatrix.json", payload)
    print("R-matrix to z^%d: %s" % (R.K, path))
    return EXIT_OK


def cmd_reconstruct(config):
    exp = _make_expansion(config)
    frame = idempotent_frame(exp)
    R = solve_flatness(frame, int(config["z_order"]), _constants(config))
    spec = CohFTSpec(frame, R)
    gn = config.get("gn") or [[1, 1]]
    g, n = gn[0]
    flat = config.get("insertion") or [0] * n
    if len(flat) != n:
        raise ParseError("need %d insertion indices" % n)
    insertions = []
    for mu in flat:
        vec = [Fraction(1) if k == mu else Fraction(0) for k in range(frame.dim)]
        insertions.append(to_normalized_insertion(frame, vec))
    cls = reconstruct_class(spec, g, n, insertions, int(config["codim"]))
    payload = vector_to_json(cls)
    path = _write(config, "reconstruct.json", payload)
    print("reconstructed (%d,%d) class with %d terms: %s"
          % (g, n, len(cls.terms), path))
    return EXIT_OK


def _default_cells(config):
    gn = config.get("gn") or [[1, 1], [0, 4]]
    dmax = int(config["codim"])
    cells = []
    for g, n in gn:
        dim = 3 * g - 3 + n
        for d in range(1, min(dmax, dim) + 1):
            cells.append((g, n, d))
    return cells


def _relations_for(config, chart_name=None):
    cfg = dict(config)
    if chart_name:
        cfg["chart"] = chart_name
    exp = _make_expansion(cfg)
    frame = idempotent_frame(exp)
    R = solve_flatness(frame, int(cfg["z_order"]), _constants(cfg))
    spec = CohFTSpec(frame, R)
    jobs = cfg.get("jobs")
    if jobs is None:
        jobs = os.cpu_count() or 1
    rs = extract_relations(spec, _default_cells(cfg), jobs=jobs)
    return close_relations(rs)


def cmd_relations(config):
    rs = _relations_for(config)
    payload = relations_to_json(rs)
    path = _write(config, "relations.json", payload)
    print("relations: %s" % path)
    for cell in rs.cells:
        print("  (g,n,codim)=%s rank %d" % (cell, rs.dim(cell)))
    return EXIT_OK


def cmd_compare(config):
    other = config.get("chart2")
    if not other:
        raise ParseError("compare needs 'chart2'")
    rs1 = _relations_for(config)
    rs2 = _relations_for(config, chart_name=other)
    verdicts = compare_spans(rs1, rs2)
    payload = {"verdicts": {"%d,%d,%d" % cell: v for cell, (v, _) in
                            sorted(verdicts.items())}}
    path = _write(config, "compare.json", payload)
    print("compare: %s" % path)
    for cell, (v, _) in sorted(verdicts.items()):
        print("  %s: %s" % (cell, v))
    return EXIT_OK


def cmd_verify(config):
    path = config.get("relations_file")
    if not path:
        raise ParseError("verify needs 'relations_file'")
    with open(path) as fh:
        rs = relations_from_json(json.load(fh))
    failures = verify_relations(rs)
    payload = {"failures": {"%d,%d,%d" % cell:
                            [[idx, str(mono), str(val)] for idx, mono, val in items]
                            for cell, items in failures.items()},
               "all_zero": not failures}
    out = _write(config, "verify.json", payload)
    print("verify: %s (%s)" % (out, "all pairings vanish" if not failures
                               else "%d failing cells" % len(failures)))
    return EXIT_OK


def cmd_genus1(config):
    exp = _make_expansion(config)
    frame = idempotent_frame(exp)
    R = solve_flatness(frame, max(2, int(config["z_order"])), _constants(config))
    spec = CohFTSpec(frame, R)
    flat_idx = (config.get("insertion") or [frame.dim - 1])[0]
    X = [Fraction(1) if k == flat_idx else Fraction(0) for k in range(frame.dim)]
    value = genus_one_correlator(spec, X)
    cls = reconstruct_class(spec, 1, 1, [to_normalized_insertion(frame, X)], 1)
    integral = integrate_reconstruction(cls)
    payload = {"dG": str(value), "reconstruction_integral": str(integral),
               "agree": (value - integral).is_zero()}
    path = _write(config, "genus1.json", payload)
    print("genus-1 correlator: %s" % value)
    return EXIT_OK


COMMANDS = {
    "frame": cmd_frame,
    "rmatrix": cmd_rmatrix,
    "reconstruct": cmd_reconstruct,
    "relations": cmd_relations,
    "compare": cmd_compare,
    "verify": cmd_verify,
    "genus1": cmd_genus1,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tautrel",
        description="Frobenius charts, R-matrices and tautological relations")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--chart", help="chart file or builtin name")
        p.add_argument("--param", help="local parameter symbol")
        p.add_argument("--cover-degree", dest="cover_degree", type=int)
        p.add_argument("--trunc", type=int, help="series truncation order")
        p.add_argument("--z-order", dest="z_order", type=int)
        p.add_argument("--codim", type=int)
        p.add_argument("--gn", help="grid like '1,1;0,4'")
        p.add_argument("--insertion", help="flat indices like '0,1'")
        p.add_argument("--constants", help="JSON list of [i, k, value]")
        p.add_argument("--jobs", type=int)
        p.add_argument("--out", help="output directory")
        if name == "rmatrix":
            p.add_argument("--family", help="polynomial f(t) for the 2d family")
        if name == "compare":
            p.add_argument("--chart2", help="second chart")
        if name == "verify":
            p.add_argument("--relations-file", dest="relations_file")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        if getattr(args, "family", None):
            config["family"] = args.family
        if getattr(args, "chart2", None):
            config["chart2"] = args.chart2
        if getattr(args, "relations_file", None):
            config["relations_file"] = args.relations_file
    except (OSError, json.JSONDecodeError, ParseError, ValueError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](config)
    except (ParseError, OSError, json.JSONDecodeError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except (ChartError, NonSemisimpleError, NonUnitError, ArithmeticError,
            ValueError) as exc:
        print("computation error: %s" % exc, file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
