"""Command-line interface: ``diskpattern <command> [options] [input]``."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import random
import sys
from dataclasses import dataclass, field

from . import __version__
from .conformal_geom import GeometryError, skinning_width
from .coxeter import CoxeterGraph, check_realizable, frac_doc, is_acylindrical, limit_set_connected
from .extremal import SizeCapExceeded, duality_report, extremal_width, extremal_width_bruteforce
from .families import Family
from .generators import example_a, example_b, random_instance
from .graph_core import GraphError, parse_document, serialize_document
from .layout import LayoutNonConvergence, layout_residuals, parse_pattern, render_svg, thurston_layout
from .staged import project_metric, run_metric_extension
from .subdivision import is_acylindrical_subdivision, make_subdivision, triangulate

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    seed: int = 0
    quiet: bool = False
    options: dict = field(default_factory=dict)


# ----------------------------------------------------------------------
# input helpers


def _read(path: str | None) -> bytes:
    if path is None:
        raise InputError("this command needs an input graph document")
    try:
        if path == "-":
            return sys.stdin.buffer.read()
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _subdivision(doc):
    if doc.outer_face is None:
        raise InputError("document has no 'outer_face'")
    return make_subdivision(doc.graph, doc.outer_face, doc.weights)


def _coxeter(doc) -> CoxeterGraph:
    weights = doc.weights if doc.weights is not None else {e: 0 for e in doc.graph.edges}
    return CoxeterGraph(doc.graph, weights)


def _pair(cfg: RunConfig, sg) -> tuple[str, str]:
    raw = cfg.options.get("pair")
    if raw is None:
        from .generators import valid_pairs

        pairs = valid_pairs(sg)
        if not pairs:
            raise InputError("no boundary pair with nonempty families; pass --pair")
        return pairs[0]
    parts = raw.split(",")
    if len(parts) != 2:
        raise InputError("--pair expects 'a,b'")
    a, b = (p.strip() for p in parts)
    for v in (a, b):
        if not sg.is_boundary(v):
            raise InputError(f"{v!r} is not a boundary vertex")
    if a == b or sg.graph.has_edge(a, b):
        raise InputError(f"{a!r} and {b!r} must be distinct and nonadjacent")
    return a, b


def _json_number(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


# ----------------------------------------------------------------------
# commands; each returns (report, exit status)


def cmd_faces(cfg, doc):
    faces = doc.graph.faces()
    return {"faces": [{"boundary": list(f.boundary), "sides": f.side_count, "jordan": f.is_jordan()} for f in faces]}, EXIT_OK


def cmd_classify(cfg, doc):
    cg = _coxeter(doc)
    out = []
    for f, c in cg.classes().items():
        out.append({"boundary": list(f.boundary), "sides": f.side_count, "kind": c.kind.value, "weight_sum": frac_doc(c.weight_sum)})
    return {"faces": out}, EXIT_OK


def cmd_check_realizable(cfg, doc):
    rep = check_realizable(_coxeter(doc))
    return rep.to_dict(), EXIT_OK if rep.realizable else EXIT_FALSE


def cmd_check_acylindrical(cfg, doc):
    if doc.outer_face is not None:
        ok, wit = is_acylindrical_subdivision(_subdivision(doc))
        scope = "subdivision"
    else:
        ok, wit = is_acylindrical(_coxeter(doc))
        scope = "coxeter"
    return {"scope": scope, "acylindrical": ok, "witness": None if wit is None else wit.to_dict()}, EXIT_OK if ok else EXIT_FALSE


def cmd_limit_set_connected(cfg, doc):
    ok, wit = limit_set_connected(_coxeter(doc))
    return {"connected": ok, "witness": None if wit is None else wit.to_dict()}, EXIT_OK if ok else EXIT_FALSE


def cmd_ew(cfg, doc):
    sg = _subdivision(doc)
    a, b = _pair(cfg, sg)
    fam = Family(cfg.options["family"], a, b)
    res = extremal_width(sg, fam)
    report = {"family": fam.label(), "result": res.to_dict()}
    if cfg.options.get("oracle"):
        try:
            brute = extremal_width_bruteforce(sg, fam)
        except SizeCapExceeded as exc:
            report["oracle"] = {"skipped": str(exc)}
        else:
            diff = abs(res.width - brute.width) if res.finite and brute.finite else (0.0 if res.status == brute.status else math.inf)
            report["oracle"] = {"result": brute.to_dict(), "difference": _json_number(diff), "agree": diff <= 1e-6}
    return report, EXIT_OK


def cmd_duality(cfg, doc):
    sg = _subdivision(doc)
    a, b = _pair(cfg, sg)
    rep = duality_report(sg, a, b)
    return rep.to_dict(), EXIT_OK if rep.verdict else EXIT_FALSE


def cmd_verify_projection(cfg, doc):
    from .staged import projection_report

    sg = _subdivision(doc)
    a, b = _pair(cfg, sg)
    rep = projection_report(sg, a, b)
    return rep, EXIT_OK if rep["holds"] else EXIT_FALSE


def cmd_extend_metric(cfg, doc):
    sg = _subdivision(doc)
    a, b = _pair(cfg, sg)
    trace = run_metric_extension(sg, Family(cfg.options["family"], a, b))
    cert = project_metric(trace)
    if cfg.options.get("trace"):
        with open(cfg.options["trace"], "w", encoding="utf-8") as fh:
            fh.write(trace.jsonl() + "\n")
    report = {
        "pair": [a, b],
        "family": trace.family.kind,
        "stages": len(trace.records),
        "stage_properties": all(r.properties_hold for r in trace.records),
        "certificate": cert.to_dict(),
        "projected_metric": {v: x for v, x in sorted(cert.metric.items()) if x},
    }
    ok = report["stage_properties"] and cert.holds
    return report, EXIT_OK if ok else EXIT_FALSE


def _layout(cfg, sg):
    radii = cfg.options.get("radii")
    if radii:
        try:
            radii = json.loads(radii)
        except json.JSONDecodeError as exc:
            raise InputError(f"--radii is not JSON: {exc}") from exc
    if not sg.is_triangulation():
        sg = triangulate(sg).graph
    return thurston_layout(sg, radii, tol=cfg.options.get("tol", 1e-12))


def cmd_layout(cfg, doc):
    sg = _subdivision(doc)
    pattern = _layout(cfg, sg)
    res = layout_residuals(pattern)
    if cfg.options.get("svg"):
        with open(cfg.options["svg"], "w", encoding="utf-8") as fh:
            fh.write(render_svg(pattern, labels=cfg.options.get("labels", False), shade_interstice=True))
    return {"pattern": pattern.to_dict(), "normalization": pattern.normalization, "sweeps": pattern.sweeps, "residuals": res.to_dict()}, EXIT_OK


def cmd_skinning_width(cfg, doc):
    sg = _subdivision(doc)
    a, b = _pair(cfg, sg)
    if cfg.options.get("pattern"):
        tg = sg if sg.is_triangulation() else triangulate(sg).graph
        pattern = parse_pattern(_read(cfg.options["pattern"]).decode("utf-8"), tg)
    else:
        pattern = _layout(cfg, sg)
    est = skinning_width(pattern, pattern.source, a, b)
    return {"pair": [a, b], "estimate": est.to_dict()}, EXIT_OK


def cmd_gen_example(cfg, doc):
    which = cfg.options["which"]
    if which == "A":
        sg = example_a()
    elif which == "B":
        sg = example_b(cfg.options["n"])
    else:
        sg, _ = random_instance(random.Random(cfg.seed), triangulated=(which == "random-triangulation"))
    return serialize_document(sg.graph, sg.weights, sg.boundary), EXIT_OK


COMMANDS = {
    "faces": cmd_faces,
    "classify": cmd_classify,
    "check-realizable": cmd_check_realizable,
    "check-acylindrical": cmd_check_acylindrical,
    "limit-set-connected": cmd_limit_set_connected,
    "ew": cmd_ew,
    "duality": cmd_duality,
    "verify-projection": cmd_verify_projection,
    "extend-metric": cmd_extend_metric,
    "layout": cmd_layout,
    "skinning-width": cmd_skinning_width,
    "gen-example": cmd_gen_example,
}


# ----------------------------------------------------------------------
# argument parsing and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diskpattern", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for generated fixtures (env PD_SEED overrides)")
    common.add_argument("--quiet", action="store_true", help="suppress non-report output")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, needs_input=True):
        p = sub.add_parser(name, help=help_, parents=[common])
        if needs_input:
            p.add_argument("input", help="graph document (JSON), '-' for stdin")
        return p

    add("faces", "list faces of a plane graph")
    add("classify", "classify faces as elliptic, parabolic or hyperbolic")
    add("check-realizable", "decide realizability conditions")
    add("check-acylindrical", "acylindricity of a Coxeter or subdivision graph")
    add("limit-set-connected", "connectedness of the limit set")
    p = add("ew", "vertex extremal width of a path family")
    p.add_argument("--family", choices=["connecting", "separating"], default="connecting")
    p.add_argument("--pair", help="boundary pair 'a,b'")
    p.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")
    p = add("duality", "product of the two widths with its certified bounds")
    p.add_argument("--pair")
    p = add("verify-projection", "widths on the subdivision and on its triangulation")
    p.add_argument("--pair")
    p = add("extend-metric", "run the staged metric extension")
    p.add_argument("--pair")
    p.add_argument("--family", choices=["connecting", "separating"], default="connecting")
    p.add_argument("--trace", help="write per-stage records as JSON lines")
    p = add("layout", "disk pattern layout by radius iteration")
    p.add_argument("--svg", help="write an SVG figure")
    p.add_argument("--labels", action="store_true")
    p.add_argument("--radii", help="boundary radii as a JSON object")
    p.add_argument("--tol", type=float, default=1e-12, help="angle-sum tolerance of the radius iteration")
    p = add("skinning-width", "circular width of the skinning interstice")
    p.add_argument("--pair")
    p.add_argument("--pattern", help="pattern JSON {vertex: {cx, cy, r}}; laid out if omitted")
    p.add_argument("--radii", help="boundary radii as a JSON object")
    p.add_argument("--tol", type=float, default=1e-12, help="angle-sum tolerance of the radius iteration")
    p = add("gen-example", "emit a fixture graph document", needs_input=False)
    p.add_argument("--which", choices=["A", "B", "random", "random-triangulation"], default="A")
    p.add_argument("--n", type=int, default=1, help="size parameter for example B")
    return parser


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(args).items() if k not in ("command", "input", "output", "seed", "quiet")}
    seed = args.seed
    env = os.environ.get("PD_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise InputError(f"PD_SEED must be an integer, got {env!r}") from None
    if getattr(args, "tol", 1.0) <= 0:
        raise InputError("--tol must be positive")
    if args.command == "gen-example" and args.which == "B" and args.n < 1:
        raise InputError("--n must be at least 1")
    return RunConfig(args.command, getattr(args, "input", None), args.output, seed, args.quiet, opts)


def run(cfg: RunConfig) -> int:
    raw = b""
    doc = None
    if cfg.command != "gen-example":
        raw = _read(cfg.input)
        doc = parse_document(raw)
    report, status = COMMANDS[cfg.command](cfg, doc)
    if cfg.command != "gen-example":
        report = {
            "command": cfg.command,
            "version": __version__,
            "input_sha256": hashlib.sha256(raw).hexdigest(),
            "seed": cfg.seed,
            "report": report,
        }
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_number)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    if not cfg.quiet and status == EXIT_FALSE:
        print(f"{cfg.command}: verdict false or undecided", file=sys.stderr)
    return status


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        return run(cfg)
    except (InputError, GraphError, GeometryError, LayoutNonConvergence, SizeCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
