"""Command line driver: validate, build, certify, moves, report."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import __version__
from .complex import (PERIPHERAL, TriangulationError, parse_triangulation, regular_neighborhood,
                      second_subdivision, serialize_triangulation, truncated_complement)
from .diagram import (DiagramError, ResourceLimit, bfs_untangle, crossing_measure,
                      link_components, parse_diagram, serialize)
from .embed import EmbedError, build_complement_input
from .normalsurf import certify_unknot

EXIT_OK, EXIT_KNOTTED, EXIT_INDETERMINATE, EXIT_INPUT = 0, 1, 2, 3
SCHEMA = "unknotkit.report/1"

# JSON schema every report satisfies; subcommand-specific keys are free
REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema", "command"],
    "properties": {
        "schema": {"const": SCHEMA},
        "command": {"enum": ["validate", "build", "certify", "moves", "report"]},
        "status": {"enum": ["OK", "INPUT_ERROR"]},
        "verdict": {"enum": ["UNKNOTTED", "KNOTTED", "INDETERMINATE"]},
        "script": {"type": "array", "items": {"type": "string"}},
        "length": {"type": "integer", "minimum": 0},
        "budgets": {"type": "object"},
        "stages": {"type": "object"},
        "certificate": {"type": "object", "required": ["tetrahedra", "box", "n", "m"]},
    },
    "anyOf": [{"required": ["status"]}, {"required": ["verdict"]}],
}

VERDICT_EXIT = {"UNKNOTTED": EXIT_OK, "KNOTTED": EXIT_KNOTTED, "INDETERMINATE": EXIT_INDETERMINATE}


class InputError(Exception):
    pass


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise InputError(str(e)) from None


def load(path):
    """A diagram or a triangulation, chosen by the first token of the file."""
    text = _read(path)
    head = text.lstrip()[:5]
    try:
        if head.startswith("tets="):
            return "triangulation", parse_triangulation(text)
        if head.startswith(("K[", "L[")):
            return "diagram", parse_diagram(text)
    except (DiagramError, TriangulationError) as e:
        raise InputError("%s: %s" % (type(e).__name__, e)) from None
    raise InputError("%s is neither a diagram (K[...]) nor a triangulation (tets=N)" % path)


def _emit(report, args):
    text = json.dumps(report, indent=2, sort_keys=True, default=str)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    print(text)


# -- subcommands ------------------------------------------------------------

def cmd_validate(args):
    kind, obj = load(args.path)
    rep = {"schema": SCHEMA, "command": "validate", "kind": kind, "status": "OK"}
    if kind == "diagram":
        rep.update(n=crossing_measure(obj), crossings=len(obj.crossings), loops=obj.loops,
                   components=len(link_components(obj)))
    else:
        rep.update(tetrahedra=obj.size, boundary_faces=len(obj.boundary_faces()),
                   marks=sorted({m for m in obj.marks.values() if m}),
                   curves=sorted(obj.curves), cycles=sorted(obj.cycles))
    return rep, EXIT_OK


def cmd_build(args):
    kind, d = load(args.path)
    if kind != "diagram":
        raise InputError("build needs a diagram file")
    if len(d.crossings) > args.max_crossings:
        return ({"schema": SCHEMA, "command": "build", "verdict": "INDETERMINATE",
                 "reason": "more than %d crossings" % args.max_crossings}, EXIT_INDETERMINATE)
    t0 = time.time()
    try:
        ec = build_complement_input(d)
    except EmbedError as e:
        raise InputError("construction failed: %s" % e) from None
    rep = {"schema": SCHEMA, "command": "build", "status": "OK",
           "certificate": ec.certificate, "seconds": round(time.time() - t0, 3)}
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        tri = os.path.join(args.out, "polytope.tri")
        with open(tri, "w") as fh:
            fh.write(serialize_triangulation(ec.polytope))
        with open(os.path.join(args.out, "certificate.json"), "w") as fh:
            json.dump(ec.certificate, fh, indent=2, sort_keys=True)
        rep["files"] = [tri, os.path.join(args.out, "certificate.json")]
    return rep, EXIT_OK


def complement_of(T, curve):
    """Truncated complement of a curve given by vertex ids of ``T``."""
    M2, K = second_subdivision(T, curve)
    R = regular_neighborhood(M2, K)
    return truncated_complement(M2, R)


def cmd_certify(args):
    kind, T = load(args.path)
    if kind != "triangulation":
        raise InputError("certify needs a triangulation file")
    rep = {"schema": SCHEMA, "command": "certify"}
    if T.faces_with_mark(PERIPHERAL):
        M = T
    else:
        name = args.knot or ("knot" if "knot" in T.curves else (sorted(T.curves) or [None])[0])
        if name is None or name not in T.curves:
            raise InputError("no peripheral boundary and no curve %r to drill" % args.knot)
        if 7 * 576 * T.size > args.max_dim:
            rep.update(verdict="INDETERMINATE", reason="dimension guard",
                       guard={"max_dim": args.max_dim, "dim": 7 * 576 * T.size})
            return rep, EXIT_INDETERMINATE
        try:
            M = complement_of(T, T.curves[name])
        except TriangulationError as e:
            raise InputError("cannot drill %s: %s" % (name, e)) from None
        rep["drilled"] = name
    cert = dict(certify_unknot(M, max_dim=args.max_dim))
    rep["certificate_schema"] = cert.pop("schema", None)
    rep.update(cert)
    return rep, VERDICT_EXIT[cert["verdict"]]


def cmd_moves(args):
    kind, d = load(args.path)
    if kind != "diagram":
        raise InputError("moves needs a diagram file")
    rep = {"schema": SCHEMA, "command": "moves", "n": crossing_measure(d),
           "limits": {"max_crossings": args.max_crossings, "max_depth": args.max_depth}}
    if len(link_components(d)) != 1:
        raise InputError("moves needs a knot diagram")
    t0 = time.time()
    try:
        script = bfs_untangle(d, args.max_crossings, args.max_depth)
    except ResourceLimit as e:
        rep.update(verdict="INDETERMINATE", reason=str(e))
        return rep, EXIT_INDETERMINATE
    rep["seconds"] = round(time.time() - t0, 3)
    if script is None:
        rep.update(verdict="INDETERMINATE",
                   reason="no untangling within %d moves and %d crossings"
                   % (args.max_depth, args.max_crossings))
        return rep, EXIT_INDETERMINATE
    rep.update(verdict="UNKNOTTED", length=len(script), counts=script.counts(),
               script=script.dumps().splitlines())
    return rep, EXIT_OK


def budgets(n, t=None):
    """Symbolic move and size budgets for a diagram of crossing measure n."""
    t = 840 * max(n, 1) if t is None else t
    out = {
        "polytope_tetrahedra_840n": 840 * max(n, 1),
        "second_subdivision_576t": 576 * t,
        "normal_dimension_7x576t": 7 * 576 * t,
        "vertex_coordinate_bits_7t": 7 * 576 * t - 1,
        "disk_contraction_2w": "2w, w = triangles of the disk",
        "surface_isotopy_17l4u3": "17 l^4 u^3",
        "elementary_moves_2^(8t+6)": "2^(%d)" % (8 * t + 6),
        "reidemeister_2k(n+k/2+1)^2": "2k(%d + k/2 + 1)^2" % n,
    }
    return out


def cmd_report(args):
    kind, d = load(args.path)
    if kind != "diagram":
        raise InputError("report needs a diagram file")
    n = crossing_measure(d)
    rep = {"schema": SCHEMA, "command": "report", "input": {"diagram": serialize(d), "n": n}}
    stages = {}
    t0 = time.time()
    if len(d.crossings) > args.max_crossings:
        stages["build"] = {"status": "skipped", "reason": "crossing guard"}
        rep.update(stages=stages, budgets=budgets(n), verdict="INDETERMINATE")
        return rep, EXIT_INDETERMINATE
    ec = build_complement_input(d)
    t = ec.certificate["tetrahedra"]
    stages["build"] = {"status": "OK", "tetrahedra": t, "grid_side": ec.certificate["grid_side"],
                       "seconds": round(time.time() - t0, 3)}
    rep["input"]["link_vertices"] = ec.certificate["link_vertices"]
    rep["input"]["t"] = t
    verdict = "INDETERMINATE"
    if 7 * 576 * t <= args.max_dim:
        M = complement_of(ec.polytope, ec.components[0].path)
        cert = certify_unknot(M, max_dim=args.max_dim)
        stages["certify"] = cert
        verdict = cert["verdict"]
    else:
        stages["certify"] = {"status": "skipped", "reason": "dimension guard",
                             "dim": 7 * 576 * t, "max_dim": args.max_dim}
    if len(link_components(d)) == 1:
        try:
            script = bfs_untangle(d, args.max_crossings, args.max_depth)
        except ResourceLimit:
            script = None
        stages["moves"] = ({"status": "found", "length": len(script)} if script is not None
                           else {"status": "not found within limits"})
        if script is not None:
            verdict = "UNKNOTTED"
    rep.update(stages=stages, budgets=budgets(n, t), verdict=verdict,
               seconds=round(time.time() - t0, 3))
    return rep, VERDICT_EXIT[verdict]


COMMANDS = {"validate": cmd_validate, "build": cmd_build, "certify": cmd_certify,
            "moves": cmd_moves, "report": cmd_report}


def make_parser():
    p = argparse.ArgumentParser(prog="unknotkit", description=__doc__)
    p.add_argument("--version", action="version", version="%(prog)s " + __version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-dim", type=int, default=70,
                        help="largest normal-coordinate dimension to enumerate")
    common.add_argument("--max-crossings", type=int, default=8)
    common.add_argument("--max-depth", type=int, default=6)
    common.add_argument("--seed", type=int, default=0,
                        help="seed for fixture generation (core algorithms are deterministic)")
    common.add_argument("--json", metavar="PATH", help="also write the report here")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("path")
        if name == "build":
            sp.add_argument("--out", metavar="DIR", help="write polytope.tri and certificate.json")
        if name == "certify":
            sp.add_argument("--knot", help="curve to drill when the file has no peripheral torus")
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    random.seed(args.seed)
    try:
        report, code = COMMANDS[args.command](args)
    except InputError as e:
        print(json.dumps({"schema": SCHEMA, "command": args.command, "status": "INPUT_ERROR",
                          "error": str(e)}), file=sys.stderr)
        return EXIT_INPUT
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
