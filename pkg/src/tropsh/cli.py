"""Command line front end.

Every command reads JSON and writes one line of compact JSON to stdout.
Exit status: 0 success, 1 a check failed (the report is still printed),
2 the input was malformed.  Messages go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from tropsh import broken_lines as bl
from tropsh import homology, io, liouville, manifold, rings
from tropsh.lattice import Vec2Z, scalar_str, to_scalar
from tropsh.render import render_svg

logger = logging.getLogger("tropsh")


class CheckFailed(Exception):
    """Raised with the report to print when a command's check does not pass."""

    def __init__(self, report: dict):
        super().__init__("check failed")
        self.report = report


# -- loading helpers -----------------------------------------------------------


def _project(args) -> dict:
    doc = io.read_json(args.input)
    io.check_schema(doc, "project")
    return doc


def _manifold(args):
    doc = _project(args)
    return doc, io.parse_manifold(doc)


def _ample(doc: dict):
    a = io.parse_ample(doc)
    if a is None:
        raise io.InputError("this command needs ample data (\"ample\")")
    return a


def _path(doc: dict, m, reverse: bool = False):
    path = liouville.synthesize(m, _ample(doc))
    return path.reverse() if reverse else path


def _optional_path(doc: dict, m):
    a = io.parse_ample(doc)
    return None if a is None else liouville.synthesize(m, a)


def _diagram(doc: dict, index: int):
    diagrams = io.project_diagrams(doc)
    if not diagrams:
        raise io.InputError("no diagram in the project file")
    if not 0 <= index < len(diagrams):
        raise io.InputError(f"diagram index {index} out of range (have {len(diagrams)})")
    return diagrams[index]


def _load(path: str, schema: str) -> dict:
    doc = io.read_json(path)
    io.check_schema(doc, schema)
    return doc


def _pair_arg(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a,b', got {text!r}")


def _rational_arg(text: str) -> Fraction:
    try:
        return to_scalar(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


# -- trop ----------------------------------------------------------------------


def cmd_build(args) -> dict:
    _, m = _manifold(args)
    mu = manifold.monodromy(m)
    return {
        "n": m.n,
        "self_intersections": list(m.boundary.self_intersections),
        "transitions": [io.matrix_json(t) for t in m.transitions],
        "monodromy": io.matrix_json(mu),
    }


def cmd_points(args) -> dict:
    _, m = _manifold(args)
    pts = manifold.integral_points(m, args.bound)
    return {"bound": args.bound, "count": len(pts), "points": [io.point_json(p) for p in pts]}


def cmd_monodromy(args) -> dict:
    _, m = _manifold(args)
    mu = manifold.monodromy(m)
    return {"matrix": io.matrix_json(mu), "trace": mu.trace()}


def cmd_linear_functions(args) -> dict:
    _, m = _manifold(args)
    basis = manifold.linear_function_basis(m)
    return {"rank": len(basis), "basis": [list(f.values) for f in basis]}


def cmd_transport(args) -> dict:
    _, m = _manifold(args)
    direction = manifold.CCW if args.direction == "ccw" else manifold.CW
    mat = manifold.transport_matrix(m, args.source, args.target, direction, args.turns)
    v = manifold.transport_vector(
        m, manifold.TangentVector(m.chart(args.source), Vec2Z(*args.vector)),
        args.target, direction, args.turns,
    )
    return {"chart": v.chart, "vector": list(v.vec.as_tuple()), "matrix": io.matrix_json(mat)}


# -- liouville -----------------------------------------------------------------


def _covector(phi) -> list[str]:
    return [scalar_str(phi[0]), scalar_str(phi[1])]


def cmd_synth(args) -> dict:
    doc, m = _manifold(args)
    path = _path(doc, m)
    return {
        "ample": [scalar_str(c) for c in path.ample.coefficients],
        "corners": [_covector(c) for c in path.corners],
        "boundary_degrees": [scalar_str(x) for x in liouville.boundary_degrees(m, path.ample)],
    }


def cmd_check(args) -> dict:
    doc, m = _manifold(args)
    path = _path(doc, m, args.reverse)
    contact = liouville.check_contact(path)
    convex = liouville.check_convex(path)
    report = {
        "pass": contact.ok and convex.ok,
        "contact": contact.ok,
        "convex": convex.ok,
        "segments": [
            {"index": s.index, "start": _covector(s.start),
             "displacement": _covector(s.displacement), "wedge": scalar_str(s.wedge), "ok": s.ok}
            for s in contact.items
        ],
        "corners": [
            {"index": c.index, "wedge": scalar_str(c.wedge), "ok": c.ok} for c in convex.items
        ],
    }
    if not report["pass"]:
        raise CheckFailed(report)
    return report


def cmd_lengths(args) -> dict:
    doc, m = _manifold(args)
    path = _path(doc, m)
    out = []
    for p in manifold.integral_points(m, args.bound):
        if p.is_origin():
            continue
        out.append({"point": io.point_json(p), "length": scalar_str(liouville.orbit_length(path, p))})
    return {"bound": args.bound, "lengths": out}


def cmd_filter(args) -> dict:
    doc, m = _manifold(args)
    path = _path(doc, m)
    pts = liouville.theta_below_slope(path, args.slope)
    return {"slope": scalar_str(args.slope), "count": len(pts),
            "points": [io.point_json(p) for p in pts]}


# -- broken lines --------------------------------------------------------------


def _report_json(report: bl.ValidationReport) -> list[dict]:
    return [
        {"name": c.name, "ok": c.ok, "skipped": c.skipped, "messages": list(c.messages)}
        for c in report.checks
    ]


def cmd_validate(args) -> dict:
    doc, m = _manifold(args)
    d = _diagram(doc, args.diagram)
    report = bl.validate(m, _optional_path(doc, m), d)
    out = {"pass": report.ok, "checks": _report_json(report), "diagram": io.diagram_json(d)}
    if not report.ok:
        raise CheckFailed(out)
    return out


def cmd_class(args) -> dict:
    doc, m = _manifold(args)
    d = _diagram(doc, args.diagram)
    path = _optional_path(doc, m)
    report = bl.validate(m, path, d)
    if not report.ok:
        raise CheckFailed({"pass": False, "checks": _report_json(report)})
    return {
        "class": bl.homology_class(m, d, path),
        "localized": bl.is_localized(m, d, path),
    }


def cmd_render(args) -> dict:
    doc, m = _manifold(args)
    diagrams = io.project_diagrams(doc)
    d = diagrams[args.diagram] if diagrams and not args.no_diagram else None
    svg = render_svg(m, d, _optional_path(doc, m), args.bound)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    logger.info("wrote %s", args.out)
    return {"out": args.out, "bytes": len(svg.encode("utf-8"))}


# -- homology ------------------------------------------------------------------


def _class_query(args, lattice):
    q = _load(args.cls, "class_query")
    c = io.parse_class(q["class"], lattice.n)
    cert = io.parse_certificate(q["certificate"], lattice.n) if "certificate" in q else None
    return c, cert


def cmd_pair(args) -> dict:
    doc = _project(args)
    lattice = io.parse_lattice(doc)
    c, _ = _class_query(args, lattice)
    return {"class": io.class_json(c), "pairings": list(homology.pairing_vector(lattice, c))}


def cmd_certify(args) -> dict:
    doc = _project(args)
    lattice = io.parse_lattice(doc)
    c, cert = _class_query(args, lattice)
    if cert is None:
        if c.extra:
            raise io.InputError("a certificate is required for classes with extra parts")
        cert = homology.boundary_certificate(c.boundary)
    report = homology.verify_P_certificate(lattice, c, cert)
    out = {"certified": report.ok, "messages": list(report.messages),
           "certificate": io.certificate_json(cert)}
    if not report.ok:
        raise CheckFailed(out)
    return out


def cmd_degree(args) -> dict:
    doc = _project(args)
    lattice = io.parse_lattice(doc)
    c, _ = _class_query(args, lattice)
    return {"degree": scalar_str(homology.ample_degree(lattice, _ample(doc), c))}


# -- rings ---------------------------------------------------------------------


def cmd_vertex_mul(args) -> dict:
    _, m = _manifold(args)
    e1 = io.parse_vertex_element(m, _load(args.left, "vertex_element"))
    e2 = io.parse_vertex_element(m, _load(args.right, "vertex_element"))
    return io.vertex_element_json(rings.vertex_mul(m, e1, e2))


def cmd_local_mul(args) -> dict:
    e1 = io.parse_local_element(_load(args.left, "local_element"))
    e2 = io.parse_local_element(_load(args.right, "local_element"))
    return io.local_element_json(rings.local_mul(e1, e2))


def cmd_monoid_mul(args) -> dict:
    doc = _project(args)
    lattice = io.parse_lattice(doc)
    e1 = io.parse_monoid_element(lattice, _load(args.left, "monoid_element"))
    e2 = io.parse_monoid_element(lattice, _load(args.right, "monoid_element"))
    prod = rings.monoid_mul(lattice, e1, e2, _ample(doc), args.trunc)
    return io.monoid_element_json(prod)


def cmd_normal_form(args) -> dict:
    expr = io.parse_local_expression(_load(args.expr, "local_expression"))
    return io.local_element_json(rings.local_normal_form(expr))


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropsh", description="Exact computations on tropicalized log Calabi-Yau surfaces.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group, name, func, help, needs_input=True):
        p = group.add_parser(name, help=help)
        if needs_input:
            p.add_argument("-i", "--input", required=True, help="project JSON file, '-' for stdin")
        p.set_defaults(func=func)
        return p

    trop = groups.add_parser("trop", help="the integral affine manifold").add_subparsers(
        dest="command", required=True)
    command(trop, "build", cmd_build, "charts, transition matrices and monodromy")
    p = command(trop, "points", cmd_points, "integral points up to a coordinate bound")
    p.add_argument("--bound", type=int, default=2)
    command(trop, "monodromy", cmd_monodromy, "monodromy around the origin")
    command(trop, "linear-functions", cmd_linear_functions, "basis of global linear functions")
    p = command(trop, "transport", cmd_transport, "carry a tangent vector between charts")
    p.add_argument("--from", dest="source", type=int, required=True)
    p.add_argument("--to", dest="target", type=int, required=True)
    p.add_argument("--vector", type=_pair_arg, required=True, help="a,b")
    p.add_argument("--direction", choices=["ccw", "cw"], default="ccw")
    p.add_argument("--turns", type=int, default=0)

    lv = groups.add_parser("liouville", help="the polygonal Liouville path").add_subparsers(
        dest="command", required=True)
    command(lv, "synth", cmd_synth, "corner covectors from ample data")
    p = command(lv, "check", cmd_check, "contact and convexity checks")
    p.add_argument("--reverse", action="store_true", help="check the reversed path")
    p = command(lv, "lengths", cmd_lengths, "orbit lengths of integral points")
    p.add_argument("--bound", type=int, default=2)
    p = command(lv, "filter", cmd_filter, "theta generators below a slope")
    p.add_argument("--slope", type=_rational_arg, required=True)

    br = groups.add_parser("broken", help="broken line diagrams").add_subparsers(
        dest="command", required=True)
    for name, func, help in (
        ("validate", cmd_validate, "run every diagram check"),
        ("class", cmd_class, "homology class and localization"),
        ("render", cmd_render, "write an SVG picture"),
    ):
        p = command(br, name, func, help)
        p.add_argument("--diagram", type=int, default=0, help="index into the project's diagrams")
        if name == "render":
            p.add_argument("--out", required=True, help="SVG file to write")
            p.add_argument("--bound", type=int, default=3)
            p.add_argument("--no-diagram", action="store_true")

    ho = groups.add_parser("homology", help="intersection numbers and P").add_subparsers(
        dest="command", required=True)
    for name, func, help in (
        ("pair", cmd_pair, "intersection numbers with every D_i"),
        ("certify", cmd_certify, "verify a P-certificate"),
        ("degree", cmd_degree, "degree against the ample data"),
    ):
        p = command(ho, name, func, help)
        p.add_argument("--class", dest="cls", required=True, help="class JSON file")

    ring = groups.add_parser("ring", help="ring arithmetic").add_subparsers(
        dest="command", required=True)
    p = command(ring, "vertex-mul", cmd_vertex_mul, "product in the vertex ring")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p = command(ring, "local-mul", cmd_local_mul, "product in K[x,y][(xy-1)^-1]",
                needs_input=False)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p = command(ring, "monoid-mul", cmd_monoid_mul, "truncated product in K[P]")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--trunc", type=_rational_arg, required=True)
    p = command(ring, "normal-form", cmd_normal_form, "rewrite x^a y^b u^c in the basis",
                needs_input=False)
    p.add_argument("--expr", required=True)
    return parser


# errors that mean the user's input is at fault
MALFORMED = (
    io.InputError, manifold.BadInput, manifold.NegativeCoords, manifold.NotLinear,
    liouville.BadAmpleData, liouville.SlopeOnSpectrum, liouville.OriginHasNoOrbit,
    bl.MalformedDiagram, rings.UnsupportedBoundaryLength, rings.UncertifiedClass,
    homology.UnknownClassName, ValueError, ZeroDivisionError,
)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        out = args.func(args)
    except CheckFailed as exc:
        sys.stdout.write(io.dumps(exc.report) + "\n")
        return 1
    except MALFORMED as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2
    sys.stdout.write(io.dumps(out) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
