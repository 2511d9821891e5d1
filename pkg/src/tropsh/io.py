"""JSON documents in and out.

Rationals are always written as strings (``"3/2"``, ``"2"``) so nothing is
lost to floating point.  Inputs are checked against the schemas shipped in
``tropsh/schemas`` before they are turned into objects.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema
from referencing import Registry, Resource

from tropsh.broken_lines import BrokenLineDiagram, Edge, Leg
from tropsh.homology import (
    ClassExpr,
    IntersectionLattice,
    PCertificate,
    Summand,
    boundary_certificate,
    intersection_lattice,
)
from tropsh.lattice import Mat2Z, Vec2Z, scalar_str, to_scalar
from tropsh.liouville import AmpleData
from tropsh.manifold import BoundaryData, TropManifold, TropPoint, build
from tropsh.rings import LocalElement, MonoidRingElement, VertexElement

SCHEMAS = (
    "common", "project", "diagram", "vertex_element", "local_element",
    "local_expression", "monoid_element", "class_query",
)


class InputError(ValueError):
    """The document is not JSON, or does not fit its schema."""


@lru_cache(maxsize=None)
def _schema(name: str) -> dict:
    text = resources.files("tropsh").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    return Registry().with_resources(
        (f"{name}.schema.json", Resource.from_contents(_schema(name))) for name in SCHEMAS
    )


def check_schema(doc: Any, name: str) -> None:
    validator = jsonschema.Draft202012Validator(_schema(name), registry=_registry())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise InputError(f"{name}: at {where}: {err.message}")


def read_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def dumps(doc: Any) -> str:
    """Compact, key-order-preserving JSON; the byte form every command emits."""
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


# -- parsing -------------------------------------------------------------------


def _vec(pair) -> Vec2Z:
    return Vec2Z(int(pair[0]), int(pair[1]))


def parse_point(doc: dict) -> TropPoint:
    return TropPoint(doc["chart"], tuple(to_scalar(x) for x in doc["coords"]))


def parse_boundary(doc: dict) -> BoundaryData:
    ks = doc["self_intersections"]
    n = doc.get("n", len(ks))
    if n != len(ks):
        raise InputError(f"n = {n} but {len(ks)} self-intersections given")
    return BoundaryData(n, tuple(ks))


def parse_manifold(doc: dict) -> TropManifold:
    return build(parse_boundary(doc))


def parse_ample(doc: dict) -> AmpleData | None:
    if "ample" not in doc:
        return None
    return AmpleData([to_scalar(x) for x in doc["ample"]])


def parse_lattice(doc: dict) -> IntersectionLattice:
    extra = {}
    for item in doc.get("extra_classes", []):
        if item["name"] in extra:
            raise InputError(f"extra class {item['name']!r} declared twice")
        extra[item["name"]] = item["pairings"]
    return intersection_lattice(parse_boundary(doc), extra)


def parse_diagram(doc: dict) -> BrokenLineDiagram:
    vertices = tuple(parse_point(v) for v in doc["vertices"])
    edges = tuple(
        Edge(
            e["source"], e["target"], e["chart"], _vec(e["tangent"]),
            e.get("weight", 1),
            tuple(e["charts"]) if "charts" in e else None,
        )
        for e in doc.get("edges", [])
    )
    legs = tuple(
        Leg(l["vertex"], l["chart"], _vec(l["class"]), l["kind"])
        for l in doc.get("legs", [])
    )
    return BrokenLineDiagram(vertices, edges, legs)


def project_diagrams(doc: dict) -> list[BrokenLineDiagram]:
    out = []
    if "diagram" in doc:
        out.append(parse_diagram(doc["diagram"]))
    out.extend(parse_diagram(d) for d in doc.get("diagrams", []))
    return out


def parse_class(doc: dict, n: int) -> ClassExpr:
    boundary = tuple(doc["boundary"])
    if len(boundary) != n:
        raise InputError(f"class needs {n} boundary coefficients, got {len(boundary)}")
    return ClassExpr(boundary, tuple(sorted(doc.get("extra", {}).items())))


def parse_certificate(items: list, n: int) -> PCertificate:
    summands = []
    for s in items:
        if "boundary" in s:
            summands.append(Summand.boundary(s["boundary"], s.get("mult", 1)))
        else:
            summands.append(Summand.generator(parse_class(s["C"], n)))
    return PCertificate(tuple(summands))


def parse_vertex_element(m: TropManifold, doc: dict) -> VertexElement:
    acc: dict[TropPoint, Fraction] = {}
    for t in doc["terms"]:
        p = parse_point(t["point"])
        acc[p] = acc.get(p, Fraction(0)) + to_scalar(t["coeff"])
    return VertexElement.from_dict(m, acc)


def parse_local_element(doc: dict) -> LocalElement:
    acc: dict = {}
    for t in doc["terms"]:
        idx = (t["branch"], t["exp"], t["upow"])
        if idx[0] == "y" and idx[1] == 0:
            raise InputError("y-branch basis elements need exp >= 1")
        acc[idx] = acc.get(idx, Fraction(0)) + to_scalar(t["coeff"])
    return LocalElement.from_dict(acc)


def parse_local_expression(doc: dict) -> list[tuple[Fraction, int, int, int]]:
    return [
        (to_scalar(t["coeff"]), t.get("x", 0), t.get("y", 0), t.get("u", 0))
        for t in doc["terms"]
    ]


def parse_monoid_element(lattice: IntersectionLattice, doc: dict) -> MonoidRingElement:
    terms = []
    for t in doc["terms"]:
        c = parse_class(t["class"], lattice.n)
        if "certificate" in t:
            cert = parse_certificate(t["certificate"], lattice.n)
        elif not c.extra:
            cert = boundary_certificate(c.boundary)
        else:
            raise InputError("classes with extra parts need an explicit certificate")
        terms.append((c, cert, to_scalar(t["coeff"])))
    return MonoidRingElement.build(lattice, terms)


# -- serialization -------------------------------------------------------------


def point_json(p: TropPoint) -> dict:
    return {"chart": p.chart, "coords": [scalar_str(p.a), scalar_str(p.b)]}


def matrix_json(mat: Mat2Z) -> list[list[int]]:
    return mat.rows()


def diagram_json(d: BrokenLineDiagram) -> dict:
    edges = []
    for e in d.edges:
        item = {
            "source": e.source, "target": e.target, "chart": e.chart,
            "tangent": list(e.tangent.as_tuple()), "weight": e.weight,
        }
        if e.charts is not None:
            item["charts"] = list(e.charts)
        edges.append(item)
    return {
        "vertices": [point_json(v) for v in d.vertices],
        "edges": edges,
        "legs": [
            {"vertex": l.vertex, "chart": l.chart, "class": list(l.cls.as_tuple()), "kind": l.kind}
            for l in d.legs
        ],
    }


def class_json(c: ClassExpr) -> dict:
    out: dict = {"boundary": list(c.boundary)}
    if c.extra:
        out["extra"] = dict(c.extra)
    return out


def certificate_json(cert: PCertificate) -> list[dict]:
    out = []
    for s in cert.summands:
        if s.kind == "boundary":
            out.append({"boundary": s.index, "mult": s.mult})
        else:
            out.append({"C": class_json(s.expr)})
    return out


def vertex_element_json(e: VertexElement) -> dict:
    return {"terms": [{"point": point_json(p), "coeff": scalar_str(c)} for p, c in e.terms]}


def local_element_json(e: LocalElement) -> dict:
    return {"terms": [
        {"branch": b, "exp": x, "upow": u, "coeff": scalar_str(c)} for (b, x, u), c in e.terms
    ]}


def monoid_element_json(e: MonoidRingElement) -> dict:
    certs = dict(e.certificates)
    return {"terms": [
        {"class": class_json(c), "certificate": certificate_json(certs[c]), "coeff": scalar_str(x)}
        for c, x in e.terms
    ]}
