import random
import xml.etree.ElementTree as ET
from dataclasses import replace
from fractions import Fraction

import pytest

from generators import random_trees
from tropsh import io
from tropsh.broken_lines import (
    INPUT,
    OUTPUT,
    BrokenLineDiagram,
    Check,
    Edge,
    Leg,
    MalformedDiagram,
    NotValidated,
    diagram_geometry,
    homology_class,
    is_localized,
    scaled,
    trace_line,
    validate,
    vertex_flux,
)
from tropsh.homology import boundary_certificate, intersection_lattice, verify_P_certificate, ClassExpr
from tropsh.lattice import Vec2Z, wedge
from tropsh.liouville import AmpleData, synthesize
from tropsh.manifold import TropPoint, from_ks
from tropsh.render import developed_rays, render_svg

SQUARE = (0, 0, 0, 0)


def figure():
    m = from_ks(SQUARE)
    d = BrokenLineDiagram(
        (TropPoint(2, (1, 1)),),
        (),
        (
            Leg(0, 2, Vec2Z(2, 0), INPUT),
            Leg(0, 1, Vec2Z(1, 1), INPUT),
            Leg(0, 2, Vec2Z(1, 1), OUTPUT),
        ),
    )
    return m, synthesize(m, AmpleData([1, 1, 1, 1])), d


def refined_figure():
    """The figure with the slope -1 leg started from a second vertex."""
    m, path, _ = figure()
    d = BrokenLineDiagram(
        (TropPoint(2, (1, 1)), TropPoint(2, (Fraction(1, 2), Fraction(3, 2)))),
        (Edge(0, 1, 2, Vec2Z(-1, 1), 1),),
        (
            Leg(0, 2, Vec2Z(2, 0), INPUT),
            Leg(1, 1, Vec2Z(1, 1), INPUT),
            Leg(0, 2, Vec2Z(1, 1), OUTPUT),
        ),
    )
    return m, path, d


def cylinder():
    m = from_ks(SQUARE)
    d = BrokenLineDiagram(
        (TropPoint(1, (1, 0)),),
        (),
        (Leg(0, 1, Vec2Z(1, 0), INPUT), Leg(0, 1, Vec2Z(1, 0), OUTPUT)),
    )
    return m, synthesize(m, AmpleData([1, 1, 1, 1])), d


def test_figure_validates():
    m, path, d = figure()
    report = validate(m, path, d)
    assert report.ok
    assert [c.name for c in report.checks] == ["sector", "balancing", "legs", "monotonicity"]
    assert report.balance[0] == Vec2Z(0, 0)


def test_figure_class_and_localization():
    m, path, d = figure()
    assert homology_class(m, d, path) == [1, 0, 0, 0]
    assert is_localized(m, d, path) is None
    assert homology_class(m, scaled(d, 2), path) == [2, 0, 0, 0]


def test_figure_matches_fixture_file(fig_doc):
    m, _, d = figure()
    assert io.parse_diagram(fig_doc["diagram"]) == d
    assert io.parse_manifold(fig_doc) == m


def test_refined_figure():
    m, path, d = refined_figure()
    assert validate(m, path, d).ok
    assert homology_class(m, d, path) == [1, 0, 0, 0]
    assert is_localized(m, d, path) is None


def test_figure_weight_one_fails_balancing():
    m, path, d = figure()
    bad = replace(d, legs=(Leg(0, 2, Vec2Z(1, 0), INPUT),) + d.legs[1:])
    report = validate(m, path, bad)
    assert not report.check("balancing").ok
    with pytest.raises(NotValidated):
        homology_class(m, bad)


def _leg_class_perturbations(d):
    for k, leg in enumerate(d.legs):
        for da, db in [(1, 0), (-1, 0), (0, 1), (0, -1)]:
            cls = Vec2Z(leg.cls.a + da, leg.cls.b + db)
            if cls.a < 0 or cls.b < 0 or cls.is_zero():
                continue
            legs = list(d.legs)
            legs[k] = replace(leg, cls=cls)
            yield replace(d, legs=tuple(legs))


def test_figure_single_field_perturbations_fail():
    m, path, d = figure()
    variants = list(_leg_class_perturbations(d))
    m, path, r = refined_figure()
    variants += list(_leg_class_perturbations(r))
    e = r.edges[0]
    variants.append(replace(r, edges=(replace(e, weight=2),)))
    for t in [(-1, 2), (-2, 1), (0, 1), (1, -1), (-1, 0), (1, 1)]:
        variants.append(replace(r, edges=(replace(e, tangent=Vec2Z(*t)),)))
    assert len(variants) > 20
    for v in variants:
        assert not validate(m, path, v).ok, v


def test_cylinder():
    m, path, d = cylinder()
    assert validate(m, path, d).ok
    assert homology_class(m, d, path) == [0, 0, 0, 0]
    assert is_localized(m, d, path) == 1


def test_localized_interior_diagram():
    m, path, _ = figure()
    d = BrokenLineDiagram(
        (TropPoint(1, (2, 1)),),
        (),
        (Leg(0, 1, Vec2Z(1, 1), INPUT), Leg(0, 1, Vec2Z(1, 0), INPUT),
         Leg(0, 1, Vec2Z(2, 1), OUTPUT)),
    )
    assert validate(m, path, d).ok
    assert homology_class(m, d, path) == [0, 0, 0, 0]
    assert is_localized(m, d, path) == 1


def test_malformed():
    m, _, d = figure()
    with pytest.raises(MalformedDiagram):
        validate(m, None, replace(d, vertices=(TropPoint(1, (0, 0)),)))
    two = (TropPoint(1, (1, 1)), TropPoint(1, (2, 2)))
    with pytest.raises(MalformedDiagram):
        validate(m, None, BrokenLineDiagram(two, (Edge(0, 1, 1, Vec2Z(2, 2)),), ()))
    with pytest.raises(MalformedDiagram):
        validate(m, None, BrokenLineDiagram(two, (Edge(0, 1, 1, Vec2Z(1, 1)),) * 2, ()))
    with pytest.raises(MalformedDiagram):
        validate(m, None, BrokenLineDiagram(two, (Edge(0, 1, 1, Vec2Z(1, 1), 0),), ()))


def test_vertex_flux_on_ray_agrees_both_sides():
    m = from_ks(SQUARE)
    # vertex on the ray of D_1 with a segment crossing straight through it
    d = BrokenLineDiagram(
        (TropPoint(1, (2, 0)),),
        (),
        (Leg(0, 1, Vec2Z(1, 1), INPUT), Leg(0, 2, Vec2Z(1, 1), INPUT),
         Leg(0, 1, Vec2Z(2, 0), OUTPUT)),
    )
    report = validate(m, None, d)
    assert report.ok, report
    near, far = vertex_flux(m, d, 0)
    assert near == far == 1
    assert homology_class(m, d) == [1, 0, 0, 0]


GENERATED = [(0, 0, 0, 0), (1, 1, 1), (-1, -1, -1), (4, 1), (-1, -1, -1, -1, -1), (2, -1, 0, 1)]


@pytest.mark.parametrize("ks", GENERATED)
def test_generated_zero_class_iff_localized(ks):
    m = from_ks(ks)
    path = synthesize(m, AmpleData([1] * len(ks)))
    diagrams = random_trees(m, 40, seed=hash(ks) % 1000, path=path)
    assert len(diagrams) == 40
    for d in diagrams:
        zero = not any(homology_class(m, d, path))
        assert zero == (is_localized(m, d, path) is not None)


@pytest.mark.parametrize("ks", GENERATED)
def test_crossing_weight_is_chart_independent(ks):
    m = from_ks(ks)
    for d in random_trees(m, 20, seed=5):
        geo = diagram_geometry(m, d, Check("sector"), Check("legs"))
        for tr in list(geo.edge_traces) + list(geo.leg_traces.values()):
            for c in tr.crossings:
                before = abs(wedge(m.ray_vector(c.ray, c.chart_from), c.before))
                after = abs(wedge(m.ray_vector(c.ray, c.chart_to), c.after))
                assert before == after


@pytest.mark.parametrize("ks", GENERATED)
def test_classes_certify_with_boundary_certificates(ks):
    m = from_ks(ks)
    lattice = intersection_lattice(m.boundary)
    for d in random_trees(m, 20, seed=9):
        cls = homology_class(m, d)
        assert all(x >= 0 for x in cls)
        assert verify_P_certificate(lattice, ClassExpr(tuple(cls)), boundary_certificate(cls)).ok


def _refine(m, d, rng):
    """Insert a 2-valent vertex in the interior of some edge, or None."""
    k = rng.randrange(len(d.edges))
    e = d.edges[k]
    src = d.vertices[e.source]
    tr = trace_line(m, e.chart, _in_chart(m, src, e.chart), e.tangent,
                    target=d.vertices[e.target])
    piece = rng.choice(tr.pieces)
    s = Fraction(rng.randint(1, 5), 6)
    x = piece.start[0] + s * (piece.end[0] - piece.start[0])
    y = piece.start[1] + s * (piece.end[1] - piece.start[1])
    if x <= 0 or y <= 0:
        return None
    mid = TropPoint(piece.chart, (x, y))
    new = len(d.vertices)
    edges = list(d.edges)
    edges[k] = Edge(e.source, new, e.chart, e.tangent, e.weight)
    edges.append(Edge(new, e.target, piece.chart, piece.direction, e.weight))
    return BrokenLineDiagram(d.vertices + (mid,), tuple(edges), d.legs)


def _in_chart(m, p, chart):
    from tropsh.manifold import in_closed_cone
    return in_closed_cone(m, p, chart).coords


@pytest.mark.parametrize("ks", GENERATED)
def test_refinement_keeps_balance_and_class(ks):
    m = from_ks(ks)
    rng = random.Random(13)
    checked = 0
    for d in random_trees(m, 30, seed=17, local_share=0.2):
        if not d.edges:
            continue
        r = _refine(m, d, rng)
        if r is None:
            continue
        report = validate(m, None, r)
        assert report.ok
        assert all(v.is_zero() for v in report.balance.values())
        assert homology_class(m, r) == homology_class(m, d)
        assert (is_localized(m, r) is None) == (is_localized(m, d) is None)
        checked += 1
    assert checked >= 5


def test_interior_vertices_balance_directly():
    m = from_ks((1, 1, 1))
    for d in random_trees(m, 30, seed=23):
        geo = diagram_geometry(m, d, Check("sector"), Check("legs"))
        for i, v in enumerate(geo.canonical):
            if v.a > 0 and v.b > 0:
                total = Vec2Z(0, 0)
                for vec, _ in geo.outgoing[i]:
                    total = total + vec
                assert total.is_zero()


# -- rendering ---------------------------------------------------------------

SVG = "{http://www.w3.org/2000/svg}"


def test_render_p2_rays():
    m = from_ks((1, 1, 1))
    assert developed_rays(m) == [(1, 0), (-1, -1), (0, 1)]
    root = ET.fromstring(render_svg(m))
    labels = sorted(t.text for t in root.iter(SVG + "text"))
    assert labels == ["D_1", "D_2", "D_3"]


def test_render_is_deterministic():
    m, path, d = figure()
    assert render_svg(m, d, path) == render_svg(m, d, path)
    root = ET.fromstring(render_svg(m, d, path))
    classes = [el.get("class") for el in root]
    assert "leg-in" in classes and "leg-out" in classes and "vertex" in classes
    assert any(t.text == "2" for t in root.iter(SVG + "text"))


def test_render_bound_zero_has_only_origin():
    root = ET.fromstring(render_svg(from_ks((1, 1, 1, 1, 1)), bound=0))
    dots = [c for c in root.iter(SVG + "circle")]
    assert [c.get("class") for c in dots] == ["origin"]
