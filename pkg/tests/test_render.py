from fractions import Fraction

import pytest

from peritrope import (
    Digraph,
    PespInstance,
    default_basis,
    lattice_points,
    parse_instance,
    polytrope_build,
    polytrope_polygon,
    render_torus,
    render_zonotope,
)
from peritrope.render import _fmt
from helpers import square_basis, square_instance, triangle_instance


def _triangle():
    inst = triangle_instance()
    return inst, default_basis(inst.graph)


def _mu2_instance():
    g = Digraph(("v0", "v1", "v2"), (("v0", "v1"), ("v0", "v2"), ("v1", "v2"), ("v0", "v1")))
    return PespInstance(g, 10, (3, 2, 4, 2), (12, 10, 13, 9), (1, 1, 1, 1))


def test_fmt():
    assert _fmt(Fraction(5, 2)) == "2.5"
    assert _fmt(Fraction(-3, 10)) == "-0.3"
    assert _fmt(Fraction(1, 8)) == "0.125"
    assert _fmt(Fraction(7)) == "7"
    assert _fmt(Fraction(1, 3)) == "0.3333"
    assert _fmt(Fraction(-2, 3)) == "-0.6667"
    # values rounding to zero must not come out as "-0"
    assert _fmt(Fraction(-1, 99999)) == "0"
    assert _fmt(Fraction(-1, 100000)) == "-0.00001"


def test_polygon_vertex_counts():
    inst, basis = _triangle()
    counts = []
    for z in (0, 1, 2):
        poly = polytrope_build(inst, basis, (0, 0, z))
        counts.append(len(polytrope_polygon(poly)))
    assert counts == [3, 6, 3]


def test_polygon_needs_three_vertices():
    sq = square_instance()
    poly = polytrope_build(sq, square_basis(), (0, 1, 0, 0, 0, 1))
    with pytest.raises(ValueError):
        polytrope_polygon(poly)


def test_torus_render_markers():
    inst, basis = _triangle()
    svg = render_torus(inst, basis)
    assert svg.startswith("<?xml")
    assert svg.rstrip().endswith("</svg>")
    # the three classes wrap into five clipped pieces on the fundamental square
    assert svg.count("<polygon") == 5
    assert svg.count("<text") == 5
    assert ">0 0 1<" in svg
    assert ">1 0 1<" in svg
    assert "#66c2a5" in svg


def test_zonotope_segment_render():
    inst, basis = _triangle()
    svg = render_zonotope(inst, basis, root="v1")
    assert svg.count("<circle") == 3
    for label in ("-0.3", "0.6", "1.4", "2.3"):
        assert f">{label}<" in svg
    # a different tiling root moves the interior breakpoint, not the ends
    default = render_zonotope(inst, basis)
    assert ">1.5<" in default
    assert default.count("<circle") == 3


def test_zonotope_point_render():
    inst = parse_instance("PERIOD 10\nARC a b 2 6 1\n")
    svg = render_zonotope(inst, default_basis(inst.graph))
    assert svg.count("<circle") == 1


def test_zonotope_parallelogram_render():
    inst = _mu2_instance()
    basis = default_basis(inst.graph)
    svg = render_zonotope(inst, basis)
    assert svg.count("<polygon") == 5
    assert svg.count("<circle") == len(lattice_points(inst, basis))


def test_zonotope_rejects_high_dimensions():
    sq = square_instance()
    with pytest.raises(ValueError):
        render_zonotope(sq, square_basis())


def test_renders_are_deterministic():
    inst, basis = _triangle()
    assert render_torus(inst, basis) == render_torus(inst, basis)
    assert render_zonotope(inst, basis) == render_zonotope(inst, basis)
    mu2 = _mu2_instance()
    b2 = default_basis(mu2.graph)
    assert render_zonotope(mu2, b2) == render_zonotope(mu2, b2)
