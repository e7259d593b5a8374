from fractions import Fraction

import pytest

from ayrel.canonical import delaunay, iso_check, strip_regular_vertices
from ayrel.errors import GluingMismatch, SegmentHitsSingularity
from ayrel.field import NFElem, ZERO
from ayrel.geom import Mat2, Vec2, g_tilde, minus_identity, rot90, shear_h
from ayrel.mesh import MeshBuilder
from ayrel.surface import BLACK, Surface, build_surface
from ayrel.trace import trace


def square_torus(w=1, h=1):
    loop = [Vec2(0, 0), Vec2(w, 0), Vec2(w, h), Vec2(0, h)]
    return build_surface([loop], [((0, 0), (0, 2)), ((0, 1), (0, 3))])


def test_square_torus_basics():
    s = square_torus()
    assert s.num_triangles() == 2
    assert len(s.vertex_classes()) == 1
    assert s.cone_angle(0) == 2
    assert s.stratum_check() == (1, ())
    assert s.area() == NFElem(1)


def test_bad_pairing_raises():
    loop = [Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)]
    with pytest.raises(GluingMismatch):
        build_surface([loop], [((0, 0), (0, 1)), ((0, 2), (0, 3))])


def test_area_scales_by_det():
    s = square_torus(2, 1)
    assert s.area() == NFElem(2)
    m = Mat2(3, 1, 0, 1)
    assert s.linear_apply(m).area() == NFElem(6)
    assert s.linear_apply(minus_identity()).area() == NFElem(2)
    assert s.linear_apply(g_tilde()).area() == NFElem(2)


def test_reflection_keeps_orientation():
    s = square_torus()
    r = s.linear_apply(Mat2(1, 0, 0, -1))
    r.validate()
    assert r.area() == s.area()


def test_json_round_trip():
    s = square_torus(2, 3)
    s2 = Surface.from_json(s.to_json())
    assert s2.area() == s.area()
    assert iso_check(s, s2) is not None


def test_iso_square_vs_sheared():
    s = square_torus()
    sheared = s.linear_apply(shear_h(1))
    assert iso_check(s, sheared) is not None
    big = s.linear_apply(shear_h(3))
    assert iso_check(s, big) is not None
    frac = s.linear_apply(shear_h(Fraction(1, 2)))
    assert iso_check(s, frac) is None


def test_iso_distinguishes_moduli():
    assert iso_check(square_torus(1, 1), square_torus(2, 1)) is None
    wide = square_torus().linear_apply(Mat2(2, 0, 0, Fraction(1, 2)))
    # same area, different modulus
    assert wide.area() == NFElem(1)
    assert iso_check(square_torus(1, 1), wide) is None


def bottom_edge(s):
    return next((t, e) for (t, e) in s.edges()
                if s.vertex(t, e) == Vec2(0, 0)
                and s.edge_vector(t, e) == Vec2(1, 0))


def test_iso_reflexive_after_retriangulation():
    s = square_torus()
    mb = MeshBuilder(s)
    mb.split_edge(bottom_edge(s), Vec2(Fraction(1, 3), 0))
    s2 = mb.to_surface()
    assert s2.num_triangles() == 4
    assert s2.area() == s.area()
    assert iso_check(s, s2) is not None


def test_strip_regular_keeps_last_vertex():
    s = square_torus()
    mb = MeshBuilder(s)
    mb.split_edge(bottom_edge(s), Vec2(Fraction(1, 2), 0))
    s2 = mb.to_surface()
    stripped = strip_regular_vertices(s2)
    # the split point goes away, the original marked point must survive
    assert len(stripped.vertex_classes()) == 1
    assert stripped.area() == s.area()


def test_delaunay_is_isomorphic_and_legal():
    s = square_torus().linear_apply(shear_h(5))
    d = delaunay(s)
    d.validate()
    assert d.area() == s.area()
    assert iso_check(d, square_torus()) is not None


def test_trace_up_on_torus():
    s = square_torus()
    # germ straight up from the marked point, three full loops
    occ = None
    from ayrel.trace import occurrences_at
    for o in occurrences_at(s, (0, 0), Vec2(0, 1)):
        occ = o
        break
    out = trace(s, ("vertex", occ), Vec2(0, 1),
                max_displacement=Vec2(0, 3), stop_labels=())
    assert out.kind == "end"
    assert out.consumed == Vec2(0, 3)


def test_trace_diagonal_on_torus():
    s = square_torus()
    from ayrel.trace import occurrences_at
    d = Vec2(1, 2)
    occs = [o for o in occurrences_at(s, (0, 0), d)]
    out = trace(s, ("vertex", occs[0]), d, max_displacement=d,
                stop_labels=())
    assert out.kind == "end"
    assert out.consumed == d
    assert out.corner is not None  # lands back on the marked point


def test_embed_segment_interior_end():
    s = square_torus()
    mb = MeshBuilder(s)
    d = Vec2(Fraction(1, 3), Fraction(1, 5))
    occs = mb.direction_occurrences((0, 0), d)
    chain, end = mb.embed_segment(occs[0], d, stop_labels=())
    s2 = mb.to_surface()
    total = Vec2(ZERO, ZERO)
    for ref in chain:
        total = total + mb.edge_vector(*ref)
    assert total == d
    assert s2.area() == s.area()


def test_embed_segment_wrapping():
    s = square_torus()
    mb = MeshBuilder(s)
    d = Vec2(2, 3)
    occs = mb.direction_occurrences((0, 0), d)
    chain, end = mb.embed_segment(occs[0], d, stop_labels=())
    total = Vec2(ZERO, ZERO)
    for ref in chain:
        total = total + mb.edge_vector(*ref)
    assert total == d
    s2 = mb.to_surface()
    assert s2.area() == s.area()
    assert s2.stratum_check() == (1, ())
    # stripping removes most helper vertices and stays a flat torus
    st = strip_regular_vertices(s2)
    assert st.stratum_check() == (1, ())
    assert len(st.vertex_classes()) <= 2
    assert iso_check(s2, s2) is not None


def test_embed_segment_singular_stop():
    # mark the torus point black: segments through it must refuse
    s = square_torus()
    labs = [tuple(BLACK for _ in range(3)) for _ in s.labels]
    s = Surface(s.triangles, s.gluing, labs)
    mb = MeshBuilder(s)
    d = Vec2(2, 2)
    occs = mb.direction_occurrences((0, 0), d)
    with pytest.raises(SegmentHitsSingularity):
        mb.embed_segment(occs[0], d)


def test_rot90_and_matrices():
    r = rot90()
    assert r.apply(Vec2(1, 0)) == Vec2(0, 1)
    assert (r ** 4).apply(Vec2(2, 3)) == Vec2(2, 3)
    g = g_tilde()
    gi = g.inverse()
    assert (g * gi).apply(Vec2(5, 7)) == Vec2(5, 7)


def test_cut_paste_preserves_surface():
    from fractions import Fraction as F
    from ayrel.canonical import cut_paste
    from ayrel.family import build_xr
    base = build_xr(1).surface
    cut = cut_paste(base, (0, (F(1, 3), F(1, 3), F(1, 3))),
                    Vec2(Fraction(1, 5), Fraction(1, 7)))
    assert cut.num_triangles() > base.num_triangles()
    assert cut.area() == base.area()
    assert cut.stratum_check() == base.stratum_check()
    assert iso_check(cut, base) is not None


def test_cut_paste_along_existing_edge():
    from ayrel.canonical import cut_paste
    s = square_torus()
    vec = s.edge_vector(0, 0)
    # start at the vertex and cut along an existing edge: a no-op up to iso
    cut = cut_paste(s, (0, (1, 0, 0)), vec)
    assert iso_check(cut, s) is not None


def test_cut_paste_refuses_self_overlap():
    from ayrel.canonical import cut_paste
    from ayrel.errors import SegmentNotEmbedded
    from ayrel.family import build_xr
    base = build_xr(1).surface
    # a long vertical cut wraps its cylinder and runs over itself
    with pytest.raises(SegmentNotEmbedded):
        cut_paste(base, (0, (Fraction(1, 3), Fraction(1, 3),
                             Fraction(1, 3))), Vec2(0, 10))


def test_holonomy_path_errors():
    from ayrel.errors import DisconnectedPath
    from ayrel.family import build_xr
    s = square_torus()
    assert s.holonomy([]) == Vec2(0, 0)
    multi = build_xr(1).surface
    edges = list(multi.edges())
    bad = None
    for a in edges:
        for b in edges:
            end = multi.class_of((a[0], (a[1] + 1) % 3))
            start = multi.class_of(b)
            if end != start:
                bad = [(a[0], a[1], 1), (b[0], b[1], 1)]
                break
        if bad:
            break
    with pytest.raises(DisconnectedPath):
        multi.holonomy(bad)
