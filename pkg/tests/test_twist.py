from fractions import Fraction

import pytest

from ayrel.canonical import iso_check
from ayrel.errors import MixedBoundary
from ayrel.family import build_xr
from ayrel.field import NFElem, alpha_power
from ayrel.geom import Vec2
from ayrel.cylinders import vertical_decomposition
from ayrel.rel import rel_apply
from ayrel.surface import BLACK, Surface, build_surface
from ayrel.twist import (dominant_eigenvector_check, extract_chart,
                         orbit_closure, rational_rank_of_reciprocals)


def chart_at(r):
    ay = build_xr(NFElem.coerce(r))
    return ay, extract_chart(vertical_decomposition(ay))


def test_round_trip_and_lattice():
    ay, chart = chart_at(Fraction(3, 2))
    assert iso_check(chart.rebuild(), ay.surface) is not None
    tw = chart.twists()
    bumped = list(tw)
    bumped[2] = bumped[2] + chart.circumferences()[2]
    assert iso_check(chart.rebuild(bumped), ay.surface) is not None


def test_generic_twist_changes_the_surface():
    ay, chart = chart_at(Fraction(3, 2))
    tw = list(chart.twists())
    tw[1] = tw[1] + NFElem(Fraction(1, 17))
    assert iso_check(chart.rebuild(tw), ay.surface) is None


def test_rel_v_is_the_twist_flow():
    ay, chart = chart_at(Fraction(7, 5))
    s = NFElem(Fraction(3, 11))
    via_chart = chart.rel_v(s).rebuild()
    via_surgery = rel_apply(ay.surface, (0, s))
    assert iso_check(via_chart, via_surgery) is not None


def test_rel_v_multi_twist_period():
    ay, chart = chart_at(Fraction(3, 2))
    w = chart.w_vector()
    # a twist shift equal to c_i * w_i on each cylinder is a multi-twist
    shift = [c * wi for c, wi in zip(chart.circumferences(), w)]
    tw = [y + d for y, d in zip(chart.twists(), shift)]
    assert iso_check(chart.rebuild(tw), ay.surface) is not None


def test_orbit_closure_dimension_three():
    from ayrel import linalg
    for r in (Fraction(3, 2), Fraction(9, 8), Fraction(7, 4)):
        _ay, chart = chart_at(r)
        oc = orbit_closure(chart)
        assert oc.dimension == 3
        assert len(oc.basis) == 3
        # the torus-coordinate direction (w_i / c_i) lies in the real span
        # of the rational basis: each rational coordinate slice must solve
        matrix = [[oc.basis[j][i] for j in range(len(oc.basis))]
                  for i in range(chart.m)]
        direction = [NFElem.coerce(wi) / ci
                     for wi, ci in zip(oc.w, chart.circumferences())]
        for comp in range(3):
            rhs = [d.coords()[comp] for d in direction]
            assert linalg.solve(matrix, rhs) is not None


def test_orbit_closure_renormalization_invariant():
    _ay, chart = chart_at(Fraction(6, 5))
    _ay2, chart2 = chart_at(NFElem(Fraction(6, 5)) * alpha_power(-1))
    assert orbit_closure(chart).dimension == \
        orbit_closure(chart2).dimension == 3


def test_mixed_boundary_at_power_of_alpha():
    _ay, chart = chart_at(1)
    with pytest.raises(MixedBoundary):
        chart.w_vector()
    with pytest.raises(MixedBoundary):
        orbit_closure(chart)
    # the derived oracle still reports rank 3 for the three reciprocals
    assert rational_rank_of_reciprocals(chart.circumferences()) == 3


def test_single_cylinder_torus_chart():
    loop = [Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)]
    s = build_surface([loop], [((0, 0), (0, 2)), ((0, 1), (0, 3))])
    labs = [tuple(BLACK for _ in range(3)) for _ in s.labels]
    s = Surface(s.triangles, s.gluing, labs)
    d = vertical_decomposition(s)
    assert len(d.cylinders) == 1
    chart = extract_chart(d)
    assert chart.circumferences() == [NFElem(1)]
    assert chart.w_vector() == [0]  # same singularity on both sides
    assert orbit_closure(chart).dimension == 0
    assert iso_check(chart.rebuild(), s) is not None


def test_dominant_eigenvector():
    report = dominant_eigenvector_check()
    assert report["pass"]
    assert report["eigenvalue"] == alpha_power(-1)
