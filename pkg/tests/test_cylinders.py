from fractions import Fraction

import pytest

from ayrel.errors import BudgetExceeded, NotPeriodicWithinBudget
from ayrel.family import build_x0, build_xr, circumference
from ayrel.field import NFElem, ONE, ZERO, alpha_power
from ayrel.geom import Vec2
from ayrel.homology import RelHomClass
from ayrel.cylinders import (WidthFunction, check_geometry, core_dual,
                             predicted_core_dual, trace_separatrix,
                             vertical_decomposition)
from ayrel.surface import BLACK, Surface, build_surface


def black_torus():
    loop = [Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)]
    s = build_surface([loop], [((0, 0), (0, 2)), ((0, 1), (0, 3))])
    labs = [tuple(BLACK for _ in range(3)) for _ in s.labels]
    return Surface(s.triangles, s.gluing, labs)


def test_torus_separatrix_closes_immediately():
    s = black_torus()
    sc = trace_separatrix(s, 0, 0, budget=10)
    assert sc.holonomy == Vec2(0, 1)
    assert sc.steps <= 2


def test_x1_three_cylinders():
    d = vertical_decomposition(build_xr(ONE))
    assert len(d.cylinders) == 3
    assert d.mixed  # the fused boundary carries both singularities
    cores = [c.core_class for c in d.cylinders]
    # ordered by increasing circumference: C_2, C_1, C_0
    assert cores == [RelHomClass.core(2), RelHomClass.core(1),
                     RelHomClass.core(0)]
    assert check_geometry(d, ONE)["pass"]


def test_x32_four_cylinders():
    r = NFElem(Fraction(3, 2))
    d = vertical_decomposition(build_xr(r))
    assert len(d.cylinders) == 4
    assert not d.mixed
    assert d.partition() == (1, 3, 0)
    assert d.cylinders[0].core_class == RelHomClass.core(3)
    assert d.cylinders[0].width == NFElem(Fraction(1, 2))
    assert check_geometry(d, r)["pass"]
    assert d.total_area() == d.surface.area()
    for c in d.cylinders:
        assert c.twist_hol.x == c.width


def test_x0_not_periodic():
    x0 = build_x0()
    with pytest.raises(NotPeriodicWithinBudget):
        vertical_decomposition(x0, budget=30000)
    with pytest.raises(BudgetExceeded):
        trace_separatrix(x0.surface,
                         x0.surface.class_by_label(BLACK)[0], 0,
                         budget=30000)


def test_renormalization_covariance():
    r = NFElem(Fraction(6, 5))
    d1 = vertical_decomposition(build_xr(r))
    d2 = vertical_decomposition(build_xr(alpha_power(-1) * r))
    assert len(d1.cylinders) == len(d2.cylinders) == 4
    for c1, c2 in zip(d1.cylinders, d2.cylinders):
        assert c2.circumference == alpha_power(1) * c1.circumference
        assert c2.width == alpha_power(-1) * c1.width


def test_width_function():
    wf = WidthFunction(1)
    assert wf.value(ONE) == ONE - alpha_power(2)
    assert wf.branches_agree_at_mid()
    assert wf.value(wf.lo) == ZERO
    assert wf.value(wf.hi) == ZERO
    assert wf.value(alpha_power(-1)) == alpha_power(-2) - alpha_power(-1)
    for j in range(-3, 7):
        assert WidthFunction(j).branches_agree_at_mid()


def test_core_dual_matches_prediction():
    ay = build_xr(NFElem(Fraction(3, 2)))
    d = vertical_decomposition(ay)
    cd = core_dual(d)
    for lab, nums in cd.items():
        assert nums == predicted_core_dual(ay.table.window, lab)


def test_core_dual_reproduces_x_holonomy():
    r = NFElem(Fraction(7, 5))
    ay = build_xr(r)
    d = vertical_decomposition(ay)
    cd = core_dual(d)
    for lab, nums in cd.items():
        kind, k = lab
        from ayrel.homology import hol_closed_form
        b, g = hol_closed_form(k, r)
        want = (b if kind == "beta" else g).x
        got = ZERO
        for n, cyl in zip(nums, d.cylinders):
            got = got + cyl.width * n
        assert got == want
