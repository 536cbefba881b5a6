from itertools import combinations

import pytest
from hypothesis import given

from goldflat.catalog import HORIZONTAL, make_named
from goldflat.cylinders import (
    classify_cylinder,
    cylinder_decomposition,
    golden_configuration,
    saddle_connections_in_direction,
)
from goldflat.flow import Direction
from goldflat.linalg import vec
from goldflat.qfield import PHI
from goldflat.surface import apply_matrix

from conftest import matrices, tilings


def test_torus_horizontal():
    dec = cylinder_decomposition(make_named("torus").surface, vec(1, 0))
    assert dec.complete
    [c] = dec.cylinders
    assert (c.circumference, c.height, c.twist) == (1, 1, 0)
    assert classify_cylinder(c) == "other"  # one saddle bounds both sides


def test_torus_slope_two():
    # the (1,2) direction on the unit square: one cylinder of area 1
    dec = cylinder_decomposition(make_named("torus").surface, vec(1, 2))
    [c] = dec.cylinders
    assert c.area == 1
    assert c.core_holonomy == vec(1, 2)


def test_golden_l_horizontal_moduli():
    # golden L: two horizontal cylinders with equal moduli (parabolic direction)
    dec = cylinder_decomposition(make_named("golden_L").surface, HORIZONTAL)
    assert len(dec.cylinders) == 2
    a, b = dec.cylinders
    assert a.modulus == b.modulus


def test_octagon_diagonal_is_periodic():
    dec = cylinder_decomposition(make_named("octagon").surface, vec(1, 1))
    assert dec.complete
    assert sum(c.area for c in dec.cylinders) == make_named("octagon").surface.area()


def test_irrational_direction_on_torus_is_unknown():
    # slope phi never closes up on the square torus
    dec = cylinder_decomposition(make_named("torus").surface, vec(1, PHI), budget=40)
    assert not dec.complete
    assert dec.cylinders == []


def test_saddle_connections_listing_matches_decomposition():
    s = make_named("figure1").surface
    sc, unfinished = saddle_connections_in_direction(s, Direction.of(vec(1, 0)))
    assert unfinished == []
    dec = cylinder_decomposition(s, vec(1, 0))
    assert sorted(x.holonomy for x in sc) == sorted(x.holonomy for x in dec.saddles)


def test_figure1_golden_pair():
    t = make_named("figure1")
    dec = cylinder_decomposition(t.surface, HORIZONTAL)
    b1, b2 = t.cylinder_class("B").locate(dec)
    w = golden_configuration(b1, b2)
    assert w.holds and w.shared_saddle is not None
    assert b1.circumference / b2.circumference in (PHI, 1 / PHI)
    a1, a2 = t.cylinder_class("A").locate(dec)
    assert not golden_configuration(a1, a2)


def test_golden_reasons():
    t = make_named("figure1")
    dec = cylinder_decomposition(t.surface, HORIZONTAL)
    c = dec.cylinders[0]
    assert golden_configuration(c, c).reason == "same cylinder"
    v = cylinder_decomposition(make_named("golden_L").surface, vec(0, 1)).cylinders[0]
    assert golden_configuration(c, v).reason == "not parallel"


# -- properties ------------------------------------------------------------------------------------


@given(tilings())
def test_horizontal_cylinders_are_the_rows(t):
    s = t.surface()
    dec = cylinder_decomposition(s, HORIZONTAL)
    assert dec.complete
    assert sorted((c.circumference, c.height) for c in dec.cylinders) == t.row_cylinders()


@given(tilings())
def test_area_is_the_sum_of_cylinder_areas(t):
    s = t.surface()
    for d in (vec(1, 0), vec(0, 1)):
        dec = cylinder_decomposition(s, d)
        assert sum(c.area for c in dec.cylinders) == s.area()


def _signature(dec, m=None):
    """Cylinder data and golden pairs, expressed after an optional linear map."""
    det = abs(m.det()) if m is not None else 1

    def key(c):
        hol = m(c.core_holonomy) if m is not None else c.core_holonomy
        return (hol, c.area * det, classify_cylinder(c))

    cyls = sorted(key(c) for c in dec.cylinders)
    golden = sorted(
        tuple(sorted((key(a), key(b))))
        for a, b in combinations(dec.cylinders, 2)
        if golden_configuration(a, b).holds
    )
    return cyls, golden


@given(tilings(max_tiles=4), matrices())
def test_decompositions_are_gl2_equivariant(t, m):
    s = t.surface()
    dec = cylinder_decomposition(s, HORIZONTAL)
    img = cylinder_decomposition(apply_matrix(s, m), m(HORIZONTAL.v))
    assert img.complete
    assert _signature(img) == _signature(dec, m)


@given(matrices())
def test_golden_configuration_is_gl2_equivariant(m):
    s = make_named("figure1").surface
    dec = cylinder_decomposition(s, HORIZONTAL)
    img = cylinder_decomposition(apply_matrix(s, m), m(HORIZONTAL.v))
    before, after = _signature(dec, m), _signature(img)
    assert after == before
    assert len(after[1]) == 1  # the B pair, and only it


@pytest.mark.parametrize("bad", [vec(0, 0)])
def test_zero_direction(bad):
    with pytest.raises(ValueError):
        cylinder_decomposition(make_named("torus").surface, bad)
