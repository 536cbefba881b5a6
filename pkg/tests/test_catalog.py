import pytest

from goldflat.catalog import (
    HORIZONTAL,
    NAMES,
    CatalogError,
    figure4_degeneration,
    make_named,
    parameters,
)
from goldflat.cylinders import classify_cylinder, cylinder_decomposition, golden_configuration
from goldflat.qfield import PHI
from goldflat.surface import components, euler_genus, genus, stratum
from goldflat.surgery import collapse


@pytest.mark.parametrize("name", NAMES)
def test_every_catalog_surface_is_valid(name):
    t = make_named(name)
    assert genus(t.surface) == euler_genus(t.surface)
    assert all(ok for _, ok in t.check_constraints())
    for cls in t.classes:
        dec = cylinder_decomposition(t.surface, cls.direction)
        assert dec.complete
        members = cls.locate(dec)
        assert len({c.id for c in members}) == len(members)
        if cls.golden is not None:
            assert golden_configuration(*members).holds == cls.golden


def test_parameters_and_errors():
    assert parameters("figure1") == ["h1", "h2", "ell", "p_shift"]
    with pytest.raises(CatalogError, match="unknown surface"):
        make_named("heptagon")
    with pytest.raises(CatalogError, match="no parameter"):
        make_named("torus", {"width": 2})
    with pytest.raises(CatalogError):
        make_named("torus", {"side": "1 +"})
    with pytest.raises(CatalogError):
        make_named("figure1", {"h1": -1})


def test_literal_parameters():
    t = make_named("torus", {"side": "1/2 + 1/2*rt(5)"})
    assert t.surface.area() == PHI * PHI


@pytest.mark.parametrize(
    "params",
    [{}, {"h1": 2}, {"h2": "1/3"}, {"ell": "1/2 + 1/2*rt(5)"}, {"h1": "rt(5)", "h2": 3, "ell": "2/7"}],
)
def test_figure1_family(params):
    t = make_named("figure1", params)
    sig = stratum(t.surface)
    assert sig.orders == (1, 1) and sig.marked == 1
    dec = cylinder_decomposition(t.surface, HORIZONTAL)
    assert len(dec.cylinders) == 4
    a = t.cylinder_class("A").locate(dec)
    b = t.cylinder_class("B").locate(dec)
    assert [classify_cylinder(c) for c in a] == ["simple", "simple"]
    assert golden_configuration(*b).holds
    assert b[0].circumference == PHI * b[1].circumference


@pytest.mark.parametrize("params", [{}, {"w": 2}, {"h1": "1/2", "ell": 3}, {"w": "1/2 + 1/2*rt(5)", "h2": 2}])
def test_locus_1117_family(params):
    t = make_named("locus_1117", params)
    assert str(stratum(t.surface)) == "H(6)"
    assert genus(t.surface) == [4]
    for name, expected_genus in (("C2", [1, 1]), ("C1", [2])):
        cls = t.cylinder_class(name)
        dec = cylinder_decomposition(t.surface, cls.direction)
        y = collapse(t.surface, cls.locate(dec), dec=dec)
        assert genus(y) == expected_genus == euler_genus(y)


def test_figure2b_is_the_mirror_of_figure2a():
    a, b = make_named("figure2a").surface, make_named("figure2b").surface
    assert stratum(a) == stratum(b)
    assert a.area() == b.area()


@pytest.mark.parametrize("name", ["figure3a", "figure3b"])
@pytest.mark.parametrize("scale", [1, 2, "1/2 + 1/2*rt(5)"])
def test_figure3_red_white_pair(name, scale):
    t = make_named(name, {"scale": scale})
    cls = t.cylinder_class("red_white")
    dec = cylinder_decomposition(t.surface, cls.direction)
    red, white = cls.locate(dec)
    w = golden_configuration(red, white)
    assert w.holds
    assert red.circumference == PHI * white.circumference
    assert len(t.check_constraints()) == 4


def test_figure4a_relation():
    t = make_named("figure4a")
    assert t.lengths["g"] == PHI * t.lengths["f"]
    # away from the relation the extra length equation fails
    off = make_named("figure4a", {"w": 2})
    assert off.lengths["g"] != PHI * off.lengths["f"]


def test_figure4_degeneration_outcome():
    deg = figure4_degeneration(make_named("figure4a"))
    assert deg.shear == PHI
    assert len(deg.aligned) == 3
    assert len(components(deg.result)) == 1
    # the collapse lands in H(2) with no marked point left over
    assert str(stratum(deg.result)) == "H(2)"


def test_figure5_has_three_classes():
    t = make_named("figure5")
    assert [c.name for c in t.classes] == ["C1", "C2", "C3"]
    assert str(stratum(t.surface)) == "H(3,2,1)"
