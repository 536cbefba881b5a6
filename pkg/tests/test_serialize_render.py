import json
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given

from goldflat.catalog import NAMES, make_named
from goldflat.cylinders import cylinder_decomposition
from goldflat.linalg import vec
from goldflat.render import render_svg
from goldflat.serialize import SpecError, decomposition_report, dump_surface, load_surface

from conftest import tilings

SVG = "{http://www.w3.org/2000/svg}"


@pytest.mark.parametrize("name", NAMES)
def test_catalog_round_trip(name):
    s = make_named(name).surface
    text = dump_surface(s)
    assert load_surface(text) == s
    assert dump_surface(load_surface(text)) == text


@given(tilings(connected=False))
def test_spec_round_trip(t):
    s = t.surface()
    assert load_surface(dump_surface(s)) == s


@pytest.mark.parametrize(
    "text, match",
    [
        ("not json", "valid JSON"),
        ("[]", "JSON object"),
        ('{"polygons": []}', "needs"),
        ('{"format": "other", "polygons": [], "pairing": []}', "format"),
        ('{"polygons": [[["1", "0"], ["0"]]], "pairing": []}', "expected"),
        ('{"polygons": [[["x", "0"]]], "pairing": []}', "polygon 0 edge 0"),
        ('{"polygons": [], "pairing": [[[0, 0], [0, 1]], [[0, 0], [0, 2]]]}', "paired twice"),
    ],
)
def test_bad_specs(text, match):
    with pytest.raises(SpecError, match=match):
        load_surface(text)


def test_decomposition_report_is_exact_text():
    t = make_named("figure1")
    dec = cylinder_decomposition(t.surface, vec(1, 0))
    doc = decomposition_report(dec, {0: "X"})
    json.dumps(doc)
    assert doc["cylinders"][0]["class"] == "X"
    assert all(isinstance(c["circumference"], str) for c in doc["cylinders"])


def test_svg_is_well_formed_and_deterministic():
    t = make_named("figure1")
    a = render_svg(t, vec(1, 0), title="figure1")
    assert a == render_svg(make_named("figure1"), vec(1, 0), title="figure1")
    root = ET.fromstring(a)
    assert root.tag == SVG + "svg"
    assert len(root.findall(SVG + "polygon")) == 4  # one per horizontal cylinder
    fills = {p.get("fill") for p in root.findall(SVG + "polygon")}
    assert len(fills) == 2  # classes A and B
    marked = [c for c in root.findall(SVG + "circle") if c.get("class") == "marked"]
    assert marked and all(c.get("fill") == "white" for c in marked)


def test_svg_without_overlay():
    root = ET.fromstring(render_svg(make_named("octagon").surface))
    assert len(root.findall(SVG + "polygon")) == 1
    labels = [t.text for t in root.findall(SVG + "text")]
    # eight edges, four gluing labels each used twice
    assert sorted(labels) == sorted(["0", "1", "2", "3"] * 2)
