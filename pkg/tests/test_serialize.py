"""Canonical serialization: round-trip identity, byte determinism, errors."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dashreuse.model import BoundingBox, Component, ComponentKind, chart
from dashreuse.serialize import (
    ParseError,
    canonical_serialize,
    css_hints,
    doc_digest,
    parse_doc,
)
from dashreuse.vocabulary import Family

from util import rand_doc


def test_round_trip_identity_and_determinism():
    rng = random.Random(11)
    for _ in range(25):
        doc = rand_doc(rng, rng.randint(0, 8))
        data = canonical_serialize(doc)
        again = parse_doc(data)
        assert again == doc
        assert canonical_serialize(again) == data


@given(st.integers(0, 10 ** 9))
@settings(max_examples=60, deadline=None)
def test_round_trip_identity_property(seed):
    rng = random.Random(seed)
    doc = rand_doc(rng, rng.randint(0, 9), style_density=rng.random())
    data = canonical_serialize(doc)
    assert parse_doc(data) == doc
    assert canonical_serialize(parse_doc(data)) == data


def test_colors_serialize_lowercase():
    doc = rand_doc(random.Random(0), 0)
    c = Component(id="a", kind=chart("bar"), bbox=BoundingBox(0, 0, 0.5, 0.5),
                  style={"color.mark.fill": "#FF0000"})
    data = canonical_serialize(doc.with_components([c], bump_revision=False))
    assert b"#ff0000" in data
    assert b"FF0000" not in data


def test_digest_is_content_address():
    rng = random.Random(3)
    doc = rand_doc(rng, 4)
    assert doc_digest(doc) == doc_digest(parse_doc(canonical_serialize(doc)))
    other = doc.with_components(list(doc.components)[:-1])
    assert doc_digest(other) != doc_digest(doc)


def test_parse_error_reports_byte_offset():
    with pytest.raises(ParseError) as err:
        parse_doc(b'{"id": "x", ')
    assert err.value.offset is not None


def test_parse_error_reports_path():
    with pytest.raises(ParseError) as err:
        parse_doc(b'{"id":"d","title":"","author":"","canvasAspect":1.5,'
                  b'"revision":0,"components":[{"id":"c","kind":{"family":"chart",'
                  b'"chartSubtype":"bar"},"bbox":{"x":"oops","y":0,"w":1,"h":1},'
                  b'"style":{},"placeholder":false,"locks":[],"provenance":[]}]}')
    assert "components[0].bbox.x" in err.value.path


def test_parse_rejects_unknown_fields():
    with pytest.raises(ParseError) as err:
        parse_doc(b'{"id":"d","title":"","author":"","canvasAspect":1.5,'
                  b'"revision":0,"components":[],"surprise":1}')
    assert "surprise" in str(err.value)


def test_parse_rejects_unknown_family():
    with pytest.raises(ParseError) as err:
        parse_doc(b'{"id":"d","title":"","author":"","canvasAspect":1.5,'
                  b'"revision":0,"components":[{"id":"c","kind":{"family":"widget"},'
                  b'"bbox":{"x":0,"y":0,"w":1,"h":1},"style":{},"placeholder":false,'
                  b'"locks":[],"provenance":[]}]}')
    assert "family" in err.value.path


def test_render_spec_passes_through():
    spec = {"mark": {"type": "bar"}, "data": {"name": "sales"}}
    c = Component(id="a", kind=chart("bar"), bbox=BoundingBox(0, 0, 0.5, 0.5),
                  render_spec=spec)
    doc = rand_doc(random.Random(0), 0).with_components([c], bump_revision=False)
    parsed = parse_doc(canonical_serialize(doc))
    assert parsed.component("a").render_spec == spec


def test_css_hints_for_non_chart_components():
    c = Component(id="t", kind=ComponentKind(Family.TEXT),
                  bbox=BoundingBox(0, 0, 0.5, 0.5),
                  style={"color.background": "#fafafa",
                         "line.border.width": 2,
                         "text.body.fontWeight": 600,
                         "layout.padding": 12.5})
    hints = css_hints(c)
    assert hints == {"background-color": "#fafafa", "border-width": "2px",
                     "font-weight": "600", "padding": "12.5px"}
    data = canonical_serialize(
        rand_doc(random.Random(0), 0).with_components([c], bump_revision=False))
    assert b'"cssHints"' in data
    # hints are derived: parsing ignores them, re-serialization regenerates
    assert parse_doc(data).component("t").style == c.style


def test_css_hints_absent_for_charts():
    c = Component(id="a", kind=chart("bar"), bbox=BoundingBox(0, 0, 0.5, 0.5),
                  style={"color.background": "#fafafa"})
    data = canonical_serialize(
        rand_doc(random.Random(0), 0).with_components([c], bump_revision=False))
    assert b"cssHints" not in data
