"""Document model invariants: reading order, validation, render-spec sync."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from dashreuse.model import (
    BoundingBox,
    Component,
    ComponentKind,
    DashboardDoc,
    chart,
    reading_order,
    sync_render_spec,
    validate_doc,
)
from dashreuse.vocabulary import Family

from util import rand_doc


def _component(cid, x=0.0, y=0.0, w=0.3, h=0.2, **kw):
    return Component(id=cid, kind=chart("bar"), bbox=BoundingBox(x, y, w, h), **kw)


def test_reading_order_sorts_rows_then_columns():
    a = _component("a", x=0.5, y=0.001)   # same visual row as b
    b = _component("b", x=0.0, y=0.0)
    c = _component("c", x=0.0, y=0.5)
    assert [x.id for x in reading_order([c, a, b])] == ["b", "a", "c"]


def test_reading_order_is_total_on_valid_docs():
    rng = random.Random(7)
    for _ in range(20):
        doc = rand_doc(rng, rng.randint(0, 7))
        keys = [(round(c.bbox.y, 2), round(c.bbox.x, 2), c.id) for c in doc.components]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)


def test_validate_well_formed():
    rng = random.Random(1)
    assert validate_doc(rand_doc(rng, 3)).ok


def test_validate_bbox_overflow():
    doc = DashboardDoc.assemble(id="d", components=[_component("a", x=0.5, w=0.7)])
    report = validate_doc(doc)
    assert not report.ok
    assert any("bbox overflow" in v.message for v in report.violations)


def test_validate_inapplicable_key():
    bad = Component(id="t", kind=ComponentKind(Family.TEXT),
                    bbox=BoundingBox(0, 0, 0.5, 0.5),
                    style={"line.grid.color": "#000000"})
    report = validate_doc(DashboardDoc.assemble(id="d", components=[bad]))
    assert any("inapplicable key" in v.message for v in report.violations)
    assert any(v.component_id == "t" for v in report.violations)


def test_validate_unknown_key_and_bad_value():
    bad = Component(id="t", kind=chart("bar"), bbox=BoundingBox(0, 0, 0.5, 0.5),
                    style={"mystery.key": 1, "color.mark.fill": "#XYZXYZ"})
    report = validate_doc(DashboardDoc.assemble(id="d", components=[bad]))
    messages = [v.message for v in report.violations]
    assert any("unknown key" in m for m in messages)
    assert any("color" in m for m in messages)


def test_validate_duplicate_ids_and_order():
    a, b = _component("a"), _component("a", y=0.5)
    doc = DashboardDoc(id="d", title="", author="", canvas_aspect=1.5,
                       components=(b, a))  # wrong order on purpose
    report = validate_doc(doc)
    assert any("duplicate" in v.message for v in report.violations)
    assert any("reading order" in v.message for v in report.violations)


def test_validate_placeholder_binding_and_locks():
    bad = Component(id="p", kind=chart("bar"), bbox=BoundingBox(0, 0, 0.4, 0.4),
                    placeholder=True, data_binding="ds-1",
                    locks=frozenset({"text.axisLabel.fontSize"}))
    ok_lock = Component(id="q", kind=ComponentKind(Family.TEXT),
                        bbox=BoundingBox(0.5, 0.5, 0.4, 0.4),
                        locks=frozenset({"line.grid.color"}))
    report = validate_doc(DashboardDoc.assemble(id="d", components=[bad, ok_lock]))
    assert any(v.field == "dataBinding" for v in report.violations)
    assert any(v.field.startswith("locks.line.grid.color") for v in report.violations)


def test_validate_chart_subtype_rules():
    no_sub = Component(id="a", kind=ComponentKind(Family.CHART),
                       bbox=BoundingBox(0, 0, 0.3, 0.3))
    report = validate_doc(DashboardDoc.assemble(id="d", components=[no_sub]))
    assert any("chartSubtype" in v.message for v in report.violations)


def test_style_values_canonicalized_at_construction():
    c = _component("a", style={"color.mark.fill": "#AABBCC", "line.border.width": 3})
    assert c.style == {"color.mark.fill": "#aabbcc", "line.border.width": 3.0}


def test_sync_render_spec_sets_and_removes_config_paths():
    spec = {"mark": {"type": "bar"}, "encoding": {"x": {"field": "f"}}}
    synced = sync_render_spec(spec, {"line.grid.visible": False,
                                     "color.mark.fill": "#112233",
                                     "line.grid.dash": "dashed"})
    assert synced["config"]["axis"]["grid"] is False
    assert synced["config"]["axis"]["gridDash"] == [4, 4]
    assert synced["config"]["mark"]["fill"] == "#112233"
    assert synced["encoding"] == {"x": {"field": "f"}}
    cleared = sync_render_spec(synced, {}, removed=["line.grid.visible",
                                                    "color.mark.fill",
                                                    "line.grid.dash"])
    assert "axis" not in cleared.get("config", {})
    # original input untouched
    assert "config" not in spec


@given(st.floats(0, 1, allow_nan=False), st.floats(0, 1, allow_nan=False))
@settings(max_examples=50)
def test_bbox_quantized_to_six_digits(x, y):
    b = BoundingBox(x, y, 0.1, 0.1)
    assert b.x == round(b.x, 6)
    assert b.y == round(b.y, 6)
