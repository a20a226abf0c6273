"""Bundle key sets, feature lists, and value coercion."""

import pytest

from dashreuse.vocabulary import (
    ATTRIBUTES,
    Bundle,
    Family,
    VOCABULARY,
    bundle_feature_list,
    bundle_includes_geometry,
    bundle_keys,
    coerce_value,
    key_applies,
)

ATOMIC = [Bundle.COLOR, Bundle.LINES, Bundle.TEXT, Bundle.LAYOUT]


def test_atomic_bundles_partition_vocabulary():
    union = set()
    for a in ATOMIC:
        keys = bundle_keys(a)
        assert not union & keys
        union |= keys
    assert union == set(ATTRIBUTES)


def test_style_is_union_of_color_lines_text():
    assert bundle_keys(Bundle.STYLE) == (
        bundle_keys(Bundle.COLOR) | bundle_keys(Bundle.LINES) | bundle_keys(Bundle.TEXT))


def test_all_is_style_plus_layout():
    assert bundle_keys(Bundle.ALL) == bundle_keys(Bundle.STYLE) | bundle_keys(Bundle.LAYOUT)
    assert bundle_includes_geometry(Bundle.ALL)
    assert bundle_includes_geometry(Bundle.LAYOUT)
    assert not any(bundle_includes_geometry(b)
                   for b in (Bundle.COLOR, Bundle.LINES, Bundle.TEXT, Bundle.STYLE))


def test_color_bundle_is_seven_color_keys():
    keys = bundle_keys(Bundle.COLOR)
    assert len(keys) == 7
    assert all(k.startswith("color.") for k in keys)


def test_layout_bundle_is_padding_plus_geometry():
    assert bundle_keys(Bundle.LAYOUT) == {"layout.padding"}


def test_feature_lists_are_stable_and_ordered():
    lines = bundle_feature_list(Bundle.LINES)
    assert lines[0] == "border width"
    assert lines[1] == "border color"
    assert lines[-1] == "tick color"
    assert bundle_feature_list(Bundle.LAYOUT) == [
        "relative size", "position", "spacing (padding)"]
    assert bundle_feature_list(Bundle.STYLE) == (
        bundle_feature_list(Bundle.COLOR)
        + bundle_feature_list(Bundle.LINES)
        + bundle_feature_list(Bundle.TEXT))
    assert bundle_feature_list(Bundle.ALL) == (
        bundle_feature_list(Bundle.STYLE) + bundle_feature_list(Bundle.LAYOUT))


def test_chart_only_keys():
    assert key_applies("line.grid.color", Family.CHART)
    assert not key_applies("line.grid.color", Family.TEXT)
    assert key_applies("color.background", Family.IMAGE)
    assert not key_applies("nope.nope", Family.CHART)


def test_every_key_has_declared_category_prefix():
    for spec in VOCABULARY:
        prefix = spec.key.split(".", 1)[0]
        assert prefix == {"Color": "color", "Lines": "line",
                          "Text": "text", "Layout": "layout"}[spec.category.value]


@pytest.mark.parametrize("key,value,expected", [
    ("color.mark.fill", "#FF00aa", "#ff00aa"),
    ("color.mark.fill", "ff00aa", "#ff00aa"),
    ("line.border.width", 2, 2.0),
    ("line.border.width", 0.12345678, 0.123457),
    ("color.shadow.offsetX", -3, -3.0),
    ("text.title.fontWeight", 700, 700),
    ("line.grid.dash", "dashed", "dashed"),
    ("line.grid.visible", False, False),
    ("text.body.fontFamily", "Inter", "Inter"),
])
def test_coerce_valid(key, value, expected):
    assert coerce_value(key, value) == expected


@pytest.mark.parametrize("key,value", [
    ("color.mark.fill", "#12ZZ99"),
    ("color.mark.fill", 7),
    ("line.border.width", -2),
    ("line.border.width", "4"),
    ("line.border.width", True),
    ("text.title.fontWeight", 450),
    ("text.title.fontWeight", 700.0),
    ("line.grid.dash", "wavy"),
    ("line.grid.visible", 1),
    ("text.body.fontFamily", "  "),
    ("made.up.key", 1),
])
def test_coerce_invalid(key, value):
    with pytest.raises(ValueError):
        coerce_value(key, value)
