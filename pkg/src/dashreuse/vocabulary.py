"""Closed attribute vocabulary and the six design bundles built on top of it.

Every style spec maps keys from this table to typed values. The table is
fixed at build time: key category, value type, applicability, the CSS hint
name used for non-chart components, and the Vega-Lite config path used for
chart components all derive from it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum


class Family(str, Enum):
    CHART = "chart"
    BIG_NUMBER = "bigNumber"
    TEXT = "text"
    IMAGE = "image"
    FILTER_WIDGET = "filterWidget"
    CONTAINER = "container"


class ChartSubtype(str, Enum):
    BAR = "bar"
    LINE = "line"
    AREA = "area"
    SCATTER = "scatter"
    PIE = "pie"
    TABLE = "table"
    MAP = "map"
    OTHER = "other"


class Category(str, Enum):
    COLOR = "Color"
    LINES = "Lines"
    TEXT = "Text"
    LAYOUT = "Layout"


class Bundle(str, Enum):
    COLOR = "Color"
    LINES = "Lines"
    TEXT = "Text"
    LAYOUT = "Layout"
    STYLE = "Style"
    ALL = "All"


class ValueType(str, Enum):
    COLOR = "color"
    LENGTH = "length-px"
    SCALAR = "scalar"
    FONT_WEIGHT = "fontWeight"
    TOKEN = "token"
    FONT_FAMILY = "fontFamily"
    BOOLEAN = "boolean"


DASH_TOKENS = ("solid", "dashed", "dotted")

_HEX_COLOR = re.compile(r"^#?([0-9a-fA-F]{6})$")
_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")


def _humanize(key: str) -> str:
    # "line.axis.domain.visible" -> "axis domain visible"
    tail = key.split(".", 1)[1]
    words = [_CAMEL.sub(" ", seg).lower() for seg in tail.split(".")]
    return " ".join(words)


@dataclass(frozen=True)
class AttributeSpec:
    key: str
    category: Category
    value_type: ValueType
    chart_only: bool = False
    tokens: tuple[str, ...] = ()
    css_name: str | None = None
    vega_path: tuple[str, ...] | None = None
    feature: str = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "feature", _humanize(self.key))

    def applies_to(self, family: Family) -> bool:
        return not self.chart_only or family is Family.CHART


def _a(key, category, value_type, *, chart_only=False, tokens=(), css=None, vega=None):
    return AttributeSpec(key, category, value_type, chart_only, tokens, css, vega)


# Order matters: bundle feature lists and tooltips follow vocabulary order.
VOCABULARY: tuple[AttributeSpec, ...] = (
    _a("color.mark.fill", Category.COLOR, ValueType.COLOR,
       css="color", vega=("mark", "fill")),
    _a("color.mark.stroke", Category.COLOR, ValueType.COLOR,
       css="outline-color", vega=("mark", "stroke")),
    _a("color.background", Category.COLOR, ValueType.COLOR,
       css="background-color", vega=("background",)),
    _a("color.shadow.color", Category.COLOR, ValueType.COLOR, css="box-shadow-color"),
    _a("color.shadow.offsetX", Category.COLOR, ValueType.SCALAR, css="box-shadow-offset-x"),
    _a("color.shadow.offsetY", Category.COLOR, ValueType.SCALAR, css="box-shadow-offset-y"),
    _a("color.shadow.blur", Category.COLOR, ValueType.LENGTH, css="box-shadow-blur"),
    _a("line.border.width", Category.LINES, ValueType.LENGTH,
       css="border-width", vega=("view", "strokeWidth")),
    _a("line.border.color", Category.LINES, ValueType.COLOR,
       css="border-color", vega=("view", "stroke")),
    _a("line.border.radius", Category.LINES, ValueType.LENGTH,
       css="border-radius", vega=("view", "cornerRadius")),
    _a("line.grid.visible", Category.LINES, ValueType.BOOLEAN,
       chart_only=True, vega=("axis", "grid")),
    _a("line.grid.color", Category.LINES, ValueType.COLOR,
       chart_only=True, vega=("axis", "gridColor")),
    _a("line.grid.width", Category.LINES, ValueType.LENGTH,
       chart_only=True, vega=("axis", "gridWidth")),
    _a("line.grid.dash", Category.LINES, ValueType.TOKEN,
       chart_only=True, tokens=DASH_TOKENS, vega=("axis", "gridDash")),
    _a("line.axis.domain.visible", Category.LINES, ValueType.BOOLEAN,
       chart_only=True, vega=("axis", "domain")),
    _a("line.axis.domain.color", Category.LINES, ValueType.COLOR,
       chart_only=True, vega=("axis", "domainColor")),
    _a("line.axis.domain.width", Category.LINES, ValueType.LENGTH,
       chart_only=True, vega=("axis", "domainWidth")),
    _a("line.tick.visible", Category.LINES, ValueType.BOOLEAN,
       chart_only=True, vega=("axis", "ticks")),
    _a("line.tick.size", Category.LINES, ValueType.LENGTH,
       chart_only=True, vega=("axis", "tickSize")),
    _a("line.tick.color", Category.LINES, ValueType.COLOR,
       chart_only=True, vega=("axis", "tickColor")),
    _a("text.title.fontFamily", Category.TEXT, ValueType.FONT_FAMILY,
       css="title-font-family", vega=("title", "font")),
    _a("text.title.fontSize", Category.TEXT, ValueType.LENGTH,
       css="title-font-size", vega=("title", "fontSize")),
    _a("text.title.fontWeight", Category.TEXT, ValueType.FONT_WEIGHT,
       css="title-font-weight", vega=("title", "fontWeight")),
    _a("text.body.fontFamily", Category.TEXT, ValueType.FONT_FAMILY,
       css="font-family", vega=("text", "font")),
    _a("text.body.fontSize", Category.TEXT, ValueType.LENGTH,
       css="font-size", vega=("text", "fontSize")),
    _a("text.body.fontWeight", Category.TEXT, ValueType.FONT_WEIGHT,
       css="font-weight", vega=("text", "fontWeight")),
    _a("text.axisLabel.fontFamily", Category.TEXT, ValueType.FONT_FAMILY,
       chart_only=True, vega=("axis", "labelFont")),
    _a("text.axisLabel.fontSize", Category.TEXT, ValueType.LENGTH,
       chart_only=True, vega=("axis", "labelFontSize")),
    _a("text.axisLabel.fontWeight", Category.TEXT, ValueType.FONT_WEIGHT,
       chart_only=True, vega=("axis", "labelFontWeight")),
    _a("layout.padding", Category.LAYOUT, ValueType.LENGTH,
       css="padding", vega=("padding",)),
)

ATTRIBUTES: dict[str, AttributeSpec] = {spec.key: spec for spec in VOCABULARY}

# Geometry (bbox) travels with Layout/All but is not an attribute key.
LAYOUT_FEATURES = ("relative size", "position", "spacing (padding)")

_CATEGORY_KEYS: dict[Category, tuple[str, ...]] = {
    cat: tuple(s.key for s in VOCABULARY if s.category is cat) for cat in Category
}

_ATOMIC = (Bundle.COLOR, Bundle.LINES, Bundle.TEXT, Bundle.LAYOUT)


def bundle_keys(bundle: Bundle) -> frozenset[str]:
    """Attribute keys carried by a design bundle."""
    bundle = Bundle(bundle)
    if bundle is Bundle.STYLE:
        return bundle_keys(Bundle.COLOR) | bundle_keys(Bundle.LINES) | bundle_keys(Bundle.TEXT)
    if bundle is Bundle.ALL:
        return bundle_keys(Bundle.STYLE) | bundle_keys(Bundle.LAYOUT)
    return frozenset(_CATEGORY_KEYS[Category(bundle.value)])


def bundle_includes_geometry(bundle: Bundle) -> bool:
    return Bundle(bundle) in (Bundle.LAYOUT, Bundle.ALL)


def bundle_feature_list(bundle: Bundle) -> list[str]:
    """Human-readable feature names, in category then vocabulary order."""
    bundle = Bundle(bundle)
    if bundle is Bundle.LAYOUT:
        return list(LAYOUT_FEATURES)
    if bundle is Bundle.STYLE:
        return (bundle_feature_list(Bundle.COLOR)
                + bundle_feature_list(Bundle.LINES)
                + bundle_feature_list(Bundle.TEXT))
    if bundle is Bundle.ALL:
        return bundle_feature_list(Bundle.STYLE) + bundle_feature_list(Bundle.LAYOUT)
    return [ATTRIBUTES[k].feature for k in _CATEGORY_KEYS[Category(bundle.value)]]


def atomic_bundle(key: str) -> Bundle:
    """The single-category bundle an attribute key belongs to."""
    return Bundle(ATTRIBUTES[key].category.value)


def key_applies(key: str, family: Family) -> bool:
    spec = ATTRIBUTES.get(key)
    return spec is not None and spec.applies_to(family)


def applicable_keys(family: Family) -> frozenset[str]:
    return frozenset(s.key for s in VOCABULARY if s.applies_to(family))


def canonical_color(value: str) -> str:
    m = _HEX_COLOR.match(value.strip())
    if not m:
        raise ValueError(f"not a #rrggbb color: {value!r}")
    return "#" + m.group(1).lower()


def coerce_value(key: str, value: object):
    """Validate and canonicalize a value for a vocabulary key.

    Returns the canonical form (lowercase colors, floats quantized to six
    fractional digits). Raises ValueError for unknown keys or values that
    do not fit the key's declared type.
    """
    spec = ATTRIBUTES.get(key)
    if spec is None:
        raise ValueError(f"unknown attribute key: {key}")
    vt = spec.value_type
    if vt is ValueType.COLOR:
        if not isinstance(value, str):
            raise ValueError(f"{key}: expected color string, got {type(value).__name__}")
        return canonical_color(value)
    if vt in (ValueType.LENGTH, ValueType.SCALAR):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"{key}: expected number, got {type(value).__name__}")
        v = float(value)
        if v != v or v in (float("inf"), float("-inf")):
            raise ValueError(f"{key}: non-finite number")
        if vt is ValueType.LENGTH and v < 0:
            raise ValueError(f"{key}: negative length")
        return round(v, 6)
    if vt is ValueType.FONT_WEIGHT:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(f"{key}: expected integer weight, got {type(value).__name__}")
        if value not in range(100, 1000, 100):
            raise ValueError(f"{key}: weight must be 100..900 in steps of 100")
        return value
    if vt is ValueType.TOKEN:
        if value not in spec.tokens:
            raise ValueError(f"{key}: expected one of {spec.tokens}, got {value!r}")
        return value
    if vt is ValueType.FONT_FAMILY:
        if not isinstance(value, str) or not value.strip():
            raise ValueError(f"{key}: expected non-empty font family string")
        return value
    if vt is ValueType.BOOLEAN:
        if not isinstance(value, bool):
            raise ValueError(f"{key}: expected boolean, got {type(value).__name__}")
        return value
    raise AssertionError(f"unhandled value type {vt}")


def describe_schema() -> list[dict]:
    """Machine-readable vocabulary table, sent to extraction services."""
    rows = []
    for spec in VOCABULARY:
        row = {
            "key": spec.key,
            "category": spec.category.value,
            "valueType": spec.value_type.value,
            "appliesTo": "chart" if spec.chart_only else "all",
        }
        if spec.tokens:
            row["tokens"] = list(spec.tokens)
        rows.append(row)
    return rows
