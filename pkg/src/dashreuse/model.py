"""Dashboard document model: components, geometry, style specs, validation.

Construction is lenient (out-of-range geometry or bad style values are
representable) and `validate_doc` is the strict gate, so that rejected
input can be reported field by field instead of raising mid-parse.
All types are immutable; operations return new values.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Iterable, Mapping

from .vocabulary import (
    ATTRIBUTES,
    Bundle,
    ChartSubtype,
    Family,
    canonical_color,
    coerce_value,
    key_applies,
)

_EPS = 1e-9


def _q6(v: float) -> float:
    return round(float(v), 6)


def utc_now() -> datetime:
    """Current UTC instant, truncated to whole seconds (canonical form)."""
    return datetime.now(timezone.utc).replace(microsecond=0)


@dataclass(frozen=True)
class BoundingBox:
    """Component geometry as fractions of the canvas: x/y origin, w/h extent."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "w", "h"):
            object.__setattr__(self, name, _q6(getattr(self, name)))

    @property
    def area(self) -> float:
        return self.w * self.h

    def overlaps(self, other: "BoundingBox") -> bool:
        return not (
            self.x + self.w <= other.x + _EPS
            or other.x + other.w <= self.x + _EPS
            or self.y + self.h <= other.y + _EPS
            or other.y + other.h <= self.y + _EPS
        )


@dataclass(frozen=True)
class ComponentKind:
    family: Family
    chart_subtype: ChartSubtype | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.chart_subtype is not None:
            object.__setattr__(self, "chart_subtype", ChartSubtype(self.chart_subtype))

    def __str__(self) -> str:
        if self.chart_subtype is not None:
            return f"{self.family.value}:{self.chart_subtype.value}"
        return self.family.value


def chart(subtype: ChartSubtype | str) -> ComponentKind:
    return ComponentKind(Family.CHART, ChartSubtype(subtype))


@dataclass(frozen=True)
class ProvenanceRecord:
    """Where one attribute value came from: which reference, which source
    component (None means the frequency-based representative spec), and
    which atomic bundle carried it."""

    attribute_key: str
    reference_id: str
    source_component_id: str | None
    bundle: Bundle
    timestamp: datetime


@dataclass(frozen=True)
class Component:
    id: str
    kind: ComponentKind
    bbox: BoundingBox
    style: Mapping[str, object] = field(default_factory=dict)
    data_binding: str | None = None
    placeholder: bool = False
    locks: frozenset[str] = frozenset()
    provenance: tuple[ProvenanceRecord, ...] = ()
    render_spec: Mapping[str, object] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "style", normalize_style_values(self.style))
        object.__setattr__(self, "locks", frozenset(self.locks))
        object.__setattr__(self, "provenance", tuple(self.provenance))


def reading_key(c: Component) -> tuple:
    """Reading order: by row (y), then column (x), then id. Coordinates are
    rounded to 2 decimals first so visually aligned rows sort as rows."""
    return (round(c.bbox.y, 2), round(c.bbox.x, 2), c.id)


def reading_order(components: Iterable[Component]) -> tuple[Component, ...]:
    return tuple(sorted(components, key=reading_key))


@dataclass(frozen=True)
class DashboardDoc:
    id: str
    title: str
    author: str
    canvas_aspect: float
    components: tuple[Component, ...] = ()
    revision: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "canvas_aspect", _q6(self.canvas_aspect))
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def assemble(cls, *, id: str, title: str = "", author: str = "",
                 canvas_aspect: float = 16 / 9,
                 components: Iterable[Component] = (),
                 revision: int = 0) -> "DashboardDoc":
        """Build a doc with components sorted into canonical reading order."""
        return cls(id=id, title=title, author=author, canvas_aspect=canvas_aspect,
                   components=reading_order(components), revision=revision)

    def component(self, component_id: str) -> Component:
        for c in self.components:
            if c.id == component_id:
                return c
        raise KeyError(component_id)

    def with_components(self, components: Iterable[Component],
                        bump_revision: bool = True) -> "DashboardDoc":
        return replace(
            self,
            components=reading_order(components),
            revision=self.revision + 1 if bump_revision else self.revision,
        )


# --- style plumbing -------------------------------------------------------

def normalize_style_values(style: Mapping[str, object]) -> dict[str, object]:
    """Canonicalize the values this module understands (lowercase colors,
    quantized numbers); entries that do not fit their key are kept verbatim
    for validate_doc to flag."""
    out: dict[str, object] = {}
    for key, value in style.items():
        try:
            out[key] = coerce_value(key, value)
        except (ValueError, TypeError):
            out[key] = value
    return out


def sync_render_spec(render_spec: Mapping[str, object] | None,
                     style: Mapping[str, object],
                     removed: Iterable[str] = ()) -> dict | None:
    """Project owned attribute keys into a chart's declarative render spec.

    The blob passes through untouched except for config paths owned by the
    vocabulary: present keys are written, explicitly removed keys are
    deleted. Returns a new dict (the input is never mutated).
    """
    if render_spec is None:
        return None
    spec = copy.deepcopy(dict(render_spec))
    config = spec.setdefault("config", {})
    if not isinstance(config, dict):
        return spec
    for key in removed:
        path = ATTRIBUTES[key].vega_path if key in ATTRIBUTES else None
        if path:
            _del_path(config, path)
    for key, value in style.items():
        attr = ATTRIBUTES.get(key)
        if attr is None or attr.vega_path is None:
            continue
        _set_path(config, attr.vega_path, _vega_value(key, value))
    if not config:
        spec.pop("config", None)
    return spec


_DASH_ARRAYS = {"solid": [], "dashed": [4, 4], "dotted": [1, 1]}


def _vega_value(key: str, value: object) -> object:
    if key == "line.grid.dash" and isinstance(value, str):
        return _DASH_ARRAYS.get(value, [])
    return value


def _set_path(config: dict, path: tuple[str, ...], value: object) -> None:
    node = config
    for part in path[:-1]:
        nxt = node.get(part)
        if not isinstance(nxt, dict):
            nxt = {}
            node[part] = nxt
        node = nxt
    node[path[-1]] = value


def _del_path(config: dict, path: tuple[str, ...]) -> None:
    node = config
    for part in path[:-1]:
        node = node.get(part)
        if not isinstance(node, dict):
            return
    node.pop(path[-1], None)
    # prune emptied groups so repeated set/remove round-trips stay canonical
    if len(path) > 1 and not config.get(path[0]):
        config.pop(path[0], None)


def with_style(component: Component, style: Mapping[str, object],
               removed: Iterable[str] = ()) -> Component:
    """Replace a component's style, keeping its render spec in sync."""
    return replace(
        component,
        style=dict(style),
        render_spec=sync_render_spec(component.render_spec, style, removed),
    )


def normalize_component(component: Component) -> Component:
    style = normalize_style_values(component.style)
    return replace(
        component,
        style=style,
        render_spec=sync_render_spec(component.render_spec, style),
    )


# --- validation -----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    component_id: str | None
    field: str
    message: str

    def __str__(self) -> str:
        where = self.component_id or "<doc>"
        return f"{where}.{self.field}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


def validate_doc(doc: DashboardDoc) -> ValidationReport:
    """Check every model invariant; violations are data, not exceptions."""
    issues: list[Violation] = []

    def bad(cid: str | None, fld: str, msg: str) -> None:
        issues.append(Violation(cid, fld, msg))

    if not isinstance(doc.canvas_aspect, float) or not math.isfinite(doc.canvas_aspect) \
            or doc.canvas_aspect <= 0:
        bad(None, "canvasAspect", "must be a positive finite ratio")
    if not isinstance(doc.revision, int) or doc.revision < 0:
        bad(None, "revision", "must be a non-negative integer")

    seen: set[str] = set()
    for c in doc.components:
        if c.id in seen:
            bad(c.id, "id", "duplicate component id")
        seen.add(c.id)

    if list(doc.components) != list(reading_order(doc.components)):
        bad(None, "components", "not in canonical reading order")

    for c in doc.components:
        _validate_component(c, bad)
    return ValidationReport(tuple(issues))


def _validate_component(c: Component, bad) -> None:
    b = c.bbox
    if not all(math.isfinite(v) for v in (b.x, b.y, b.w, b.h)):
        bad(c.id, "bbox", "non-finite coordinate")
        return
    if b.x < 0 or b.y < 0:
        bad(c.id, "bbox", "negative origin")
    if b.w <= 0 or b.h <= 0:
        bad(c.id, "bbox", "non-positive extent")
    if b.x + b.w > 1 + _EPS or b.y + b.h > 1 + _EPS:
        bad(c.id, "bbox", "bbox overflow")

    if c.kind.family is Family.CHART and c.kind.chart_subtype is None:
        bad(c.id, "kind", "chart requires a chartSubtype")
    if c.kind.family is not Family.CHART and c.kind.chart_subtype is not None:
        bad(c.id, "kind", "chartSubtype only valid on charts")

    for key, value in c.style.items():
        if key not in ATTRIBUTES:
            bad(c.id, f"style.{key}", "unknown key")
            continue
        if not key_applies(key, c.kind.family):
            bad(c.id, f"style.{key}", "inapplicable key")
            continue
        try:
            coerce_value(key, value)
        except ValueError as exc:
            bad(c.id, f"style.{key}", str(exc))

    if c.placeholder and c.data_binding is not None:
        bad(c.id, "dataBinding", "placeholder must not be data-bound")

    for key in sorted(c.locks):
        if key not in ATTRIBUTES:
            bad(c.id, f"locks.{key}", "unknown key")
        elif not key_applies(key, c.kind.family):
            bad(c.id, f"locks.{key}", "inapplicable key")


__all__ = [
    "BoundingBox",
    "Component",
    "ComponentKind",
    "DashboardDoc",
    "ProvenanceRecord",
    "ValidationReport",
    "Violation",
    "canonical_color",
    "chart",
    "normalize_component",
    "normalize_style_values",
    "reading_key",
    "reading_order",
    "sync_render_spec",
    "utc_now",
    "validate_doc",
    "with_style",
]
