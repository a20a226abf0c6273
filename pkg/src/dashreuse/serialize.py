"""Canonical JSON serialization for dashboard documents.

Canonical form: UTF-8, object keys sorted lexicographically, compact
separators, floats quantized to at most six fractional digits, colors
lowercase, timestamps as whole-second UTC instants. Serializing the same
document twice yields identical bytes, and parse(serialize(doc)) == doc.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from typing import Any, Mapping

from .model import (
    BoundingBox,
    Component,
    ComponentKind,
    DashboardDoc,
    ProvenanceRecord,
)
from .vocabulary import ATTRIBUTES, Bundle, ChartSubtype, Family, ValueType


class ParseError(ValueError):
    """Malformed document bytes; carries the JSON path and/or byte offset."""

    def __init__(self, message: str, path: str = "$", offset: int | None = None):
        self.path = path
        self.offset = offset
        where = path if offset is None else f"{path} (byte {offset})"
        super().__init__(f"{message} at {where}")


# --- timestamps -----------------------------------------------------------

_TS_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime(_TS_FORMAT)


def parse_timestamp(raw: str, path: str) -> datetime:
    try:
        return datetime.strptime(raw, _TS_FORMAT).replace(tzinfo=timezone.utc)
    except (TypeError, ValueError):
        raise ParseError(f"bad timestamp {raw!r}", path) from None


# --- serialization --------------------------------------------------------

def _num(v: float | int) -> float | int:
    if isinstance(v, bool) or isinstance(v, int):
        return v
    return round(v, 6)


def _kind_to_jsonable(kind: ComponentKind) -> dict:
    out: dict[str, Any] = {"family": kind.family.value}
    if kind.chart_subtype is not None:
        out["chartSubtype"] = kind.chart_subtype.value
    return out


def _style_value_jsonable(value: object) -> object:
    if isinstance(value, float):
        return _num(value)
    return value


def css_hints(component: Component) -> dict[str, str]:
    """Non-chart style keys rendered 1:1 as CSS-style property/value pairs."""
    hints: dict[str, str] = {}
    for key in sorted(component.style):
        spec = ATTRIBUTES.get(key)
        if spec is None or spec.css_name is None:
            continue
        hints[spec.css_name] = _css_value(spec.value_type, component.style[key])
    return hints


def _css_value(value_type: ValueType, value: object) -> str:
    if value_type in (ValueType.LENGTH, ValueType.SCALAR):
        n = _num(value)  # type: ignore[arg-type]
        if isinstance(n, float) and n.is_integer():
            return f"{int(n)}px"
        return f"{n}px"
    if value_type is ValueType.BOOLEAN:
        return "true" if value else "false"
    if value_type is ValueType.FONT_WEIGHT:
        return str(value)
    return str(value)


def provenance_to_jsonable(rec: ProvenanceRecord) -> dict:
    out: dict[str, Any] = {
        "attributeKey": rec.attribute_key,
        "referenceId": rec.reference_id,
        "bundle": rec.bundle.value,
        "timestamp": format_timestamp(rec.timestamp),
    }
    if rec.source_component_id is not None:
        out["sourceComponentId"] = rec.source_component_id
    return out


def component_to_jsonable(c: Component) -> dict:
    out: dict[str, Any] = {
        "id": c.id,
        "kind": _kind_to_jsonable(c.kind),
        "bbox": {"x": _num(c.bbox.x), "y": _num(c.bbox.y),
                 "w": _num(c.bbox.w), "h": _num(c.bbox.h)},
        "style": {k: _style_value_jsonable(v) for k, v in sorted(c.style.items())},
        "placeholder": c.placeholder,
        "locks": sorted(c.locks),
        "provenance": [provenance_to_jsonable(r)
                       for r in sorted(c.provenance, key=lambda r: r.attribute_key)],
    }
    if c.data_binding is not None:
        out["dataBinding"] = c.data_binding
    if c.render_spec is not None:
        out["renderSpec"] = c.render_spec
    if c.kind.family is not Family.CHART:
        hints = css_hints(c)
        if hints:
            out["cssHints"] = hints
    return out


def doc_to_jsonable(doc: DashboardDoc) -> dict:
    return {
        "id": doc.id,
        "title": doc.title,
        "author": doc.author,
        "canvasAspect": _num(doc.canvas_aspect),
        "revision": doc.revision,
        "components": [component_to_jsonable(c) for c in doc.components],
    }


def canonical_json_bytes(obj: object) -> bytes:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":"), allow_nan=False).encode("utf-8")


def canonical_serialize(doc: DashboardDoc) -> bytes:
    return canonical_json_bytes(doc_to_jsonable(doc))


def doc_digest(doc: DashboardDoc) -> str:
    """Content address of a document: sha256 of its canonical bytes."""
    return hashlib.sha256(canonical_serialize(doc)).hexdigest()


# --- parsing --------------------------------------------------------------

_DOC_FIELDS = {"id", "title", "author", "canvasAspect", "revision", "components"}
_COMPONENT_FIELDS = {"id", "kind", "bbox", "style", "dataBinding", "placeholder",
                     "locks", "provenance", "renderSpec", "cssHints"}
_PROVENANCE_FIELDS = {"attributeKey", "referenceId", "sourceComponentId",
                      "bundle", "timestamp"}


def _expect(obj: object, typ: type, path: str, what: str):
    if typ is float and isinstance(obj, int) and not isinstance(obj, bool):
        return float(obj)
    if not isinstance(obj, typ) or (typ in (int, float) and isinstance(obj, bool)):
        raise ParseError(f"expected {what}, got {type(obj).__name__}", path)
    return obj


def _get(obj: Mapping, key: str, typ: type, path: str, what: str):
    if key not in obj:
        raise ParseError(f"missing field {key!r}", path)
    return _expect(obj[key], typ, f"{path}.{key}", what)


def parse_doc(data: bytes | str) -> DashboardDoc:
    """Parse canonical (or canonicalizable) document bytes.

    Structural problems raise ParseError with a JSON path; semantic rule
    violations are left for validate_doc.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="strict")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", "$", exc.pos) from None

    root = _expect(raw, dict, "$", "object")
    unknown = set(root) - _DOC_FIELDS
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", "$")

    components = _get(root, "components", list, "$", "array")
    parsed = [
        _parse_component(entry, f"$.components[{i}]")
        for i, entry in enumerate(components)
    ]
    return DashboardDoc(
        id=_get(root, "id", str, "$", "string"),
        title=_get(root, "title", str, "$", "string"),
        author=_get(root, "author", str, "$", "string"),
        canvas_aspect=_get(root, "canvasAspect", float, "$", "number"),
        revision=_get(root, "revision", int, "$", "integer"),
        components=tuple(parsed),
    )


def _parse_component(entry: object, path: str) -> Component:
    obj = _expect(entry, dict, path, "object")
    unknown = set(obj) - _COMPONENT_FIELDS
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", path)

    kind_obj = _get(obj, "kind", dict, path, "object")
    family_raw = _get(kind_obj, "family", str, f"{path}.kind", "string")
    try:
        family = Family(family_raw)
    except ValueError:
        raise ParseError(f"unknown family {family_raw!r}", f"{path}.kind.family") from None
    subtype = None
    if "chartSubtype" in kind_obj:
        sub_raw = _expect(kind_obj["chartSubtype"], str, f"{path}.kind.chartSubtype", "string")
        try:
            subtype = ChartSubtype(sub_raw)
        except ValueError:
            raise ParseError(f"unknown chartSubtype {sub_raw!r}",
                             f"{path}.kind.chartSubtype") from None

    bbox_obj = _get(obj, "bbox", dict, path, "object")
    bbox = BoundingBox(
        x=_get(bbox_obj, "x", float, f"{path}.bbox", "number"),
        y=_get(bbox_obj, "y", float, f"{path}.bbox", "number"),
        w=_get(bbox_obj, "w", float, f"{path}.bbox", "number"),
        h=_get(bbox_obj, "h", float, f"{path}.bbox", "number"),
    )

    style_obj = _get(obj, "style", dict, path, "object")
    style: dict[str, object] = {}
    for key, value in style_obj.items():
        if not isinstance(value, (str, int, float, bool)):
            raise ParseError("style values must be JSON scalars", f"{path}.style.{key}")
        style[key] = value

    locks_raw = obj.get("locks", [])
    locks = [_expect(k, str, f"{path}.locks[{i}]", "string")
             for i, k in enumerate(_expect(locks_raw, list, f"{path}.locks", "array"))]

    prov_raw = _expect(obj.get("provenance", []), list, f"{path}.provenance", "array")
    provenance = [_parse_provenance(p, f"{path}.provenance[{i}]")
                  for i, p in enumerate(prov_raw)]

    data_binding = None
    if "dataBinding" in obj and obj["dataBinding"] is not None:
        data_binding = _expect(obj["dataBinding"], str, f"{path}.dataBinding", "string")

    render_spec = None
    if "renderSpec" in obj and obj["renderSpec"] is not None:
        render_spec = _expect(obj["renderSpec"], dict, f"{path}.renderSpec", "object")

    return Component(
        id=_get(obj, "id", str, path, "string"),
        kind=ComponentKind(family, subtype),
        bbox=bbox,
        style=style,
        data_binding=data_binding,
        placeholder=_expect(obj.get("placeholder", False), bool,
                            f"{path}.placeholder", "boolean"),
        locks=frozenset(locks),
        provenance=tuple(provenance),
        render_spec=render_spec,
    )


def _parse_provenance(entry: object, path: str) -> ProvenanceRecord:
    obj = _expect(entry, dict, path, "object")
    unknown = set(obj) - _PROVENANCE_FIELDS
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", path)
    bundle_raw = _get(obj, "bundle", str, path, "string")
    try:
        bundle = Bundle(bundle_raw)
    except ValueError:
        raise ParseError(f"unknown bundle {bundle_raw!r}", f"{path}.bundle") from None
    source_id = None
    if "sourceComponentId" in obj and obj["sourceComponentId"] is not None:
        source_id = _expect(obj["sourceComponentId"], str,
                            f"{path}.sourceComponentId", "string")
    return ProvenanceRecord(
        attribute_key=_get(obj, "attributeKey", str, path, "string"),
        reference_id=_get(obj, "referenceId", str, path, "string"),
        source_component_id=source_id,
        bundle=bundle,
        timestamp=parse_timestamp(_get(obj, "timestamp", str, path, "string"),
                                  f"{path}.timestamp"),
    )
