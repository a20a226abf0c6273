"""Turn dashboard references into validated designs in the shared representation.

Two paths: structured documents (deterministic, first-class) and image
extraction through an external multimodal-model service behind the
ExtractorClient interface. Extraction output is never trusted: every key
and value is re-validated against the vocabulary, geometry is clamped,
and anything that does not fit is dropped with a warning.
"""

from __future__ import annotations

import base64
import hashlib
import os
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Iterable, Mapping, Protocol, Sequence

import httpx

from .model import (
    BoundingBox,
    Component,
    ComponentKind,
    DashboardDoc,
    ValidationReport,
    normalize_component,
    utc_now,
    validate_doc,
)
from .serialize import parse_doc
from .vocabulary import (
    ATTRIBUTES,
    ChartSubtype,
    Family,
    ValueType,
    coerce_value,
    describe_schema,
    key_applies,
)

EXTRACTOR_URL_VAR = "REDASH_EXTRACTOR_URL"
EXTRACTOR_KEY_VAR = "REDASH_EXTRACTOR_KEY"

_MAX_RETRIES = 2
_MIN_EXTENT = 0.01


class DocumentRejected(ValueError):
    """Ingested document failed validation; the report lists every rule hit."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(f"document rejected: {report}")


class ExtractionError(RuntimeError):
    """Image extraction failed after retries."""


@dataclass(frozen=True)
class Origin:
    kind: str  # "structuredFile" | "imageExtraction"
    extractor_id: str | None = None
    image_digest: str | None = None


@dataclass(frozen=True)
class ReferenceDesign:
    doc: DashboardDoc
    origin: Origin
    bookmarked: bool = False
    ingested_at: datetime = field(default_factory=utc_now)


@dataclass(frozen=True)
class ExtractionReport:
    retry_count: int = 0
    warnings: tuple[str, ...] = ()


class ExtractorClient(Protocol):
    """Boundary to the external extraction service.

    Given image bytes and the vocabulary schema, returns candidate
    components as [{kind, bbox, attrs}]. May be nondeterministic and may
    raise on transport failure.
    """

    extractor_id: str

    def extract(self, image: bytes, schema: list[dict]) -> Sequence[Mapping]:
        ...


class HttpExtractorClient:
    """POSTs the image and schema descriptor to a configured endpoint."""

    def __init__(self, url: str, api_key: str | None = None, timeout: float = 60.0):
        self.url = url
        self.api_key = api_key
        self.timeout = timeout
        self.extractor_id = f"http:{url}"

    def extract(self, image: bytes, schema: list[dict]) -> Sequence[Mapping]:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {"imageBase64": base64.b64encode(image).decode("ascii"),
                   "schema": schema}
        response = httpx.post(self.url, json=payload, headers=headers,
                              timeout=self.timeout)
        response.raise_for_status()
        return response.json()


def extractor_from_env() -> HttpExtractorClient | None:
    url = os.environ.get(EXTRACTOR_URL_VAR)
    if not url:
        return None
    return HttpExtractorClient(url, os.environ.get(EXTRACTOR_KEY_VAR))


# --- structured ingestion ---------------------------------------------------

def ingest_document(data: bytes | str) -> ReferenceDesign:
    """Parse, normalize, and validate a structured dashboard document.

    Normalization: canonical reading order and colors, locks and provenance
    cleared, placeholder flags cleared (references are design sources, not
    editing targets); data bindings pass through as opaque ids.
    """
    doc = parse_doc(data)
    cleaned = [
        normalize_component(replace(c, locks=frozenset(), provenance=(),
                                    placeholder=False))
        for c in doc.components
    ]
    normalized = DashboardDoc.assemble(
        id=doc.id, title=doc.title, author=doc.author,
        canvas_aspect=doc.canvas_aspect, components=cleaned,
        revision=doc.revision,
    )
    report = validate_doc(normalized)
    if not report.ok:
        raise DocumentRejected(report)
    return ReferenceDesign(doc=normalized, origin=Origin(kind="structuredFile"))


# --- style normalization ----------------------------------------------------

def normalize_style(raw: Mapping[str, object], kind: ComponentKind,
                    ) -> tuple[dict[str, object], list[str]]:
    """Keep only applicable vocabulary keys with type-valid values.

    Negative lengths clamp to 0, colors lowercase; every dropped or
    adjusted entry produces one warning.
    """
    spec: dict[str, object] = {}
    warnings: list[str] = []
    for key in raw:
        if not isinstance(key, str) or key not in ATTRIBUTES:
            warnings.append(f"dropped {key!r}: unknown key")
            continue
        if not key_applies(key, kind.family):
            warnings.append(f"dropped {key!r}: inapplicable to {kind}")
            continue
        value, warning = _parse_raw_value(key, raw[key])
        if warning is not None:
            warnings.append(warning)
        if value is not None:
            spec[key] = value
    return spec, warnings


def _parse_raw_value(key: str, raw: object) -> tuple[object | None, str | None]:
    """Coerce an extraction value (typically a string) for a key.

    Returns (value, warning); value None means the entry was dropped.
    """
    vt = ATTRIBUTES[key].value_type
    candidate: object = raw
    if isinstance(raw, str):
        text = raw.strip()
        if vt in (ValueType.LENGTH, ValueType.SCALAR):
            try:
                candidate = float(text.removesuffix("px").strip())
            except ValueError:
                return None, f"dropped {key!r}: not a number ({raw!r})"
        elif vt is ValueType.FONT_WEIGHT:
            try:
                candidate = int(text)
            except ValueError:
                return None, f"dropped {key!r}: not an integer weight ({raw!r})"
        elif vt is ValueType.BOOLEAN:
            lowered = text.lower()
            if lowered in ("true", "false"):
                candidate = lowered == "true"
            else:
                return None, f"dropped {key!r}: not a boolean ({raw!r})"
        else:
            candidate = text
    if vt is ValueType.FONT_WEIGHT and isinstance(candidate, float) \
            and candidate.is_integer():
        candidate = int(candidate)
    if vt is ValueType.LENGTH and isinstance(candidate, (int, float)) \
            and not isinstance(candidate, bool) and candidate == candidate \
            and candidate < 0:
        return coerce_value(key, 0.0), f"clamped {key!r}: negative length {candidate} -> 0"
    try:
        return coerce_value(key, candidate), None
    except (TypeError, ValueError) as exc:
        return None, f"dropped {key!r}: {exc}"


# --- image extraction -------------------------------------------------------

def extract_from_image(image: bytes, client: ExtractorClient,
                       ) -> tuple[ReferenceDesign, ExtractionReport]:
    """Run the extraction service and harden its output into a valid design.

    Retries up to two times on transport failure or unusable output; the
    result always passes validate_doc regardless of what the client returns.
    """
    if not image:
        raise ExtractionError("empty image")
    if client is None:
        raise ExtractionError("no extractor client configured")

    schema = describe_schema()
    digest = hashlib.sha256(image).hexdigest()
    last_failure = "extraction failed"
    for attempt in range(_MAX_RETRIES + 1):
        try:
            raw = client.extract(image, schema)
        except Exception as exc:
            last_failure = f"extractor transport failure: {exc}"
            continue
        components, warnings = _components_from_raw(raw)
        if not components:
            last_failure = ("extractor returned zero usable components"
                            if _looks_like_component_list(raw)
                            else "extractor output unparseable")
            continue
        doc = DashboardDoc.assemble(
            id=f"extract-{digest[:12]}",
            title=f"Extracted reference {digest[:8]}",
            author="unknown",
            canvas_aspect=16 / 9,
            components=components,
        )
        design = ReferenceDesign(
            doc=doc,
            origin=Origin(kind="imageExtraction",
                          extractor_id=getattr(client, "extractor_id", "unknown"),
                          image_digest=digest),
        )
        return design, ExtractionReport(retry_count=attempt, warnings=tuple(warnings))
    raise ExtractionError(f"{last_failure} after {_MAX_RETRIES} retries")


def _looks_like_component_list(raw: object) -> bool:
    if isinstance(raw, Mapping):
        raw = raw.get("components")
    return isinstance(raw, Sequence) and not isinstance(raw, (str, bytes)) and len(raw) > 0


def _components_from_raw(raw: object) -> tuple[list[Component], list[str]]:
    if isinstance(raw, Mapping):
        raw = raw.get("components")
    if not isinstance(raw, Sequence) or isinstance(raw, (str, bytes)):
        return [], ["output is not a component array"]
    components: list[Component] = []
    warnings: list[str] = []
    for i, entry in enumerate(raw):
        component = _component_from_raw(entry, i, warnings)
        if component is not None:
            components.append(component)
    return components, warnings


def _component_from_raw(entry: object, index: int, warnings: list[str],
                        ) -> Component | None:
    tag = f"component[{index}]"
    if not isinstance(entry, Mapping):
        warnings.append(f"dropped {tag}: not an object")
        return None
    kind = _kind_from_raw(entry.get("kind"))
    if kind is None:
        warnings.append(f"dropped {tag}: unusable kind {entry.get('kind')!r}")
        return None
    bbox = _bbox_from_raw(entry.get("bbox"), tag, warnings)
    if bbox is None:
        return None
    attrs = entry.get("attrs", {})
    if not isinstance(attrs, Mapping):
        warnings.append(f"{tag}: attrs not an object, ignored")
        attrs = {}
    style, style_warnings = normalize_style(attrs, kind)
    warnings.extend(f"{tag}: {w}" for w in style_warnings)
    return normalize_component(Component(
        id=f"c{index + 1}", kind=kind, bbox=bbox, style=style,
    ))


def _kind_from_raw(raw: object) -> ComponentKind | None:
    family_raw: object = raw
    subtype_raw: object = None
    if isinstance(raw, Mapping):
        family_raw = raw.get("family")
        subtype_raw = raw.get("chartSubtype")
    elif isinstance(raw, str) and ":" in raw:
        family_raw, subtype_raw = raw.split(":", 1)
    try:
        family = Family(family_raw)
    except ValueError:
        return None
    if family is not Family.CHART:
        return ComponentKind(family)
    try:
        subtype = ChartSubtype(subtype_raw) if subtype_raw else ChartSubtype.OTHER
    except ValueError:
        subtype = ChartSubtype.OTHER
    return ComponentKind(family, subtype)


def _bbox_from_raw(raw: object, tag: str, warnings: list[str]) -> BoundingBox | None:
    values: Iterable[object]
    if isinstance(raw, Mapping):
        values = (raw.get("x"), raw.get("y"), raw.get("w"), raw.get("h"))
    elif isinstance(raw, Sequence) and not isinstance(raw, (str, bytes)) and len(raw) == 4:
        values = tuple(raw)
    else:
        warnings.append(f"dropped {tag}: unusable bbox {raw!r}")
        return None
    numbers = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or v != v \
                or v in (float("inf"), float("-inf")):
            warnings.append(f"dropped {tag}: unusable bbox {raw!r}")
            return None
        numbers.append(float(v))
    x, y, w, h = numbers
    cw = min(max(w, _MIN_EXTENT), 1.0)
    ch = min(max(h, _MIN_EXTENT), 1.0)
    cx = min(max(x, 0.0), 1.0 - cw)
    cy = min(max(y, 0.0), 1.0 - ch)
    if any(abs(a - b) > 1e-9 for a, b in zip((cx, cy, cw, ch), (x, y, w, h))):
        warnings.append(f"{tag}: bbox clamped into canvas")
    return BoundingBox(cx, cy, cw, ch)
