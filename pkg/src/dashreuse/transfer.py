"""Design transfer: representative specs, pair merging, one-click bundle
application with fill-in-the-blanks, layout transfer with placeholders,
attribute locks, wide propagation, and attribution.

Every operation is pure: input documents are never mutated, outputs carry
a bumped revision, and each attribute write leaves exactly one provenance
record per (component, key) — the newest write supersedes older records
for the same key.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Callable, Iterable, Mapping, Protocol, Sequence

import httpx

from .ingest import ReferenceDesign
from .matching import (
    ALL,
    MatchPair,
    Selection,
    match_components,
    resolve_selection,
    unmatched,
)
from .model import (
    BoundingBox,
    Component,
    ComponentKind,
    DashboardDoc,
    ProvenanceRecord,
    reading_order,
    utc_now,
    with_style,
)
from .vocabulary import (
    Bundle,
    Family,
    atomic_bundle,
    bundle_includes_geometry,
    bundle_keys,
    coerce_value,
    key_applies,
)

MERGER_URL_VAR = "REDASH_MERGER_URL"
MERGER_KEY_VAR = "REDASH_MERGER_KEY"

# Below this pair score the source is a weak analogue and the
# frequency-based representative spec fills in instead.
WEAK_PAIR_THRESHOLD = 0.5

# Unmatched targets re-flow into bands below the transferred region,
# separated by this canvas-fraction gap.
REFLOW_GAP = 0.02

PADDING_KEY = "layout.padding"

REMOVE = object()  # sentinel for propagate_attribute


class TransferError(ValueError):
    pass


@dataclass(frozen=True)
class ReuseRequest:
    reference_id: str
    bundle: Bundle
    source_sel: Selection = ALL
    target_sel: Selection = ALL
    fill_placeholders: bool = False


@dataclass
class TransferReport:
    pairs: list[MatchPair] = field(default_factory=list)
    representative_used_for: list[str] = field(default_factory=list)
    placeholders_created: list[str] = field(default_factory=list)
    dropped_keys: list[tuple[str, str, str]] = field(default_factory=list)
    locked_skips: list[tuple[str, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_jsonable(self) -> dict:
        return {
            "pairs": [{"sourceId": p.source_id, "targetId": p.target_id,
                       "score": round(p.score, 9)} for p in self.pairs],
            "representativeUsedFor": sorted(self.representative_used_for),
            "placeholdersCreated": list(self.placeholders_created),
            "droppedKeys": [{"targetId": t, "key": k, "reason": r}
                            for t, k, r in self.dropped_keys],
            "lockedSkips": [{"targetId": t, "key": k} for t, k in self.locked_skips],
            "notes": list(self.notes),
        }


class PairMerger(Protocol):
    """Optional external merge service for matched source-target pairs.

    Output is schema-validated; on any failure (exception, keys outside
    the bundle, inapplicable keys, bad values) the deterministic merge is
    used instead.
    """

    def merge(self, source_style: Mapping[str, object],
              target_style: Mapping[str, object],
              key_set: frozenset[str]) -> Mapping[str, object]:
        ...


class HttpPairMerger:
    def __init__(self, url: str, api_key: str | None = None, timeout: float = 30.0):
        self.url = url
        self.api_key = api_key
        self.timeout = timeout

    def merge(self, source_style, target_style, key_set):
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {"sourceStyle": dict(source_style),
                   "targetStyle": dict(target_style),
                   "keySet": sorted(key_set)}
        response = httpx.post(self.url, json=payload, headers=headers,
                              timeout=self.timeout)
        response.raise_for_status()
        return response.json()


def merger_from_env() -> HttpPairMerger | None:
    url = os.environ.get(MERGER_URL_VAR)
    if not url:
        return None
    return HttpPairMerger(url, os.environ.get(MERGER_KEY_VAR))


# --- representative spec ----------------------------------------------------

def representative_spec(sources: Sequence[Component],
                        bundle: Bundle) -> dict[str, object]:
    """Frequency-based spec over all source selections: per bundle key, the
    most common value; ties go to the value owned by the earliest source in
    reading order. Sources must be passed in reading order."""
    if not sources:
        raise TransferError("empty source selection")
    spec: dict[str, object] = {}
    for key in sorted(bundle_keys(bundle)):
        counts: dict[object, int] = {}
        first_seen: dict[object, int] = {}
        for index, source in enumerate(sources):
            if key not in source.style:
                continue
            value = source.style[key]
            counts[value] = counts.get(value, 0) + 1
            first_seen.setdefault(value, index)
        if not counts:
            continue
        best = max(counts, key=lambda v: (counts[v], -first_seen[v]))
        spec[key] = best
    return spec


# --- pair merging -----------------------------------------------------------

def deterministic_pair_merge(source: Component, target: Component,
                             key_set: frozenset[str],
                             ) -> tuple[dict[str, object], list[tuple[str, str]]]:
    """Target style overwritten by the source's bundle keys.

    Returns (merged style, dropped keys): source keys in the bundle that do
    not apply to the target's kind are dropped and reported.
    """
    merged = dict(target.style)
    dropped: list[tuple[str, str]] = []
    for key in sorted(key_set & set(source.style)):
        if key_applies(key, target.kind.family):
            merged[key] = source.style[key]
        else:
            dropped.append((key, "inapplicable"))
    return merged, dropped


def _validated_merger_output(raw: object, target: Component,
                             key_set: frozenset[str]) -> dict[str, object] | None:
    if not isinstance(raw, Mapping):
        return None
    out: dict[str, object] = {}
    for key, value in raw.items():
        if key not in key_set or not key_applies(key, target.kind.family):
            return None
        try:
            out[key] = coerce_value(key, value)
        except (TypeError, ValueError):
            return None
    return out


# --- provenance -------------------------------------------------------------

def _written(component: Component, updates: Mapping[str, object],
             reference_id: str, source_component_id: str | None,
             ts: datetime) -> Component:
    """Apply attribute writes and supersede provenance per written key."""
    if not updates:
        return component
    style = dict(component.style)
    style.update(updates)
    records = [r for r in component.provenance if r.attribute_key not in updates]
    for key in sorted(updates):
        records.append(ProvenanceRecord(
            attribute_key=key, reference_id=reference_id,
            source_component_id=source_component_id,
            bundle=atomic_bundle(key), timestamp=ts))
    return replace(with_style(component, style),
                   provenance=tuple(sorted(records, key=lambda r: r.attribute_key)))


def _split_locked(component: Component, updates: Mapping[str, object],
                  report: TransferReport) -> dict[str, object]:
    writable = {}
    for key, value in updates.items():
        if key in component.locks:
            report.locked_skips.append((component.id, key))
        else:
            writable[key] = value
    return writable


# --- bundle application -----------------------------------------------------

def apply_bundle(canvas: DashboardDoc, reference: ReferenceDesign,
                 request: ReuseRequest, merger: PairMerger | None = None,
                 now: datetime | None = None,
                 ) -> tuple[DashboardDoc, TransferReport]:
    """One-click scoped reuse: match source and target selections, merge
    bundle attributes pair-wise (weak matches and unmatched targets fall
    back to the representative spec), then transfer geometry when the
    bundle includes it."""
    bundle = Bundle(request.bundle)
    key_set = bundle_keys(bundle)
    sources = resolve_selection(reference.doc, request.source_sel)
    if not sources:
        raise TransferError("empty source selection")
    targets = resolve_selection(canvas, request.target_sel)
    ts = now or utc_now()

    report = TransferReport()
    pairs = match_components(sources, targets)
    report.pairs = pairs
    rep = representative_spec(sources, bundle)
    source_by_id = {c.id: c for c in sources}
    pair_by_target = {p.target_id: p for p in pairs}

    updated: dict[str, Component] = {c.id: c for c in canvas.components}
    for target in targets:
        pair = pair_by_target.get(target.id)
        if pair is not None and pair.score >= WEAK_PAIR_THRESHOLD:
            source = source_by_id[pair.source_id]
            updates = _merge_for_pair(source, target, key_set, merger, report)
            source_id: str | None = source.id
        else:
            updates = {k: v for k, v in rep.items()
                       if key_applies(k, target.kind.family)}
            source_id = None
            report.representative_used_for.append(target.id)
        writable = _split_locked(target, updates, report)
        updated[target.id] = _written(updated[target.id], writable,
                                      request.reference_id, source_id, ts)

    if bundle_includes_geometry(bundle):
        _layout_phase(updated, [t.id for t in targets], pairs, sources,
                      request.fill_placeholders, reference.doc.id,
                      request.reference_id, ts, report)

    out = canvas.with_components(updated.values())
    return out, report


def _merge_for_pair(source: Component, target: Component,
                    key_set: frozenset[str], merger: PairMerger | None,
                    report: TransferReport) -> dict[str, object]:
    if merger is not None:
        try:
            raw = merger.merge(dict(source.style), dict(target.style), key_set)
        except Exception as exc:
            report.notes.append(
                f"merger failed for {source.id}->{target.id} ({exc}); "
                "deterministic merge used")
        else:
            validated = _validated_merger_output(raw, target, key_set)
            if validated is not None:
                return validated
            report.notes.append(
                f"merger output rejected for {source.id}->{target.id}; "
                "deterministic merge used")
    updates: dict[str, object] = {}
    for key in sorted(key_set & set(source.style)):
        if key_applies(key, target.kind.family):
            updates[key] = source.style[key]
        else:
            report.dropped_keys.append((target.id, key, "inapplicable"))
    return updates


# --- layout transfer --------------------------------------------------------

def transfer_layout(canvas: DashboardDoc, reference: ReferenceDesign,
                    pairs: Sequence[MatchPair], fill_placeholders: bool,
                    target_sel: Selection = ALL, source_sel: Selection = ALL,
                    reference_id: str | None = None,
                    now: datetime | None = None,
                    ) -> tuple[DashboardDoc, list[str]]:
    """Standalone geometry transfer over an existing pairing."""
    sources = resolve_selection(reference.doc, source_sel)
    targets = resolve_selection(canvas, target_sel)
    ts = now or utc_now()
    report = TransferReport()
    updated: dict[str, Component] = {c.id: c for c in canvas.components}
    _layout_phase(updated, [t.id for t in targets], pairs, sources,
                  fill_placeholders, reference.doc.id,
                  reference_id or reference.doc.id, ts, report)
    return canvas.with_components(updated.values()), report.placeholders_created


def _layout_phase(updated: dict[str, Component], target_ids: Sequence[str],
                  pairs: Sequence[MatchPair], sources: Sequence[Component],
                  fill_placeholders: bool, reference_doc_id: str,
                  reference_id: str, ts: datetime,
                  report: TransferReport) -> None:
    source_by_id = {c.id: c for c in sources}
    transferred: list[BoundingBox] = []

    for pair in pairs:
        source = source_by_id[pair.source_id]
        target = updated[pair.target_id]
        target = replace(target, bbox=source.bbox)
        if PADDING_KEY in source.style:
            if PADDING_KEY in target.locks:
                report.locked_skips.append((target.id, PADDING_KEY))
            else:
                target = _written(target, {PADDING_KEY: source.style[PADDING_KEY]},
                                  reference_id, source.id, ts)
        updated[pair.target_id] = target
        transferred.append(source.bbox)

    if fill_placeholders:
        for source in unmatched(sources, pairs, "source"):
            placeholder_id = f"ph-{reference_doc_id}-{source.id}"
            shell = Component(id=placeholder_id, kind=source.kind,
                              bbox=source.bbox, placeholder=True)
            # full source style, not just bundle keys: placeholders exist
            # to preview the borrowed design
            updated[placeholder_id] = _written(shell, dict(source.style),
                                               reference_id, source.id, ts)
            report.placeholders_created.append(placeholder_id)
            transferred.append(source.bbox)

    matched_targets = {p.target_id for p in pairs}
    strays = [updated[tid] for tid in target_ids if tid not in matched_targets]
    _reflow(updated, strays, transferred)


def _reflow(updated: dict[str, Component], strays: Sequence[Component],
            transferred: Sequence[BoundingBox]) -> None:
    """Re-flow unmatched targets, size preserved, into horizontal bands
    below the transferred region, left to right in reading order."""
    if not strays:
        return
    region_end = max((b.y + b.h for b in transferred), default=0.0)
    band_y = region_end + REFLOW_GAP if region_end > 0 else 0.0
    band_h = 0.0
    cursor_x = 0.0
    for stray in strays:
        w, h = stray.bbox.w, stray.bbox.h
        if cursor_x > 0 and cursor_x + w > 1 + 1e-9:
            band_y += band_h + REFLOW_GAP
            band_h = 0.0
            cursor_x = 0.0
        y = min(band_y, max(0.0, 1.0 - h))  # keep inside the canvas
        updated[stray.id] = replace(stray, bbox=BoundingBox(cursor_x, y, w, h))
        band_h = max(band_h, h)
        cursor_x += w + REFLOW_GAP


# --- propagation, locks, attribution ----------------------------------------

def propagate_attribute(doc: DashboardDoc, key: str, value: object,
                        scope: Family | str = ALL,
                        now: datetime | None = None) -> DashboardDoc:
    """Set or remove one attribute across every in-scope, unlocked component
    where it applies. Pass REMOVE as the value to revert to the platform
    default. Local writes carry an empty referenceId in provenance."""
    family = None if scope == ALL else Family(scope)
    if value is not REMOVE:
        try:
            value = coerce_value(key, value)
        except ValueError as exc:
            raise TransferError(str(exc)) from None
    elif key not in bundle_keys(Bundle.ALL):
        raise TransferError(f"unknown attribute key: {key}")
    ts = now or utc_now()

    components = []
    for c in doc.components:
        in_scope = (family is None or c.kind.family is family) \
            and key_applies(key, c.kind.family) and key not in c.locks
        if not in_scope:
            components.append(c)
        elif value is REMOVE:
            components.append(_removed(c, key, ts))
        else:
            components.append(_written(c, {key: value}, "", None, ts))
    return doc.with_components(components)


def _removed(component: Component, key: str, ts: datetime) -> Component:
    if key not in component.style:
        return component
    style = {k: v for k, v in component.style.items() if k != key}
    records = [r for r in component.provenance if r.attribute_key != key]
    records.append(ProvenanceRecord(
        attribute_key=key, reference_id="", source_component_id=None,
        bundle=atomic_bundle(key), timestamp=ts))
    return replace(with_style(component, style, removed=(key,)),
                   provenance=tuple(sorted(records, key=lambda r: r.attribute_key)))


def set_locks(doc: DashboardDoc, component_id: str,
              keys: Iterable[str]) -> DashboardDoc:
    """Replace a component's sacrosanct keys; transfers and propagation
    will not touch them afterwards."""
    target = doc.component(component_id)  # raises KeyError when unknown
    locks = frozenset(keys)
    for key in sorted(locks):
        if not key_applies(key, target.kind.family):
            raise TransferError(f"lock key {key!r} not applicable to {target.kind}")
    components = [replace(c, locks=locks) if c.id == component_id else c
                  for c in doc.components]
    return doc.with_components(components)


@dataclass(frozen=True)
class AttributionRow:
    category: str
    reference_title: str
    author: str
    attribute_count: int

    def to_jsonable(self) -> dict:
        return {"category": self.category, "referenceTitle": self.reference_title,
                "author": self.author, "attributeCount": self.attribute_count}


def attribution_summary(doc: DashboardDoc,
                        lookup: Callable[[str], tuple[str, str] | None],
                        ) -> list[AttributionRow]:
    """Aggregate provenance into per-(category, reference) credit rows,
    ordered by descending attribute count then title. Dangling reference
    ids surface with author "unknown"; local edits (empty referenceId)
    are not reference credits and are skipped."""
    counts: dict[tuple[str, str], int] = {}
    for c in doc.components:
        for record in c.provenance:
            if not record.reference_id:
                continue
            group = (atomic_bundle(record.attribute_key).value, record.reference_id)
            counts[group] = counts.get(group, 0) + 1

    category_rank = {b.value: i for i, b in enumerate(
        (Bundle.COLOR, Bundle.LINES, Bundle.TEXT, Bundle.LAYOUT))}
    rows = []
    for (category, reference_id), count in counts.items():
        meta = lookup(reference_id)
        title, author = meta if meta is not None else (reference_id, "unknown")
        rows.append(AttributionRow(category, title, author, count))
    rows.sort(key=lambda r: (-r.attribute_count, r.reference_title,
                             category_rank.get(r.category, 99), r.author))
    return rows
