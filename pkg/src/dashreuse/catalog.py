"""Persistent, content-addressed library of dashboard references.

Layout on disk: <root>/references/<id>.json holds each canonical document,
<root>/index.json holds entry metadata. Ids are sha256 digests of the
canonical document bytes, so adding the same document twice is a no-op and
ids are stable across processes.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path
from typing import Iterable

from .ingest import Origin, ReferenceDesign
from .model import utc_now, validate_doc
from .serialize import (
    canonical_json_bytes,
    canonical_serialize,
    doc_digest,
    format_timestamp,
    parse_doc,
    parse_timestamp,
)

STORE_DIR_VAR = "REDASH_STORE_DIR"


class UnknownReference(KeyError):
    def __init__(self, reference_id: str):
        self.reference_id = reference_id
        super().__init__(f"unknown reference {reference_id}")


@dataclass(frozen=True)
class CatalogEntry:
    reference_id: str
    design: ReferenceDesign
    tags: tuple[str, ...] = ()
    added_at: datetime | None = None


class ReferenceStore:
    """Single-writer, multi-reader file-backed store."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._references_dir = self.root / "references"
        self._index_path = self.root / "index.json"
        self._references_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    # -- internal index handling ------------------------------------------

    def _read_index(self) -> list[dict]:
        if not self._index_path.exists():
            return []
        return json.loads(self._index_path.read_text("utf-8"))

    def _write_index(self, rows: list[dict]) -> None:
        rows = sorted(rows, key=lambda r: (r["addedAt"], r["id"]))
        tmp = self._index_path.with_suffix(".json.tmp")
        tmp.write_bytes(canonical_json_bytes(rows))
        os.replace(tmp, self._index_path)

    def _entry_from_row(self, row: dict) -> CatalogEntry:
        doc_path = self._references_dir / f"{row['id']}.json"
        doc = parse_doc(doc_path.read_bytes())
        origin_raw = row.get("origin", {"kind": "structuredFile"})
        design = ReferenceDesign(
            doc=doc,
            origin=Origin(kind=origin_raw.get("kind", "structuredFile"),
                          extractor_id=origin_raw.get("extractorId"),
                          image_digest=origin_raw.get("imageDigest")),
            bookmarked=bool(row.get("bookmarked", False)),
            ingested_at=parse_timestamp(row["ingestedAt"], "$.ingestedAt"),
        )
        return CatalogEntry(
            reference_id=row["id"], design=design,
            tags=tuple(row.get("tags", [])),
            added_at=parse_timestamp(row["addedAt"], "$.addedAt"),
        )

    # -- operations ---------------------------------------------------------

    def add_reference(self, design: ReferenceDesign,
                      tags: Iterable[str] = ()) -> str:
        report = validate_doc(design.doc)
        if not report.ok:
            raise ValueError(f"invalid reference document: {report}")
        reference_id = doc_digest(design.doc)
        with self._lock:
            rows = self._read_index()
            if any(r["id"] == reference_id for r in rows):
                return reference_id
            doc_path = self._references_dir / f"{reference_id}.json"
            doc_path.write_bytes(canonical_serialize(design.doc))
            origin: dict = {"kind": design.origin.kind}
            if design.origin.extractor_id is not None:
                origin["extractorId"] = design.origin.extractor_id
            if design.origin.image_digest is not None:
                origin["imageDigest"] = design.origin.image_digest
            rows.append({
                "id": reference_id,
                "bookmarked": design.bookmarked,
                "tags": sorted(set(tags)),
                "addedAt": format_timestamp(utc_now()),
                "ingestedAt": format_timestamp(design.ingested_at),
                "origin": origin,
            })
            self._write_index(rows)
        return reference_id

    def get(self, reference_id: str) -> CatalogEntry:
        for row in self._read_index():
            if row["id"] == reference_id:
                return self._entry_from_row(row)
        raise UnknownReference(reference_id)

    def list_references(self, bookmarked_only: bool = False,
                        tag: str | None = None) -> list[CatalogEntry]:
        """Bookmarked entries first, then newest additions first."""
        entries = [self._entry_from_row(r) for r in self._read_index()]
        if bookmarked_only:
            entries = [e for e in entries if e.design.bookmarked]
        if tag is not None:
            entries = [e for e in entries if tag in e.tags]
        entries.sort(key=lambda e: (not e.design.bookmarked,
                                    _reverse_ts(e.added_at), e.reference_id))
        return entries

    def set_bookmark(self, reference_id: str, flag: bool) -> CatalogEntry:
        with self._lock:
            rows = self._read_index()
            for row in rows:
                if row["id"] == reference_id:
                    row["bookmarked"] = bool(flag)
                    self._write_index(rows)
                    entry = self._entry_from_row(row)
                    return replace(entry,
                                   design=replace(entry.design, bookmarked=bool(flag)))
        raise UnknownReference(reference_id)

    def lookup_attribution(self, reference_id: str) -> tuple[str, str] | None:
        """Title and author for attribution credits; None when dangling."""
        try:
            entry = self.get(reference_id)
        except UnknownReference:
            return None
        return entry.design.doc.title, entry.design.doc.author


def _reverse_ts(ts: datetime | None) -> float:
    return -ts.timestamp() if ts is not None else 0.0


def store_from_env(default: str | Path | None = None) -> ReferenceStore:
    root = os.environ.get(STORE_DIR_VAR) or default
    if root is None:
        root = Path.cwd() / ".dashreuse-store"
    return ReferenceStore(root)
