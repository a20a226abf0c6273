"""HTTP API over the engine: references, bundles, canvas sessions with undo.

Every document payload is canonical JSON, bit-identical to the file
format, so clients can diff and replay responses. Mutations to a canvas
push onto its bounded undo history and are serialized per session.
"""

from __future__ import annotations

import base64
import threading
import uuid
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .catalog import ReferenceStore, UnknownReference
from .ingest import (
    DocumentRejected,
    ExtractionError,
    ExtractorClient,
    extract_from_image,
    extractor_from_env,
    ingest_document,
)
from .matching import ALL, SelectionError
from .model import BoundingBox, Component, DashboardDoc, validate_doc
from .serialize import (
    ParseError,
    canonical_json_bytes,
    canonical_serialize,
    doc_to_jsonable,
    format_timestamp,
    parse_doc,
)
from .transfer import (
    REMOVE,
    PairMerger,
    ReuseRequest,
    TransferError,
    apply_bundle,
    attribution_summary,
    merger_from_env,
    propagate_attribute,
    set_locks,
)
from .vocabulary import (
    Bundle,
    Family,
    bundle_feature_list,
    bundle_includes_geometry,
    bundle_keys,
)

HISTORY_LIMIT = 50
DEFAULT_PORT = 7878


@dataclass
class CanvasSession:
    canvas_id: str
    history: list[DashboardDoc]
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def current(self) -> DashboardDoc:
        return self.history[-1]

    def push(self, doc: DashboardDoc) -> None:
        self.history.append(doc)
        if len(self.history) > HISTORY_LIMIT:
            del self.history[0]


def load_palette() -> list[Component]:
    data = resources.files("dashreuse.data").joinpath("palette.json").read_bytes()
    return list(parse_doc(data).components)


def _canonical_response(payload: object, status_code: int = 200) -> Response:
    return Response(content=canonical_json_bytes(payload), status_code=status_code,
                    media_type="application/json")


def _doc_response(doc: DashboardDoc) -> Response:
    return Response(content=canonical_serialize(doc), media_type="application/json")


def _entry_jsonable(entry) -> dict:
    return {
        "referenceId": entry.reference_id,
        "title": entry.design.doc.title,
        "author": entry.design.doc.author,
        "bookmarked": entry.design.bookmarked,
        "tags": list(entry.tags),
        "addedAt": format_timestamp(entry.added_at) if entry.added_at else None,
        "componentCount": len(entry.design.doc.components),
    }


def create_app(store: ReferenceStore | str | Path | None = None,
               extractor: ExtractorClient | None = None,
               merger: PairMerger | None = None) -> FastAPI:
    if not isinstance(store, ReferenceStore):
        from .catalog import store_from_env
        store = store_from_env(store)
    if extractor is None:
        extractor = extractor_from_env()
    if merger is None:
        merger = merger_from_env()

    app = FastAPI(title="dashreuse", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    sessions: dict[str, CanvasSession] = {}
    sessions_lock = threading.Lock()
    palette = load_palette()

    def session_of(canvas_id: str) -> CanvasSession:
        session = sessions.get(canvas_id)
        if session is None:
            raise HTTPException(404, f"unknown canvas {canvas_id}")
        return session

    async def body_json(request: Request) -> dict:
        try:
            import json
            payload = json.loads(await request.body() or b"{}")
        except ValueError as exc:
            raise HTTPException(400, f"invalid JSON body: {exc}") from None
        if not isinstance(payload, dict):
            raise HTTPException(400, "body must be a JSON object")
        return payload

    # -- references -------------------------------------------------------

    @app.post("/references")
    async def post_reference(request: Request):
        payload = await body_json(request)
        tags = payload.get("tags", [])
        try:
            if payload.get("extract"):
                if extractor is None:
                    raise HTTPException(
                        502, "extractor not configured; no fallback for extraction")
                image = base64.b64decode(payload.get("image", "") or "")
                try:
                    design, _ = extract_from_image(image, extractor)
                except ExtractionError as exc:
                    raise HTTPException(502, str(exc)) from None
            else:
                doc_obj = payload.get("doc", payload if "components" in payload else None)
                if doc_obj is None:
                    raise HTTPException(400, "body must be a document or "
                                             "{image, extract:true}")
                design = ingest_document(canonical_json_bytes(doc_obj))
        except ParseError as exc:
            raise HTTPException(400, str(exc)) from None
        except DocumentRejected as exc:
            raise HTTPException(400, str(exc)) from None
        reference_id = store.add_reference(design, tags=tags)
        return _canonical_response({"referenceId": reference_id}, 201)

    @app.get("/references")
    def list_references(bookmarked: bool = False, tag: str | None = None):
        entries = store.list_references(bookmarked_only=bookmarked, tag=tag)
        return _canonical_response({"references": [_entry_jsonable(e) for e in entries]})

    @app.post("/references/{reference_id}/bookmark")
    async def bookmark(reference_id: str, request: Request):
        payload = await body_json(request)
        flag = payload.get("flag")
        if not isinstance(flag, bool):
            raise HTTPException(400, "flag must be a boolean")
        try:
            entry = store.set_bookmark(reference_id, flag)
        except UnknownReference as exc:
            raise HTTPException(404, str(exc)) from None
        return _canonical_response(_entry_jsonable(entry))

    @app.get("/references/{reference_id}")
    def get_reference(reference_id: str):
        try:
            entry = store.get(reference_id)
        except UnknownReference as exc:
            raise HTTPException(404, str(exc)) from None
        return _doc_response(entry.design.doc)

    @app.get("/references/{reference_id}/bundles")
    def bundles(reference_id: str):
        try:
            store.get(reference_id)
        except UnknownReference as exc:
            raise HTTPException(404, str(exc)) from None
        rows = [{
            "name": b.value,
            "features": bundle_feature_list(b),
            "includesGeometry": bundle_includes_geometry(b),
            "keys": sorted(bundle_keys(b)),
        } for b in Bundle]
        return _canonical_response({"bundles": rows})

    # -- palette and canvases ----------------------------------------------

    @app.get("/palette")
    def get_palette():
        from .serialize import component_to_jsonable
        return _canonical_response(
            {"components": [component_to_jsonable(c) for c in palette]})

    @app.post("/canvas")
    async def create_canvas(request: Request):
        payload = await body_json(request)
        canvas_id = f"cv-{uuid.uuid4().hex[:12]}"
        if "doc" in payload:
            try:
                doc = parse_doc(canonical_json_bytes(payload["doc"]))
            except ParseError as exc:
                raise HTTPException(400, str(exc)) from None
            report = validate_doc(doc)
            if not report.ok:
                raise HTTPException(400, f"invalid document: {report}")
        else:
            doc = DashboardDoc.assemble(
                id=canvas_id,
                title=payload.get("title", "Untitled dashboard"),
                author=payload.get("author", ""),
                canvas_aspect=payload.get("canvasAspect", 16 / 9),
            )
        with sessions_lock:
            sessions[canvas_id] = CanvasSession(canvas_id, [doc])
        return _canonical_response({"canvasId": canvas_id,
                                    "revision": doc.revision}, 201)

    @app.get("/canvas/{canvas_id}")
    def get_canvas(canvas_id: str):
        return _doc_response(session_of(canvas_id).current)

    @app.post("/canvas/{canvas_id}/components")
    async def add_component(canvas_id: str, request: Request):
        session = session_of(canvas_id)
        payload = await body_json(request)
        palette_id = payload.get("paletteComponentId")
        template = next((c for c in palette if c.id == palette_id), None)
        if template is None:
            raise HTTPException(404, f"unknown palette component {palette_id}")
        bbox_obj = payload.get("bbox")
        with session.lock:
            doc = session.current
            if isinstance(bbox_obj, dict):
                try:
                    bbox = BoundingBox(**{k: float(bbox_obj[k]) for k in "xywh"})
                except (KeyError, TypeError, ValueError):
                    raise HTTPException(400, "bbox must be {x,y,w,h}") from None
            else:
                bbox = template.bbox
            from dataclasses import replace
            count = sum(1 for c in doc.components if c.id.startswith(f"{palette_id}-"))
            dropped = replace(template, id=f"{palette_id}-{count + 1}", bbox=bbox)
            new_doc = doc.with_components((*doc.components, dropped))
            report = validate_doc(new_doc)
            if not report.ok:
                raise HTTPException(400, f"invalid drop: {report}")
            session.push(new_doc)
            return _doc_response(new_doc)

    @app.post("/canvas/{canvas_id}/apply")
    async def apply(canvas_id: str, request: Request):
        session = session_of(canvas_id)
        payload = await body_json(request)
        try:
            reuse = _parse_reuse_request(payload)
        except (KeyError, ValueError) as exc:
            raise HTTPException(400, f"bad reuse request: {exc}") from None
        try:
            entry = store.get(reuse.reference_id)
        except UnknownReference as exc:
            raise HTTPException(404, str(exc)) from None
        with session.lock:
            try:
                doc, report = apply_bundle(session.current, entry.design, reuse,
                                           merger=merger)
            except SelectionError as exc:
                raise HTTPException(404, str(exc)) from None
            except TransferError as exc:
                raise HTTPException(400, str(exc)) from None
            session.push(doc)
            return _canonical_response({"doc": doc_to_jsonable(doc),
                                        "report": report.to_jsonable()})

    @app.post("/canvas/{canvas_id}/propagate")
    async def propagate(canvas_id: str, request: Request):
        session = session_of(canvas_id)
        payload = await body_json(request)
        key = payload.get("key")
        if not isinstance(key, str):
            raise HTTPException(400, "key must be a string")
        value = payload.get("value", None)
        scope = payload.get("scope", ALL)
        if scope != ALL:
            try:
                scope = Family(scope)
            except ValueError:
                raise HTTPException(400, f"unknown scope {scope!r}") from None
        with session.lock:
            try:
                doc = propagate_attribute(session.current, key,
                                          REMOVE if value is None else value,
                                          scope=scope)
            except TransferError as exc:
                raise HTTPException(400, str(exc)) from None
            session.push(doc)
            return _doc_response(doc)

    @app.post("/canvas/{canvas_id}/locks")
    async def locks(canvas_id: str, request: Request):
        session = session_of(canvas_id)
        payload = await body_json(request)
        component_id = payload.get("componentId")
        keys = payload.get("keys", [])
        if not isinstance(component_id, str) or not isinstance(keys, list):
            raise HTTPException(400, "expected {componentId, keys[]}")
        with session.lock:
            try:
                doc = set_locks(session.current, component_id, keys)
            except KeyError as exc:
                raise HTTPException(404, str(exc)) from None
            except TransferError as exc:
                raise HTTPException(400, str(exc)) from None
            session.push(doc)
            return _doc_response(doc)

    @app.post("/canvas/{canvas_id}/undo")
    def undo(canvas_id: str):
        session = session_of(canvas_id)
        with session.lock:
            if len(session.history) <= 1:
                raise HTTPException(409, "nothing to undo")
            session.history.pop()
            return _doc_response(session.current)

    @app.get("/canvas/{canvas_id}/attribution")
    def attribution(canvas_id: str):
        session = session_of(canvas_id)
        rows = attribution_summary(session.current, store.lookup_attribution)
        return _canonical_response({"attribution": [r.to_jsonable() for r in rows],
                                    "revision": session.current.revision})

    return app


def _parse_reuse_request(payload: dict) -> ReuseRequest:
    reference_id = payload["referenceId"]
    bundle = Bundle(payload["bundle"])
    return ReuseRequest(
        reference_id=reference_id,
        bundle=bundle,
        source_sel=_parse_selection(payload.get("sourceSel", ALL)),
        target_sel=_parse_selection(payload.get("targetSel", ALL)),
        fill_placeholders=bool(payload.get("fillPlaceholders", False)),
    )


def _parse_selection(raw: object):
    if raw == ALL or raw is None:
        return ALL
    if isinstance(raw, list) and all(isinstance(x, str) for x in raw):
        return raw
    raise ValueError(f"selection must be \"ALL\" or a list of ids, got {raw!r}")


def run(host: str = "127.0.0.1", port: int = DEFAULT_PORT,
        store: str | Path | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(store=store), host=host, port=port)
