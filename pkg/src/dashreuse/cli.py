"""Command-line interface: ingest references, inspect bundles, apply scoped
reuse file-to-file, propagate attributes, report attribution, serve the API.

Exit codes: 0 success, 1 validation failure, 2 I/O failure,
3 external-service failure.
"""

from __future__ import annotations

import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from .catalog import ReferenceStore, UnknownReference, store_from_env
from .ingest import (
    DocumentRejected,
    ExtractionError,
    extract_from_image,
    extractor_from_env,
    ingest_document,
)
from .matching import ALL, SelectionError
from .model import validate_doc
from .serialize import (
    ParseError,
    canonical_json_bytes,
    canonical_serialize,
    parse_doc,
)
from .transfer import (
    REMOVE,
    ReuseRequest,
    TransferError,
    apply_bundle,
    attribution_summary,
    merger_from_env,
    propagate_attribute,
)
from .vocabulary import (
    Bundle,
    Family,
    bundle_feature_list,
    bundle_includes_geometry,
    coerce_value,
)

EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_EXTERNAL = 3

# File-to-file transforms must be reproducible byte for byte, so their
# provenance records carry a fixed instant instead of the wall clock.
_FIXED_NOW = datetime(1970, 1, 1, tzinfo=timezone.utc)


class CliError(click.ClickException):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from None


def _write_bytes(path: str, data: bytes) -> None:
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from None


def _load_doc(path: str):
    try:
        doc = parse_doc(_read_bytes(path))
    except ParseError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    report = validate_doc(doc)
    if not report.ok:
        raise CliError(f"invalid document: {report}", EXIT_VALIDATION)
    return doc


def _store(store_dir: str | None) -> ReferenceStore:
    return store_from_env(store_dir) if store_dir is None else ReferenceStore(store_dir)


def _selection(raw: str | None):
    return ALL if raw is None else [x for x in raw.split(",") if x]


@click.group()
def main() -> None:
    """Partial dashboard reuse engine."""


@main.command()
@click.argument("file", required=False, type=click.Path())
@click.option("--image", type=click.Path(), help="extract from an image instead")
@click.option("--store", "store_dir", type=click.Path(), help="reference store root")
@click.option("--tags", default="", help="comma-separated tags")
def ingest(file, image, store_dir, tags):
    """Ingest a dashboard document (or image) into the reference store."""
    if (file is None) == (image is None):
        raise CliError("pass exactly one of FILE or --image", EXIT_IO)
    if image is not None:
        client = extractor_from_env()
        if client is None:
            raise CliError("no extractor configured (REDASH_EXTRACTOR_URL)",
                           EXIT_EXTERNAL)
        try:
            design, ext_report = extract_from_image(_read_bytes(image), client)
        except ExtractionError as exc:
            raise CliError(str(exc), EXIT_EXTERNAL) from None
        for warning in ext_report.warnings:
            click.echo(f"warning: {warning}", err=True)
    else:
        try:
            design = ingest_document(_read_bytes(file))
        except (ParseError, DocumentRejected) as exc:
            raise CliError(str(exc), EXIT_VALIDATION) from None
    reference_id = _store(store_dir).add_reference(
        design, tags=[t for t in tags.split(",") if t])
    click.echo(reference_id)


@main.command()
@click.option("--bookmarked", is_flag=True, help="bookmarked references only")
@click.option("--tag", default=None)
@click.option("--store", "store_dir", type=click.Path())
def refs(bookmarked, tag, store_dir):
    """List references in the store."""
    entries = _store(store_dir).list_references(bookmarked_only=bookmarked, tag=tag)
    for entry in entries:
        star = "*" if entry.design.bookmarked else " "
        tags = f" [{','.join(entry.tags)}]" if entry.tags else ""
        click.echo(f"{star} {entry.reference_id[:12]}  "
                   f"{entry.design.doc.title!r} by {entry.design.doc.author}"
                   f" ({len(entry.design.doc.components)} components){tags}")
    if not entries:
        click.echo("(no references)")


@main.command()
@click.argument("ref_id")
@click.option("--store", "store_dir", type=click.Path())
def bundles(ref_id, store_dir):
    """Show the six design bundles and their features for a reference."""
    try:
        _store(store_dir).get(ref_id)
    except UnknownReference as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    for bundle in Bundle:
        geometry = " +geometry" if bundle_includes_geometry(bundle) else ""
        click.echo(f"{bundle.value}{geometry}")
        click.echo("  " + ", ".join(bundle_feature_list(bundle)))


@main.command(name="apply")
@click.option("--ref", "ref_id", required=True)
@click.option("--target", "target_file", required=True, type=click.Path())
@click.option("--bundle", "bundle_name", required=True,
              type=click.Choice([b.value for b in Bundle], case_sensitive=False))
@click.option("--sources", default=None, help="comma-separated source ids")
@click.option("--targets", default=None, help="comma-separated target ids")
@click.option("--fill", is_flag=True, help="create placeholders for unmatched sources")
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--report", "report_file", default=None, type=click.Path())
@click.option("--preview", "preview_file", default=None, type=click.Path(),
              help="also render a wireframe preview of the result")
@click.option("--store", "store_dir", type=click.Path())
def apply_cmd(ref_id, target_file, bundle_name, sources, targets, fill,
              out_file, report_file, preview_file, store_dir):
    """Apply a design bundle from a stored reference onto a document file."""
    store = _store(store_dir)
    try:
        entry = store.get(ref_id)
    except UnknownReference as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    canvas = _load_doc(target_file)
    request = ReuseRequest(
        reference_id=ref_id,
        bundle=Bundle(bundle_name.capitalize() if bundle_name.islower()
                      else bundle_name),
        source_sel=_selection(sources),
        target_sel=_selection(targets),
        fill_placeholders=fill,
    )
    try:
        doc, report = apply_bundle(canvas, entry.design, request,
                                   merger=merger_from_env(), now=_FIXED_NOW)
    except (SelectionError, TransferError) as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    _write_bytes(out_file, canonical_serialize(doc))
    if report_file:
        _write_bytes(report_file, canonical_json_bytes(report.to_jsonable()))
    if preview_file:
        from .report import render_doc_preview
        render_doc_preview(doc, preview_file)
    click.echo(f"wrote {out_file} (revision {doc.revision})")


@main.command()
@click.option("--target", "target_file", required=True, type=click.Path())
@click.option("--key", required=True)
@click.option("--value", default=None, help="JSON-ish value; omit with --remove")
@click.option("--remove", "remove_flag", is_flag=True)
@click.option("--scope", default=None,
              type=click.Choice([f.value for f in Family]), help="family filter")
@click.option("--out", "out_file", required=True, type=click.Path())
def propagate(target_file, key, value, remove_flag, scope, out_file):
    """Set or remove one attribute across every in-scope component."""
    if (value is None) == (not remove_flag):
        raise CliError("pass exactly one of --value or --remove", EXIT_VALIDATION)
    doc = _load_doc(target_file)
    try:
        parsed = REMOVE if remove_flag else _parse_cli_value(key, value)
        out = propagate_attribute(doc, key, parsed,
                                  scope=Family(scope) if scope else ALL,
                                  now=_FIXED_NOW)
    except TransferError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    _write_bytes(out_file, canonical_serialize(out))
    click.echo(f"wrote {out_file} (revision {out.revision})")


def _parse_cli_value(key: str, raw: str):
    import json
    for candidate in (raw, raw.lower()):
        try:
            value = json.loads(candidate)
        except ValueError:
            continue
        try:
            return coerce_value(key, value)
        except ValueError:
            break
    return coerce_value(key, raw)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--store", "store_dir", type=click.Path())
@click.option("--csv", "csv_file", default=None, type=click.Path(),
              help="write the summary as CSV")
@click.option("--fig", "fig_file", default=None, type=click.Path(),
              help="render the summary as a figure")
def attribution(file, store_dir, csv_file, fig_file):
    """Who inspired what: per-category reference credits for a document."""
    doc = _load_doc(file)
    rows = attribution_summary(doc, _store(store_dir).lookup_attribution)
    for row in rows:
        click.echo(f"{row.category:7s} {row.attribute_count:4d}  "
                   f"{row.reference_title} (by {row.author})")
    if not rows:
        click.echo("(no borrowed attributes)")
    if csv_file:
        from .report import attribution_to_csv
        attribution_to_csv(rows, csv_file)
    if fig_file:
        from .report import render_attribution_figure
        render_attribution_figure(rows, fig_file)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--out", "out_file", required=True, type=click.Path())
def preview(file, out_file):
    """Render a wireframe preview of a dashboard document."""
    doc = _load_doc(file)
    from .report import render_doc_preview
    render_doc_preview(doc, out_file)
    click.echo(f"wrote {out_file}")


@main.command()
@click.option("--port", default=7878, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--store", "store_dir", type=click.Path())
def serve(port, host, store_dir):
    """Serve the HTTP API backing the authoring UI."""
    from .service import run
    run(host=host, port=port, store=store_dir)


if __name__ == "__main__":
    sys.exit(main())
