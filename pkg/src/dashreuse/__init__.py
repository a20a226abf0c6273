"""Partial dashboard reuse: ingest references into shared style specs, then
transfer scoped design bundles onto an authoring canvas with deterministic
matching, placeholder synthesis, attribute locks, and attribution."""

from .catalog import CatalogEntry, ReferenceStore, UnknownReference
from .ingest import (
    DocumentRejected,
    ExtractionError,
    ExtractorClient,
    ReferenceDesign,
    extract_from_image,
    ingest_document,
    normalize_style,
)
from .matching import (
    ALL,
    MatchPair,
    SelectionError,
    match_components,
    pair_score,
    resolve_selection,
)
from .model import (
    BoundingBox,
    Component,
    ComponentKind,
    DashboardDoc,
    ProvenanceRecord,
    ValidationReport,
    validate_doc,
)
from .serialize import ParseError, canonical_serialize, doc_digest, parse_doc
from .transfer import (
    REMOVE,
    AttributionRow,
    PairMerger,
    ReuseRequest,
    TransferError,
    TransferReport,
    apply_bundle,
    attribution_summary,
    deterministic_pair_merge,
    propagate_attribute,
    representative_spec,
    set_locks,
    transfer_layout,
)
from .vocabulary import (
    Bundle,
    ChartSubtype,
    Family,
    bundle_feature_list,
    bundle_includes_geometry,
    bundle_keys,
)

__version__ = "0.1.0"

__all__ = [
    "ALL",
    "AttributionRow",
    "BoundingBox",
    "Bundle",
    "CatalogEntry",
    "ChartSubtype",
    "Component",
    "ComponentKind",
    "DashboardDoc",
    "DocumentRejected",
    "ExtractionError",
    "ExtractorClient",
    "Family",
    "MatchPair",
    "PairMerger",
    "ParseError",
    "ProvenanceRecord",
    "REMOVE",
    "ReferenceDesign",
    "ReferenceStore",
    "ReuseRequest",
    "SelectionError",
    "TransferError",
    "TransferReport",
    "UnknownReference",
    "ValidationReport",
    "apply_bundle",
    "attribution_summary",
    "bundle_feature_list",
    "bundle_includes_geometry",
    "bundle_keys",
    "canonical_serialize",
    "deterministic_pair_merge",
    "doc_digest",
    "extract_from_image",
    "ingest_document",
    "match_components",
    "normalize_style",
    "pair_score",
    "parse_doc",
    "propagate_attribute",
    "representative_spec",
    "resolve_selection",
    "set_locks",
    "transfer_layout",
    "validate_doc",
]
