"""Shared fixture builders and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from dataclasses import replace
from datetime import datetime, timezone

from dashreuse.ingest import Origin, ReferenceDesign
from dashreuse.model import (
    BoundingBox,
    Component,
    ComponentKind,
    DashboardDoc,
    ProvenanceRecord,
)
from dashreuse.serialize import canonical_serialize
from dashreuse.vocabulary import (
    ATTRIBUTES,
    ChartSubtype,
    Family,
    ValueType,
    applicable_keys,
)

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)

COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]
FONTS = ["Inter", "Georgia", "Menlo", "Arial"]
FAMILIES = [Family.CHART, Family.BIG_NUMBER, Family.TEXT, Family.IMAGE,
            Family.FILTER_WIDGET, Family.CONTAINER]
SUBTYPES = list(ChartSubtype)


def rand_kind(rng: random.Random, families=None, subtypes=None) -> ComponentKind:
    family = rng.choice(list(families) if families else FAMILIES)
    if family is Family.CHART:
        return ComponentKind(family, rng.choice(list(subtypes) if subtypes else SUBTYPES))
    return ComponentKind(family)


def rand_value(rng: random.Random, key: str):
    vt = ATTRIBUTES[key].value_type
    if vt is ValueType.COLOR:
        return rng.choice(COLORS)
    if vt is ValueType.LENGTH:
        return round(rng.uniform(0, 24), 6)
    if vt is ValueType.SCALAR:
        return round(rng.uniform(-10, 10), 6)
    if vt is ValueType.FONT_WEIGHT:
        return rng.choice(range(100, 1000, 100))
    if vt is ValueType.TOKEN:
        return rng.choice(ATTRIBUTES[key].tokens)
    if vt is ValueType.FONT_FAMILY:
        return rng.choice(FONTS)
    return rng.choice([True, False])


def rand_style(rng: random.Random, kind: ComponentKind, density=0.5) -> dict:
    keys = sorted(applicable_keys(kind.family))
    return {k: rand_value(rng, k) for k in keys if rng.random() < density}


def grid_components(rng: random.Random, n: int, *, rows=3, cols=3,
                    side=(0.12, 0.3), side_h=None, families=None, subtypes=None,
                    prefix="c", style_density=0.5, data_bound=False,
                    y_limit=1.0) -> list[Component]:
    """Pairwise-disjoint components placed in random grid cells; the grid
    is squeezed into the top y_limit fraction of the canvas."""
    cells = [(r, c) for r in range(rows) for c in range(cols)]
    assert n <= len(cells), "grid too small"
    chosen = rng.sample(cells, n)
    cell_w, cell_h = 1 / cols, y_limit / rows
    margin = 0.01
    out = []
    for i, (r, c) in enumerate(sorted(chosen)):
        kind = rand_kind(rng, families, subtypes)
        w = min(rng.uniform(*side), cell_w - 2 * margin)
        h = min(rng.uniform(*(side_h or side)), cell_h - 2 * margin)
        bbox = BoundingBox(c * cell_w + margin, r * cell_h + margin, w, h)
        out.append(Component(
            id=f"{prefix}{i + 1}", kind=kind, bbox=bbox,
            style=rand_style(rng, kind, style_density),
            data_binding=f"ds-{i + 1}" if data_bound else None,
        ))
    return out


def rand_doc(rng: random.Random, n: int, *, doc_id="canvas", title="Canvas",
             author="tester", **kw) -> DashboardDoc:
    return DashboardDoc.assemble(
        id=doc_id, title=title, author=author,
        components=grid_components(rng, n, **kw))


def rand_reference(rng: random.Random, n: int, *, doc_id="ref", title="Reference",
                   author="designer", **kw) -> ReferenceDesign:
    kw.setdefault("prefix", "s")
    kw.setdefault("style_density", 0.8)
    return ReferenceDesign(
        doc=rand_doc(rng, n, doc_id=doc_id, title=title, author=author, **kw),
        origin=Origin(kind="structuredFile"), ingested_at=EPOCH)


def strip_meta(doc: DashboardDoc) -> bytes:
    """Canonical bytes with revision and provenance timestamps zeroed, for
    'equal up to revision/provenance metadata' comparisons."""
    comps = [
        replace(c, provenance=tuple(
            ProvenanceRecord(r.attribute_key, r.reference_id,
                             r.source_component_id, r.bundle, EPOCH)
            for r in c.provenance))
        for c in doc.components
    ]
    return canonical_serialize(replace(doc, components=tuple(comps), revision=0))


# --- matching oracles -------------------------------------------------------

def oracle_int_scores(sources, targets):
    from dashreuse.matching import pair_score
    return [[int(round(pair_score(s, t) * 10 ** 9)) for s in sources]
            for t in targets]


def oracle_max_total(scores: list[list[int]]) -> int:
    """Exhaustive maximum-total assignment via bitmask DP over sources."""
    n_t = len(scores)
    n_s = len(scores[0]) if n_t else 0
    memo: dict[tuple[int, int], int] = {}

    def best(t: int, used: int) -> int:
        if t == n_t:
            return 0
        state = (t, used)
        if state not in memo:
            value = best(t + 1, used)  # leave target t unmatched
            for s in range(n_s):
                if scores[t][s] > 0 and not used & (1 << s):
                    value = max(value, scores[t][s] + best(t + 1, used | 1 << s))
            memo[state] = value
        return memo[state]

    return best(0, 0)


def oracle_all_optimal(scores: list[list[int]]) -> list[tuple[tuple[int, int], ...]]:
    """Every maximum-total matching, as sorted (target, source) pair tuples."""
    n_t = len(scores)
    n_s = len(scores[0]) if n_t else 0
    opt = oracle_max_total(scores)
    results = []

    def walk(t: int, used: int, total: int, acc: list[tuple[int, int]]):
        if t == n_t:
            if total == opt:
                results.append(tuple(acc))
            return
        walk(t + 1, used, total, acc)
        for s in range(n_s):
            if scores[t][s] > 0 and not used & (1 << s):
                acc.append((t, s))
                walk(t + 1, used | 1 << s, total + scores[t][s], acc)
                acc.pop()

    walk(0, 0, 0, [])
    return results


def oracle_lex_min_matching(scores: list[list[int]]) -> tuple[tuple[int, int], ...]:
    return min(oracle_all_optimal(scores))


def pairs_to_indices(pairs, sources, targets):
    s_index = {c.id: i for i, c in enumerate(sources)}
    t_index = {c.id: i for i, c in enumerate(targets)}
    return tuple(sorted((t_index[p.target_id], s_index[p.source_id]) for p in pairs))
