"""Source-to-target component correspondence for design transfer.

Pairs are scored on kind and size, then an optimal assignment is chosen.
Among equal-total assignments the result is the lexicographically smallest
pair list by (target reading-order index, source reading-order index), so
matching is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import Component, DashboardDoc

TYPE_WEIGHT = 0.7
SIZE_WEIGHT = 0.3
CROSS_SUBTYPE_TYPE_SCORE = 0.6

# Scores are quantized so that equal-total comparisons between different
# pair sets are exact (integer arithmetic downstream).
_SCORE_DECIMALS = 9
_SCORE_UNIT = 10 ** _SCORE_DECIMALS

ALL = "ALL"
Selection = str | Sequence[str] | frozenset[str] | set[str]


class SelectionError(KeyError):
    def __init__(self, component_id: str):
        self.component_id = component_id
        super().__init__(f"unknown component id {component_id}")


@dataclass(frozen=True)
class MatchPair:
    source_id: str
    target_id: str
    score: float


def _type_score(a: Component, b: Component) -> float:
    if a.kind.family is not b.kind.family:
        return 0.0
    if a.kind.chart_subtype == b.kind.chart_subtype:
        return 1.0
    return CROSS_SUBTYPE_TYPE_SCORE


def pair_score(source: Component, target: Component) -> float:
    """Compatibility in [0, 1]: 0 across families, otherwise a type-dominant
    blend of kind similarity and area ratio."""
    ts = _type_score(source, target)
    if ts == 0.0:
        return 0.0
    areas = sorted((source.bbox.area, target.bbox.area))
    size = areas[0] / areas[1] if areas[1] > 0 else 0.0
    return round(TYPE_WEIGHT * ts + SIZE_WEIGHT * size, _SCORE_DECIMALS)


def resolve_selection(doc: DashboardDoc, sel: Selection) -> list[Component]:
    """ALL resolves to every non-placeholder component in reading order;
    explicit ids resolve to those components in reading order."""
    if isinstance(sel, str):
        if sel != ALL:
            raise SelectionError(sel)
        return [c for c in doc.components if not c.placeholder]
    wanted = set(sel)
    known = {c.id for c in doc.components}
    for cid in sorted(wanted):
        if cid not in known:
            raise SelectionError(cid)
    return [c for c in doc.components if c.id in wanted]


def match_components(sources: Sequence[Component],
                     targets: Sequence[Component]) -> list[MatchPair]:
    """Maximum-total-score matching over all positive-score pairs.

    Ties between equal-total matchings break toward the lexicographically
    smallest (target index, source index) pair list. Components must be
    passed in reading order (resolve_selection output).
    """
    n_t, n_s = len(targets), len(sources)
    if n_t == 0 or n_s == 0:
        return []
    scores = np.zeros((n_t, n_s), dtype=np.int64)
    for t, target in enumerate(targets):
        for s, source in enumerate(sources):
            scores[t, s] = int(round(pair_score(source, target) * _SCORE_UNIT))

    optimum = _max_total(scores, list(range(n_t)), list(range(n_s)))
    pairs: list[MatchPair] = []
    free_sources = list(range(n_s))
    fixed_total = 0
    next_t = 0
    while next_t < n_t and fixed_total < optimum:
        chosen = None
        for t in range(next_t, n_t):
            for s in free_sources:
                if scores[t, s] <= 0:
                    continue
                rest = _max_total(scores, list(range(t + 1, n_t)),
                                  [x for x in free_sources if x != s])
                if fixed_total + scores[t, s] + rest == optimum:
                    chosen = (t, s)
                    break
            if chosen:
                break
        if chosen is None:
            break
        t, s = chosen
        pairs.append(MatchPair(source_id=sources[s].id, target_id=targets[t].id,
                               score=pair_score(sources[s], targets[t])))
        fixed_total += int(scores[t, s])
        free_sources.remove(s)
        next_t = t + 1
    return pairs


def _max_total(scores: np.ndarray, target_rows: list[int],
               source_cols: list[int]) -> int:
    if not target_rows or not source_cols:
        return 0
    sub = scores[np.ix_(target_rows, source_cols)]
    rows, cols = linear_sum_assignment(sub, maximize=True)
    return int(sub[rows, cols].sum())


def unmatched(components: Iterable[Component], pairs: Sequence[MatchPair],
              side: str) -> list[Component]:
    """Components on one side ("source" or "target") left out of the pairing."""
    taken = {p.source_id if side == "source" else p.target_id for p in pairs}
    return [c for c in components if c.id not in taken]
