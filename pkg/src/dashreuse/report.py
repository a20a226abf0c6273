"""Figure and delimited-file rendering for the CLI report path.

Previews are schematic wireframes of a dashboard document (component
boxes with their fills, borders, and badges), not data charts; attribution
summaries render both as CSV and as a horizontal bar figure.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle

from .model import Component, DashboardDoc
from .transfer import AttributionRow
from .vocabulary import Family

_FALLBACK_FILL = "#eceff4"
_CATEGORY_COLORS = {"Color": "#4c78a8", "Lines": "#f58518",
                    "Text": "#54a24b", "Layout": "#b279a2"}


def _face_color(c: Component) -> str:
    style = c.style
    return str(style.get("color.background")
               or style.get("color.mark.fill")
               or _FALLBACK_FILL)


def _edge(c: Component) -> tuple[str, float]:
    color = str(c.style.get("line.border.color", "#5a5a5a"))
    width = c.style.get("line.border.width", 1.0)
    try:
        lw = max(0.4, min(float(width), 6.0) * 0.75)
    except (TypeError, ValueError):
        lw = 0.8
    return color, lw


def render_doc_preview(doc: DashboardDoc, path: str | Path,
                       title: str | None = None, dpi: int = 150) -> Path:
    """Draw the document as a wireframe and save it (format by extension)."""
    width = 8.0
    height = width / doc.canvas_aspect if doc.canvas_aspect > 0 else width
    fig, ax = plt.subplots(figsize=(width, height))
    ax.set_xlim(0, 1)
    ax.set_ylim(1, 0)  # reading order: origin at the top left
    ax.set_xticks(())
    ax.set_yticks(())
    ax.set_title(title or doc.title or doc.id, fontsize=11, loc="left")

    for c in doc.components:
        face = _face_color(c)
        edge, lw = _edge(c)
        ax.add_patch(Rectangle(
            (c.bbox.x, c.bbox.y), c.bbox.w, c.bbox.h,
            facecolor=face, edgecolor=edge, linewidth=lw,
            hatch="//" if c.placeholder else None, alpha=0.9))
        label = str(c.kind)
        if c.placeholder:
            label += " (placeholder)"
        ax.annotate(f"{c.id}\n{label}",
                    (c.bbox.x + c.bbox.w / 2, c.bbox.y + c.bbox.h / 2),
                    ha="center", va="center", fontsize=7, color="#222222")
        if c.kind.family is Family.CHART and "color.mark.fill" in c.style:
            strip_h = min(0.02, c.bbox.h / 4)
            ax.add_patch(Rectangle(
                (c.bbox.x, c.bbox.y + c.bbox.h - strip_h), c.bbox.w, strip_h,
                facecolor=str(c.style["color.mark.fill"]), edgecolor="none"))

    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return out


def attribution_to_csv(rows: Sequence[AttributionRow], path: str | Path) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["category", "referenceTitle", "author", "attributeCount"])
        for row in rows:
            writer.writerow([row.category, row.reference_title,
                             row.author, row.attribute_count])
    return out


def render_attribution_figure(rows: Sequence[AttributionRow],
                              path: str | Path, dpi: int = 150) -> Path:
    """Horizontal bars of borrowed-attribute counts per reference/category."""
    fig, ax = plt.subplots(figsize=(7, max(1.6, 0.5 * len(rows) + 1)))
    if rows:
        labels = [f"{r.reference_title} ({r.author}) - {r.category}" for r in rows]
        counts = [r.attribute_count for r in rows]
        colors = [_CATEGORY_COLORS.get(r.category, "#888888") for r in rows]
        positions = range(len(rows))[::-1]
        ax.barh(list(positions), counts, color=colors)
        ax.set_yticks(list(positions))
        ax.set_yticklabels(labels, fontsize=8)
        ax.set_xlabel("attributes borrowed")
    else:
        ax.text(0.5, 0.5, "no borrowed attributes", ha="center", va="center")
        ax.set_xticks(())
        ax.set_yticks(())
    ax.set_title("Design attribution", fontsize=11, loc="left")
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return out
