"""Structural inspection of the emitted SVGs.

Matplotlib nests one g[id=axes_N] per panel inside g[id=figure_1]; the
data series of a panel are the g[id=line2d_*] groups that are direct
children of its axes group (tick marks live deeper, legend sample lines
live under g[id=legend_*]). Legend labels are plain <text> nodes because
rendering uses svg.fonttype=none.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass

SVG_NS = "{http://www.w3.org/2000/svg}"


@dataclass(frozen=True)
class SvgStructure:
    panels: int
    series_per_panel: tuple
    legend_labels: tuple  # one tuple of labels per panel, in draw order
    texts: tuple

    def labels_everywhere(self, expected) -> bool:
        expected = set(expected)
        return all(expected <= set(labels) for labels in self.legend_labels)


def _gid(element) -> str:
    return element.get("id", "")


def _texts_under(element) -> list[str]:
    return [
        (t.text or "").strip()
        for t in element.iter(f"{SVG_NS}text")
        if (t.text or "").strip()
    ]


def inspect_svg(path) -> SvgStructure:
    root = ET.parse(path).getroot()
    axes = [
        g
        for g in root.iter(f"{SVG_NS}g")
        if _gid(g).startswith("axes_")
    ]
    series_counts = []
    legend_labels = []
    for ax in axes:
        direct = [c for c in ax if c.tag == f"{SVG_NS}g"]
        series_counts.append(sum(1 for c in direct if _gid(c).startswith("line2d_")))
        labels = []
        for c in direct:
            if _gid(c).startswith("legend_"):
                labels.extend(_texts_under(c))
        legend_labels.append(tuple(labels))
    return SvgStructure(
        panels=len(axes),
        series_per_panel=tuple(series_counts),
        legend_labels=tuple(legend_labels),
        texts=tuple(_texts_under(root)),
    )
