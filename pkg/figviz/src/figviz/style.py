"""Style profiles: everything visual is configuration, not code."""

from __future__ import annotations

import json
from pathlib import Path

DEFAULT_STYLE = {
    "figsize": [6.4, 4.6],
    "dual_figsize": [12.0, 4.6],
    "dpi": 140,
    "linewidth": 1.6,
    "palette": ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                "#8c564b", "#e377c2", "#7f7f7f"],
    "fit_linestyle": "--",
    "fit_color": "#444444",
    "zero_line_color": "#999999",
    "grid": True,
    "legend_fontsize": 8,
    "inset_rect": [0.58, 0.55, 0.38, 0.38],
}


def load_style(path: str | Path | None = None) -> dict:
    """Default style, optionally overlaid with a JSON profile."""
    style = dict(DEFAULT_STYLE)
    if path is not None:
        style.update(json.loads(Path(path).read_text()))
    return style
