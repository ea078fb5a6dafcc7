"""Render the four figure analogues from archived CSV bundles.

This package performs no numerical computation: every plotted number comes
from the CSVs and the manifest written by the analysis CLI.  Rendering
refuses to run when the manifest reports failed qualitative checks.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .style import load_style  # noqa: E402

PANELS = ("fig1", "fig2L", "fig2R", "fig3L", "fig3R", "fig4L", "fig4R")
COMBINED = {"fig2": ("fig2L", "fig2R"), "fig3": ("fig3L", "fig3R"),
            "fig4": ("fig4L", "fig4R")}


class RenderRefused(RuntimeError):
    """The manifest reported failed checks; the bundle is not render-ready."""


class BundleError(RuntimeError):
    """Missing or malformed bundle contents."""


def _load_manifest(bundle: Path, figure_id: str) -> dict:
    path = bundle / f"{figure_id}_manifest.json"
    if not path.exists():
        raise BundleError(f"manifest not found: {path}")
    manifest = json.loads(path.read_text())
    checks = manifest.get("checks", {})
    if not checks.get("passed", False):
        raise RenderRefused(
            f"{figure_id}: manifest checks reported failure: {checks}")
    return manifest


def _load_csv(bundle: Path, name: str) -> tuple[list[str], np.ndarray]:
    path = bundle / name
    if not path.exists():
        raise BundleError(f"CSV not found: {path}")
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # empty body handled below
                data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise BundleError(f"malformed CSV {path}: {exc}") from exc
    if data.size == 0:
        raise BundleError(f"empty CSV: {path}")
    if data.shape[1] != len(header):
        raise BundleError(f"{path}: column count does not match header")
    return header, data


def _plot_series(ax, header, data, style, zero_line=False, logx=False):
    x = data[:, 0]
    palette = style["palette"]
    for i, name in enumerate(header[1:], start=1):
        ax.plot(x, data[:, i], label=name,
                color=palette[(i - 1) % len(palette)],
                linewidth=style["linewidth"])
    if zero_line:
        ax.axhline(0.0, color=style["zero_line_color"], linewidth=0.8)
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(header[0])
    if style["grid"]:
        ax.grid(alpha=0.25)
    ax.legend(fontsize=style["legend_fontsize"])


def _panel_fig1(ax, bundle, manifest, style):
    header, data = _load_csv(bundle, "fig1_partial_sums.csv")
    _plot_series(ax, header, data, style, zero_line=True)
    ax.set_ylabel("partial-sum difference")
    ax.set_title("two-mode spectra: partial sums")


def _panel_fig2l(ax, bundle, manifest, style):
    header, data = _load_csv(bundle, "fig2L_functional.csv")
    _plot_series(ax, header, data, style)
    ax.set_ylabel("shifted-plus functional")
    ax.set_title("number states")
    inset_header, inset = _load_csv(bundle, "fig2L_inset.csv")
    iax = ax.inset_axes(style["inset_rect"])
    iax.plot(inset[:, 0], inset[:, 1], ".", markersize=3,
             color=style["palette"][0])
    fit = manifest["parameters"]["fit"]
    xs = inset[:, 0]
    iax.plot(xs, fit["slope"] * xs + fit["intercept"],
             style["fit_linestyle"], color=style["fit_color"],
             linewidth=1.0)
    iax.set_xlabel(inset_header[0], fontsize=7)
    iax.set_ylabel(inset_header[1], fontsize=7)
    iax.tick_params(labelsize=6)
    return iax


def _panel_fig2r(ax, bundle, manifest, style):
    header, data = _load_csv(bundle, "fig2R_functional.csv")
    _plot_series(ax, header, data, style)
    ax.set_ylabel("shifted-plus functional")
    ax.set_title("vacuum/first-excited mixtures")


def _panel_fig3(which):
    def panel(ax, bundle, manifest, style):
        header, data = _load_csv(bundle, f"{which}_margins.csv")
        _plot_series(ax, header, data, style, zero_line=True)
        ax.set_ylabel("regularized margin")
        ax.set_title(manifest["parameters"]["pair"])
    return panel


def _panel_fig4(which):
    def panel(ax, bundle, manifest, style):
        header, data = _load_csv(bundle, f"{which}_curves.csv")
        _plot_series(ax, header, data, style, zero_line=(which == "fig4L"))
        ax.set_ylabel("entropy difference" if which == "fig4L"
                      else "corrected slack")
        ax.set_title("raw" if which == "fig4L" else "channel-corrected")
    return panel


PANEL_RENDERERS = {
    "fig1": _panel_fig1,
    "fig2L": _panel_fig2l,
    "fig2R": _panel_fig2r,
    "fig3L": _panel_fig3("fig3L"),
    "fig3R": _panel_fig3("fig3R"),
    "fig4L": _panel_fig4("fig4L"),
    "fig4R": _panel_fig4("fig4R"),
}


def _structure(fig) -> dict:
    axes_info = []

    def describe(ax):
        axes_info.append({
            "lines": len(ax.lines),
            "xlim": [float(v) for v in ax.get_xlim()],
            "ylim": [float(v) for v in ax.get_ylim()],
        })

    for ax in fig.axes:
        describe(ax)
        for child in getattr(ax, "child_axes", []):
            describe(child)
    return {"axes": axes_info, "n_axes": len(axes_info)}


def render(figure_id: str, bundle, out=None, style_path=None) -> dict:
    """Render one panel (or a dual-panel figure) from an archived bundle.

    Returns a structural summary (axes, line counts, ranges) used by the
    golden-structure tests.  Writes the image only when ``out`` is given.
    """
    bundle = Path(bundle)
    style = load_style(style_path)
    if figure_id in COMBINED:
        left, right = COMBINED[figure_id]
        manifests = [_load_manifest(bundle, p) for p in (left, right)]
        fig, axes = plt.subplots(1, 2, figsize=style["dual_figsize"],
                                 dpi=style["dpi"])
        PANEL_RENDERERS[left](axes[0], bundle, manifests[0], style)
        PANEL_RENDERERS[right](axes[1], bundle, manifests[1], style)
    elif figure_id in PANEL_RENDERERS:
        manifest = _load_manifest(bundle, figure_id)
        fig, ax = plt.subplots(figsize=style["figsize"], dpi=style["dpi"])
        PANEL_RENDERERS[figure_id](ax, bundle, manifest, style)
    else:
        raise BundleError(f"unknown figure id {figure_id!r}")
    fig.tight_layout()
    summary = _structure(fig)
    summary["figure_id"] = figure_id
    if out is not None:
        fig.savefig(out)
        summary["output"] = str(out)
    plt.close(fig)
    return summary
