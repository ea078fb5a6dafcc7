"""Offline renderer for the analysis CLI's figure bundles."""

from .render import BundleError, RenderRefused, render
from .style import DEFAULT_STYLE, load_style

__version__ = "0.1.0"
