"""Parametric kernel and CLI for axonometric piping-scheme drawings.

The document model (:mod:`axoscheme.model`) holds points, pipes, joints,
offsets with break lines, a conditional-symbol library with placed blocks,
texts with leaders, position marks with specifying properties, chain
dimensions, elevation and slope marks, and building axes.  Companion modules
validate compatibility rules, edit with cascade semantics, project and lay
out deterministic 2D drawings, render SVG, generate specifications and
round-trip a compact on-disk parameter set.
"""

from . import (
    constraints,
    edit,
    geometry,
    layout,
    model,
    persist,
    render_svg,
    samples,
    specgen,
)
from .model import Scheme, integrity_check, connected_component, new_scheme

__version__ = "0.1.0"

__all__ = [
    "Scheme", "new_scheme", "integrity_check", "connected_component",
    "model", "constraints", "edit", "geometry", "layout", "render_svg",
    "persist", "specgen", "samples", "__version__",
]
