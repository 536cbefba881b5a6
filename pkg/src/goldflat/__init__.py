"""Exact translation surfaces over real quadratic fields.

Field arithmetic, polygon surfaces, cylinder decompositions, cylinder
surgery and a catalog of named surfaces with a checklist of their claims.
"""

from .qfield import PHI, FieldElement, format_literal, parse_literal, qf
from .surface import Surface, build_surface, genus, stratum

__all__ = [
    "PHI",
    "FieldElement",
    "Surface",
    "build_surface",
    "format_literal",
    "genus",
    "parse_literal",
    "qf",
    "stratum",
]
