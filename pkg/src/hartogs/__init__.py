"""Numerical companions of holomorphic maps across compact holes, with checkers.

The companion of f on Ω minus K is the contour-integral extension
``(1/2πi)∮ f(x + ζu)/ζ dζ`` over the boundary of an admissible union of discs.
The subpackage modules split the work as follows:

- ``geometry``: points, slices, domain and compact-set specs, admissible sets
- ``quadrature``: adaptive trapezoid contour integration
- ``companion``: the companion in one and several variables, outer and sliced forms
- ``oracles``: function catalog, symbolic regular parts, hull distances, seminorms
- ``topology``: grid connectivity, coincidence sets, sampled distinguished boundary
- ``verify``: property checks returning ``CheckReport``
- ``scenario`` / ``cli``: JSON scenario runner
"""

from .companion import (
    CompanionResult,
    HoloFn,
    companion_1d,
    companion_finitely_open,
    companion_fn,
    companion_nd,
    companion_outer,
    companion_value,
    compose,
    restrict,
)
from .errors import HartogsError
from .geometry import CPoint, LineSlice, PlaneSlice, compact_from_dict, domain_from_dict
from .oracles import catalog_fn, catalog_listing, regular_part
from .scenario import dump_grid, run_scenario, verify_all
from .verify import CheckReport

__version__ = "0.1.0"

__all__ = [
    "CPoint",
    "CheckReport",
    "CompanionResult",
    "HartogsError",
    "HoloFn",
    "LineSlice",
    "PlaneSlice",
    "catalog_fn",
    "catalog_listing",
    "compact_from_dict",
    "companion_1d",
    "companion_finitely_open",
    "companion_fn",
    "companion_nd",
    "companion_outer",
    "companion_value",
    "compose",
    "domain_from_dict",
    "dump_grid",
    "regular_part",
    "restrict",
    "run_scenario",
    "verify_all",
]
