"""Laguerre's method applied to ``z**n - 1``: the iteration, the curves
that organise its dynamics, orbit classification, cycle search and basin
rendering."""

from .basins import (
    RenderConfig,
    BasinImage,
    boundary_polyline,
    colorize,
    render,
    write_outcome_csv,
    write_ppm,
)
from .characteristic import (
    AnnulusBounds,
    BracketFailure,
    RadialProfile,
    RegionLabel,
    annulus_bounds,
    char_fn,
    classify,
    outer_radius_bound,
    radial_zeros,
)
from .core import (
    INFINITY,
    DegenerateDenominator,
    discriminant_relative_error_estimate,
    laguerre_general,
    laguerre_simplified,
    modulus_squared_formula,
    principal_sqrt,
    unity_coeffs,
)
from .cycles import (
    CycleCandidate,
    CycleRecord,
    EscapedSector,
    NoConvergence,
    NotPrimitive,
    find_cycles,
    refine_cycle,
    scan_sector,
)
from .dynamics import (
    OrbitOutcome,
    OrbitTrace,
    Root,
    TwoCycle,
    Undecided,
    convergence_order_estimate,
    iterate_orbit,
    offset_step,
    unit_circle_step_angle,
)

__version__ = "0.1.0"
