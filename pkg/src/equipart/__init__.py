"""Numerical equipartitions of mass distributions.

Measures are smoothed weighted point clouds. Partitions are families of
orthogonal hyperplanes or complex regular q-fans, found by searching for
zeros and orbit coincidences of equivariant maps on spheres.
"""

from .drivers import (
    SolveReport,
    bisect_orthogonal,
    equipartition_fans,
    equipartition_fourfans,
    load_report,
    near_equipartition_2q,
    verify_report,
)
from .errors import (
    BudgetExceeded,
    DegenerateRegion,
    DimensionError,
    DimensionTooSmall,
    EquipartError,
    FrameTooLong,
    KTooLarge,
    MeasureFormatError,
    NoConvergence,
    NotEquivariantError,
    NotIndependentError,
    NotOddError,
    ZeroMassError,
)
from .frames import AnticommutingFamily, FrameSection, frame_at, quaternion_frame, rh_matrices, rh_rho
from .measures import (
    ComplexRegularQFan,
    Hyperplane,
    MassDistribution,
    equipartition_defect,
    level_offset,
    load_measure,
    save_measure,
    sector_measures,
)
from .oracle import ScanGrid, planar_fan_scan, planar_line_scan, upper_bound_instance
from .search import SearchConfig, SearchResult, i_odd_zero_search, odd_zero_search, orbit_coincidence_search

__version__ = "0.1.0"
