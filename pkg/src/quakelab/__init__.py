"""Earthquakes along finite measured laminations of the hyperbolic disk."""

from .barycentric import (
    BeltramiSample,
    ConvergenceError,
    ExtensionResult,
    asymptotic_conformality_profile,
    barycentric_extension,
    beltrami_estimate,
)
from .boundary import QsReport, SymmetryProfile, boundary_sup_distance, qs_constant_estimate, symmetric_modulus
from .circle import (
    CircleMap,
    FunctionMap,
    IdentityMap,
    InvalidMapError,
    MobiusMap,
    PiecewiseMobiusMap,
    TabulatedMap,
)
from .convergence import (
    ConvergenceTable,
    LimitDefect,
    MeasureSequence,
    NoLimitError,
    TestWindow,
    cocycle_limit_defect,
    convergence_experiment,
    rescale_by_disk,
    rescale_by_quadruple,
    weak_star_discrepancy,
)
from .earthquake import Earthquake, boundary_map, cocycle, earthquake_map, normalize_three_points, separating_atoms
from .generators import gen_chain, gen_dyadic_family, gen_fan, gen_random_bounded
from .hyperbolic import (
    BoundaryPoint,
    DiskPoint,
    Geodesic,
    GeodesicSegment,
    Mobius,
    cross_ratio,
    disk_distance,
    geodesic_distance,
    isometry_to_standard_quadruple,
    translation_along,
)
from .lamination import (
    HyperbolicDisk,
    LaminationError,
    MeasuredLamination,
    asymptotic_profile,
    disk_mass,
    monte_carlo_norm,
    restrict_to_disk,
    stratum_of,
    thurston_norm,
    validate,
)

__version__ = "0.1.0"
