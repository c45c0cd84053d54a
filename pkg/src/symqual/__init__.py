"""Symmetry quality metrics for graph drawings."""

from .catalog import CatalogEntry, catalog, entry
from .detect import (
    ApproxSymmetry,
    AxisFrame,
    DetectedSymmetry,
    ExactSymmetryResult,
    FoldingResult,
    RotationFrame,
    approx_sym,
    detect_exact,
    fold_orbit,
    fold_orbits,
    geometric_median,
)
from .errors import (
    AdjacencyViolated,
    ConvergenceFailure,
    DegeneratePointSet,
    DisconnectedGraph,
    GraphMismatch,
    GroupNotClosed,
    KindMismatch,
    KindUndetermined,
    NoRotationalGenerator,
    NonFinite,
    NotBijective,
    OrbitSizeMismatch,
    ParseError,
    PlanInvalid,
    SingularSystem,
    SymQualError,
    TooLarge,
    ValidationError,
)
from .generators import brute_force_automorphisms, gen_axial, gen_rotational
from .geometry import Line, PointSet, normalize_to_unit_circle
from .graph import Automorphism, AutomorphismGroup, Drawing, Graph, compose, validate_automorphism
from .layouts import LayoutConfig, concentric_circles, run_layout
from .metrics import GroupScoreReport, ScoreReport, sq, sqg

__version__ = "0.1.0"
