"""Numerical semiconjugations for analytic self-maps of the disk and half-plane.

Construct the renormalized limit maps that conjugate a self-map onto an
affine model (dilation, translation, or planar translation), classify maps
by their Denjoy-Wolff behaviour, and verify the functional-equation,
maximality, canonicity and covering properties that single those limits out.
"""

from .dsl import (
    ParsedMap,
    SelfMapReport,
    check_selfmap,
    differentiate,
    evaluate,
    parse,
    substitute,
    to_source,
)
from .dynamics import (
    Classification,
    ClassifyConfig,
    Orbit,
    SelfMap,
    classify,
    extend_orbit,
    multiplier_at_infinity,
)
from .eqlab import (
    CanonicityConfig,
    CanonicityVerdict,
    Intertwiner,
    IntertwinerSpec,
    MaximalityReport,
    MembershipReport,
    PlanarAffine,
    SolutionPair,
    base_point_identity,
    canonicity_check,
    grand_orbit_equivalent,
    make_intertwiner,
    maximality_check,
    membership_check,
    residual,
)
from .errors import (
    AmbiguousWindingError,
    AutomorphismError,
    CannotStandardizeError,
    DomainError,
    EmptyFamilyError,
    GridMismatchError,
    InconclusiveError,
    InconsistentSeedsError,
    InvalidMapError,
    ModelMismatchError,
    NonConvergenceError,
    NotASelfMapError,
    OrbitPrecisionError,
    ParseError,
    PrecisionError,
    ResidualError,
    SemiconjError,
    UnstableLimitError,
    UnsupportedFamilyError,
    UsageError,
)
from .geometry import (
    INFINITY,
    HyperbolicDisk,
    MoebiusMap,
    WindingResult,
    cayley,
    disk_dist,
    disk_to_halfplane,
    halfplane_to_disk,
    hyp_dist,
    is_infinity,
    moebius_apply,
    moebius_compose,
    moebius_invert,
    winding_number,
)
from .renorm import (
    CoveringReport,
    RenormConfig,
    SemiconjResult,
    StandardForm,
    UnivalenceRegion,
    UnivalenceReport,
    covering_probe,
    halfplane_semiconjugation,
    planar_semiconjugation,
    standard_form,
    univalence_probe,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
