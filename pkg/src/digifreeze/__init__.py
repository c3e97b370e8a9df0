"""Freezing sets for finite digital images in Z^n under c_u adjacency."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DigifreezeError,
    InconclusiveError,
    NotFrozenError,
    PreconditionError,
)
from .lattice import (  # noqa: E402
    DigitalImage,
    PathResult,
    adjacent,
    boundary,
    closed_neighbors,
    is_connected,
    neighbors,
    path_structure,
    projection,
)
from .maps import (  # noqa: E402
    ImageMap,
    LatticeIso,
    SelfMap,
    apply_iso,
    apply_iso_to_set,
    compose,
    enumerate_continuous_selfmaps,
    fixed_points,
    is_continuous,
    normalize_to_origin,
)
from .construct import (  # noqa: E402
    CubeDecomposition,
    CubeSpec,
    boundary_minimality_witness,
    c1_freezing_set,
    close_neighbor_witness,
    cn_freezing_set,
    corners,
    mandatory_points,
    trivial_decomposition,
    validate_decomposition,
)
from .verify import (  # noqa: E402
    Status,
    VerifyOutcome,
    greedy_minimize,
    is_minimal_freezing,
    oracle_verify,
    propagate,
    verify_freezing,
)

__all__ = [
    "__version__",
    "DigifreezeError",
    "InconclusiveError",
    "NotFrozenError",
    "PreconditionError",
    "DigitalImage",
    "PathResult",
    "adjacent",
    "boundary",
    "closed_neighbors",
    "is_connected",
    "neighbors",
    "path_structure",
    "projection",
    "ImageMap",
    "LatticeIso",
    "SelfMap",
    "apply_iso",
    "apply_iso_to_set",
    "compose",
    "enumerate_continuous_selfmaps",
    "fixed_points",
    "is_continuous",
    "normalize_to_origin",
    "CubeDecomposition",
    "CubeSpec",
    "boundary_minimality_witness",
    "c1_freezing_set",
    "close_neighbor_witness",
    "cn_freezing_set",
    "corners",
    "mandatory_points",
    "trivial_decomposition",
    "validate_decomposition",
    "Status",
    "VerifyOutcome",
    "greedy_minimize",
    "is_minimal_freezing",
    "oracle_verify",
    "propagate",
    "verify_freezing",
]
