"""invcat: exact factorization of linear diagrams through inverse categories.

Given a finite diagram of vector spaces and linear maps (a representation of
the free category on a quiver), decide with exact rational or prime-field
arithmetic whether it factors through an inverse category, produce the
witnessing commuting projection families and pseudo-inverses, and, for
cycle-free quivers, a certified decomposition into blockcodes.
"""

from .criterion import (
    CriterionReport,
    CriterionValue,
    check_representation,
    evaluate_pair,
)
from .decompose import (
    BlockcodeDecomposition,
    VerificationResult,
    decompose,
    verify_decomposition,
)
from .errors import (
    AlignmentFailure,
    AxiomViolation,
    ClosureDivergence,
    CompositionError,
    ConstructionFailure,
    CriterionViolated,
    CycleError,
    ElementNotInPoset,
    InputSyntaxError,
    MissingBounds,
    MissingFlagElement,
    NotMeetClosed,
    ToolError,
    TooLarge,
    ValidationError,
)
from .fields import GF, RATIONALS, Field
from .flag import ClosureLimits, FlagAssignment, Witness, compute_flag
from .linalg import (
    Matrix,
    Subspace,
    image,
    inverse,
    kernel,
    map_image,
    map_preimage,
    projection_onto,
    rank,
    rref,
    solve_particular,
    sub_contains,
    sub_intersect,
    sub_sum,
)
from .oracle import OracleBounds, OracleInstance, all_subspaces, meet_closure, oracle_exists_family
from .pipeline import Analysis, analyze, build_families
from .poset import (
    MobiusTable,
    SubspacePoset,
    build_poset,
    export_dot,
    forward_sum,
    mobius,
    mobius_invert,
)
from .realize import (
    Envelope,
    EnvelopeLimits,
    ProjectionFamily,
    kernel_decomposition_check,
    pseudo_inverse,
    realize_projections,
    verify_envelope,
    verify_projection_family,
)
from .rep import (
    Generator,
    QuiverShape,
    RepObject,
    Representation,
    evaluate_word,
    parse_representation,
    quiver_shape,
)

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "AlignmentFailure",
    "AxiomViolation",
    "BlockcodeDecomposition",
    "ClosureDivergence",
    "ClosureLimits",
    "CompositionError",
    "ConstructionFailure",
    "CriterionReport",
    "CriterionValue",
    "CriterionViolated",
    "CycleError",
    "ElementNotInPoset",
    "Envelope",
    "EnvelopeLimits",
    "Field",
    "FlagAssignment",
    "GF",
    "Generator",
    "InputSyntaxError",
    "Matrix",
    "MissingBounds",
    "MissingFlagElement",
    "MobiusTable",
    "NotMeetClosed",
    "OracleBounds",
    "OracleInstance",
    "ProjectionFamily",
    "QuiverShape",
    "RATIONALS",
    "RepObject",
    "Representation",
    "Subspace",
    "SubspacePoset",
    "ToolError",
    "TooLarge",
    "ValidationError",
    "VerificationResult",
    "Witness",
    "all_subspaces",
    "analyze",
    "build_families",
    "build_poset",
    "check_representation",
    "compute_flag",
    "decompose",
    "evaluate_pair",
    "evaluate_word",
    "export_dot",
    "forward_sum",
    "image",
    "inverse",
    "kernel",
    "kernel_decomposition_check",
    "map_image",
    "map_preimage",
    "meet_closure",
    "mobius",
    "mobius_invert",
    "oracle_exists_family",
    "parse_representation",
    "projection_onto",
    "pseudo_inverse",
    "quiver_shape",
    "rank",
    "realize_projections",
    "rref",
    "solve_particular",
    "sub_contains",
    "sub_intersect",
    "sub_sum",
    "verify_decomposition",
    "verify_envelope",
    "verify_projection_family",
]
