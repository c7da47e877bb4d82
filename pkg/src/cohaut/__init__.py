"""cohaut: Whitehead exact sequences and coherent automorphism groups of
1-connected minimal Sullivan algebras over Q, in exact arithmetic."""

from .algebra import (
    Generator,
    Monomial,
    Polynomial,
    basis,
    canonicalize,
    coordinates,
    multiply,
)
from .cohomology import (
    CohomologyBasis,
    CohomologyClass,
    NotACocycle,
    class_of,
    coboundary_matrix,
    cohomology,
    induced_map,
)
from .coherence import (
    GradedLinearMap,
    LiftResult,
    Obstruction,
    gap_report,
    induced_on_indecomposables,
    invert_coherent,
    is_coherent,
    try_lift,
)
from .corpus import BUILTIN_LABELS, load_builtin
from .diagsolve import (
    GroupStructure,
    MonomialConstraintSystem,
    NotDiagonal,
    SolutionSet,
    coherent_iso_exists,
    extract_constraints,
    extract_cross_constraints,
    group_structure,
    lift_verify,
    solve,
)
from .dsl import ParseError, parse, serialize
from .model import (
    CochainMorphism,
    ModelError,
    MorphismError,
    SullivanModel,
    ValidationReport,
    apply_differential,
    compose,
    extend_tower,
    identity,
    truncate,
)
from .whitehead import (
    WhiteheadSequence,
    build_wes,
    check_exactness,
    j_map,
    naturality_check,
)

__version__ = "0.1.0"
