"""Local update machines on tape strings, evaluated two ways: directly by
the rule table, and categorically by gluing a colimit over a precomputed
shape category.  Law checkers keep the two routes honest against each other.
"""

from .colimit import (
    Disconnected,
    GlueError,
    GlueResult,
    LabelConflict,
    NotLinear,
    TapeDiagram,
    density_check,
    glue,
)
from .fincat import (
    BoundRequired,
    CommaObject,
    FinCatPresentation,
    FunctorData,
    TapeCategory,
    ValidationReport,
    canonical_dense_subcategory,
    comma_enumerate,
    validate_category,
    validate_functor,
)
from .kan import EvalTrace, SweepReport, equivalence_sweep, evaluate, evaluate_traced, explain
from .machine import (
    CandidateExplanation,
    Explanation,
    MachineConfigError,
    MachineSpec,
    Mediator,
    ShapeCategory,
    adjunction_sweep,
    apply,
    apply_morphism,
    causal_neighbourhood,
    format_machine,
    functoriality_sweep,
    parse_machine,
    shape_category,
    shape_table,
    universality_check,
    validate_machine,
)
from .tape import (
    DEFAULT_ALPHABET,
    Alphabet,
    AlphabetMismatch,
    InvalidOccurrence,
    NonComposable,
    Occurrence,
    TapeString,
    all_strings,
    compose,
    hom,
    identity,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AlphabetMismatch",
    "BoundRequired",
    "CandidateExplanation",
    "CommaObject",
    "DEFAULT_ALPHABET",
    "Disconnected",
    "EvalTrace",
    "Explanation",
    "FinCatPresentation",
    "FunctorData",
    "GlueError",
    "GlueResult",
    "InvalidOccurrence",
    "LabelConflict",
    "MachineConfigError",
    "MachineSpec",
    "Mediator",
    "NonComposable",
    "NotLinear",
    "Occurrence",
    "ShapeCategory",
    "SweepReport",
    "TapeCategory",
    "TapeDiagram",
    "TapeString",
    "ValidationReport",
    "adjunction_sweep",
    "all_strings",
    "apply",
    "apply_morphism",
    "canonical_dense_subcategory",
    "causal_neighbourhood",
    "comma_enumerate",
    "compose",
    "density_check",
    "equivalence_sweep",
    "evaluate",
    "evaluate_traced",
    "explain",
    "format_machine",
    "functoriality_sweep",
    "glue",
    "hom",
    "identity",
    "parse_machine",
    "shape_category",
    "shape_table",
    "universality_check",
    "validate_category",
    "validate_functor",
    "validate_machine",
    "__version__",
]
