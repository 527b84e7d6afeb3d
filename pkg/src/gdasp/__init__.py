"""Goal-directed answer set solving with abduction, plus a guideline advisor."""

from .syntax import (
    Atom,
    Comparison,
    Constant,
    Literal,
    Number,
    ParseError,
    Program,
    Rule,
    SafetyError,
    Variable,
    parse_program,
    parse_query,
    render,
)
from .grounding import GroundingExplosion, GroundProgram, ground, herbrand_universe
from .engine import (
    DepthLimitExceeded,
    PartialAnswerSet,
    RuleClassification,
    Solver,
    classify_rules,
    enumerate_all,
    solve,
)
from .abduction import (
    AbducibleConflict,
    AbductionProblem,
    Explanation,
    abduce,
    expand_abducibles,
    generate_abducible_declarations,
)
from .oracle import BaseTooLarge, enumerate_stable_models, verify_explanation

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "Comparison",
    "Constant",
    "Literal",
    "Number",
    "ParseError",
    "Program",
    "Rule",
    "SafetyError",
    "Variable",
    "parse_program",
    "parse_query",
    "render",
    "GroundingExplosion",
    "GroundProgram",
    "ground",
    "herbrand_universe",
    "DepthLimitExceeded",
    "PartialAnswerSet",
    "RuleClassification",
    "Solver",
    "classify_rules",
    "enumerate_all",
    "solve",
    "AbducibleConflict",
    "AbductionProblem",
    "Explanation",
    "abduce",
    "expand_abducibles",
    "generate_abducible_declarations",
    "BaseTooLarge",
    "enumerate_stable_models",
    "verify_explanation",
    "__version__",
]
