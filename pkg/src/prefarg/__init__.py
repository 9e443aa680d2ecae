"""prefarg: preference-based structured argumentation.

Decides queries over defeasible rule bases with leveled priorities,
explains the verdicts, finds minimal abductive assumptions, and
statically analyzes rule conflicts. Ships executable packs for
cyber-attack attribution and e-health data-sharing policies behind a
CLI and an HTTP service.
"""

from ._semantics import BACKEND
from .abduction import AbductionResult, AbductiveAnswer, abduce
from .config import DEFAULT_CONFIG, EngineConfig, EngineLimitError
from .conflicts import (
    ConflictReport,
    ResolutionError,
    apply_resolution,
    detect_conflicts,
    suggest_priority,
)
from .dsl import ParseError, Scenario, parse, parse_literal, parse_scenario, print_theory
from .explain import Explanation, explain_verdict, render_structured, render_text
from .grounding import GroundTheory, ground
from .kernel import (
    ArgumentRule,
    Diagnostic,
    IncompatibilityDecl,
    Literal,
    PriorityRule,
    Term,
    Theory,
    complement,
    incompatible,
    validate,
)
from .packs import PackError, load_pack, load_scenario, pack_names, run_scenario
from .solver import (
    Argument,
    DefeatGraph,
    EvidenceContradiction,
    Verdict,
    analyze,
    build_arguments,
    build_defeat_graph,
    compare_at_conflict,
    derive_closure,
    grounded_extension,
    preferred_extensions,
    query,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentRule", "Argument", "AbductionResult", "AbductiveAnswer",
    "BACKEND", "ConflictReport", "DEFAULT_CONFIG", "DefeatGraph",
    "Diagnostic", "EngineConfig", "EngineLimitError", "EvidenceContradiction",
    "Explanation", "GroundTheory", "IncompatibilityDecl", "Literal",
    "PackError", "ParseError", "PriorityRule", "ResolutionError", "Scenario",
    "Term", "Theory", "Verdict", "abduce", "analyze", "apply_resolution",
    "build_arguments", "build_defeat_graph", "compare_at_conflict",
    "complement", "derive_closure", "detect_conflicts", "explain_verdict",
    "ground", "grounded_extension", "incompatible", "load_pack",
    "load_scenario", "pack_names", "parse", "parse_literal", "parse_scenario",
    "preferred_extensions", "print_theory", "query", "render_structured",
    "render_text", "run_scenario", "suggest_priority", "validate",
]
