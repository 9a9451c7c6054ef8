"""Artificial chemistry simulation and self-reproduction analysis.

The package simulates deterministic multiset-rewriting chemistries,
extracts their causal structure, and decides whether molecules (and
sets of molecules at higher organizational levels) potentially or
actually reproduce themselves, with an explicit material-accounting
requirement separating reproduction from appearance out of nothing and
a non-triviality constraint separating emergent organization from
coincidental collections.
"""

from .causality import (
    DEFAULT_PATH_BUDGET,
    CausalEdge,
    CausalPath,
    ReactionGraph,
    causal_edges,
    causal_paths,
    count_pairwise_paths,
    reaction_graph,
)
from .chemistry import (
    ChemistrySpec,
    Reaction,
    ReactionSeq,
    format_chemistry,
    parse_chemistry,
    seq_input,
    seq_output,
)
from .engine import (
    CycleWitness,
    FeasibilityMode,
    SchedulerPolicy,
    Trace,
    apply,
    detect_cycle,
    is_feasible,
    is_feasible_seq,
    schedule,
    simulate,
)
from .errors import (
    AchemError,
    BudgetExceededError,
    InfeasibleReactionError,
    MalformedEntityError,
    MalformedRecordError,
    MissingChemistryError,
    ParseError,
    TraceFormatError,
    TraceInvariantError,
    UnknownReactionError,
    UnknownSymbolError,
    WitnessMismatchError,
)
from .hierarchy import (
    Caps,
    HierEntity,
    Level1Verdict,
    MetaReaction,
    copy_count,
    detect_selfrep1,
    enumerate_level1,
    format_entity,
    is_nontrivial,
    level1_causal,
    level_of,
    net_production,
    parse_entity,
    perfect_matching,
    takes_part,
    temporally_precedes,
)
from .multiset import Multiset, canonical_encode, contains, intersect, subtract, union
from .reporting import ReportDocument, fingerprint_text, run_pipeline, selfrep_sweep
from .selfrep import (
    EquivalenceSpec,
    FailureReason,
    Level0Verdict,
    Status,
    check_material_basis,
    detect_selfrep,
    detect_selfrep_across_policies,
    equivalent,
    verify_theorem1,
)
from .traceio import TraceRecord, export_dot, load_trace, read_trace, save_trace, write_trace

__version__ = "0.1.0"

__all__ = [
    "AchemError",
    "BudgetExceededError",
    "Caps",
    "CausalEdge",
    "CausalPath",
    "ChemistrySpec",
    "CycleWitness",
    "DEFAULT_PATH_BUDGET",
    "EquivalenceSpec",
    "FailureReason",
    "FeasibilityMode",
    "HierEntity",
    "InfeasibleReactionError",
    "Level0Verdict",
    "Level1Verdict",
    "MalformedEntityError",
    "MalformedRecordError",
    "MetaReaction",
    "MissingChemistryError",
    "Multiset",
    "ParseError",
    "Reaction",
    "ReactionGraph",
    "ReactionSeq",
    "ReportDocument",
    "SchedulerPolicy",
    "Status",
    "Trace",
    "TraceFormatError",
    "TraceInvariantError",
    "TraceRecord",
    "UnknownReactionError",
    "UnknownSymbolError",
    "WitnessMismatchError",
    "apply",
    "canonical_encode",
    "causal_edges",
    "causal_paths",
    "check_material_basis",
    "contains",
    "copy_count",
    "count_pairwise_paths",
    "detect_cycle",
    "detect_selfrep",
    "detect_selfrep1",
    "detect_selfrep_across_policies",
    "enumerate_level1",
    "equivalent",
    "export_dot",
    "fingerprint_text",
    "format_chemistry",
    "format_entity",
    "intersect",
    "is_feasible",
    "is_feasible_seq",
    "is_nontrivial",
    "level1_causal",
    "level_of",
    "load_trace",
    "net_production",
    "parse_chemistry",
    "parse_entity",
    "perfect_matching",
    "reaction_graph",
    "read_trace",
    "run_pipeline",
    "save_trace",
    "schedule",
    "selfrep_sweep",
    "seq_input",
    "seq_output",
    "simulate",
    "subtract",
    "takes_part",
    "temporally_precedes",
    "union",
    "verify_theorem1",
    "write_trace",
]
