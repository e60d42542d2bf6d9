"""Querying inconsistent knowledge bases through clusters of repairs.

The pipeline: parse a knowledge base with existential rules and
negative constraints, enumerate its repairs, measure pairwise
syntactic distances, embed and cluster the repair set, and answer
Boolean conjunctive queries under AR, IAR or ICR semantics restricted
to chosen repairs.
"""
from .chase import (
    DEFAULT_MAX_ROUNDS,
    RoundCapExceeded,
    entails,
    find_homomorphisms,
    ground_closure,
    is_consistent,
    saturate,
    skolemized_rules,
)
from .clustering import (
    Partition,
    default_sigma,
    eigenvalue_report,
    similarity_from_distance,
    spectral_partition,
    threshold_partition,
)
from .geometry import Embedding, mds_embed, stress, validate_matrix
from .inference import DifResult, Semantics, dif_answer, entails_scoped, ics_core
from .metric import (
    DEFAULT_WEIGHTS,
    TOP,
    DistanceMatrix,
    WeightScheme,
    atom_distance,
    atom_size,
    check_metric_axioms,
    distance_matrix,
    lgg,
    repair_distance,
)
from .model import (
    Atom,
    Constant,
    KnowledgeBase,
    NegativeConstraint,
    Query,
    Rule,
    SkolemTerm,
    Variable,
)
from .parser import ParseError, parse_kb, parse_query
from .repairs import (
    Conflict,
    Repair,
    RepairSet,
    brute_force_repairs,
    compute_conflicts,
    compute_repairs,
    minimal_hitting_sets,
)
from .session import (
    ClusteringSpec,
    Scope,
    Session,
    SessionConfig,
    SessionFormatError,
    analysis_document,
    answer_document,
    create_session,
    load_session,
    matrix_csv,
    parse_scope,
    save_session,
    session_document,
    summary_document,
    to_json,
)

__version__ = "1.0.0"

__all__ = [
    "Atom",
    "Conflict",
    "Constant",
    "ClusteringSpec",
    "DEFAULT_MAX_ROUNDS",
    "DEFAULT_WEIGHTS",
    "DifResult",
    "DistanceMatrix",
    "Embedding",
    "KnowledgeBase",
    "NegativeConstraint",
    "ParseError",
    "Partition",
    "Query",
    "Repair",
    "RepairSet",
    "RoundCapExceeded",
    "Rule",
    "Scope",
    "Semantics",
    "Session",
    "SessionConfig",
    "SessionFormatError",
    "SkolemTerm",
    "TOP",
    "Variable",
    "WeightScheme",
    "analysis_document",
    "answer_document",
    "atom_distance",
    "atom_size",
    "brute_force_repairs",
    "check_metric_axioms",
    "compute_conflicts",
    "compute_repairs",
    "create_session",
    "default_sigma",
    "dif_answer",
    "distance_matrix",
    "eigenvalue_report",
    "entails",
    "entails_scoped",
    "find_homomorphisms",
    "ground_closure",
    "ics_core",
    "is_consistent",
    "lgg",
    "load_session",
    "matrix_csv",
    "mds_embed",
    "minimal_hitting_sets",
    "parse_kb",
    "parse_query",
    "parse_scope",
    "repair_distance",
    "saturate",
    "save_session",
    "session_document",
    "similarity_from_distance",
    "skolemized_rules",
    "spectral_partition",
    "stress",
    "validate_matrix",
    "summary_document",
    "threshold_partition",
    "to_json",
]
