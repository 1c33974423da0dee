"""Causal semantics, unfolding, and distributability analysis for finite
1-safe labelled Petri nets."""

from .model import (
    TAU,
    ContactVerdict,
    DepToken,
    DependencyMarking,
    LabelledNet,
    NetError,
    NetParseError,
    UnknownElementError,
    check_contact_free,
    initial_dependency_marking,
    make_net,
    net_end,
    parse_net,
    postset,
    preset,
    serialize_net,
)
from .semantics import (
    CycleViolation,
    DependencyClass,
    LimitExceededError,
    NotACycleError,
    NotEnabledError,
    ReachEdge,
    ReachGraph,
    TruncatedGraphError,
    check_cycle_dependency,
    dependency_classes,
    enabled_steps,
    explore_reachable,
    fire_step,
    labelled_step,
    state_bound,
    step_enabled,
    weak_step,
)
from .distributability import (
    ConcurrencyRelation,
    DistributabilityVerdict,
    Distribution,
    PureMWitness,
    check_distributed,
    concurrency_relation,
    find_pure_m,
)
from .unfolding import (
    LPO,
    Pomset,
    Process,
    ProcessEntry,
    canonicalize,
    enumerate_processes,
    extend_process,
    initial_process,
    is_maximal,
    validate_process,
    visible_pomset,
)
from .equivalence import (
    BoundedObservation,
    EquivalenceVerdict,
    LocalDeadlockWitness,
    Witness,
    bounded_observation,
    compare,
    find_local_deadlock,
)
from .transforms import (
    BUILTIN_NAMES,
    RefinementRecord,
    builtin,
    refine_transition,
)

__all__ = [
    "TAU",
    "BUILTIN_NAMES",
    "BoundedObservation",
    "ConcurrencyRelation",
    "ContactVerdict",
    "CycleViolation",
    "DepToken",
    "DependencyClass",
    "DependencyMarking",
    "DistributabilityVerdict",
    "Distribution",
    "EquivalenceVerdict",
    "LPO",
    "LabelledNet",
    "LimitExceededError",
    "LocalDeadlockWitness",
    "NetError",
    "NetParseError",
    "NotACycleError",
    "NotEnabledError",
    "Pomset",
    "Process",
    "ProcessEntry",
    "PureMWitness",
    "ReachEdge",
    "ReachGraph",
    "RefinementRecord",
    "TruncatedGraphError",
    "UnknownElementError",
    "Witness",
    "bounded_observation",
    "builtin",
    "canonicalize",
    "check_contact_free",
    "check_cycle_dependency",
    "check_distributed",
    "compare",
    "concurrency_relation",
    "dependency_classes",
    "enabled_steps",
    "enumerate_processes",
    "explore_reachable",
    "extend_process",
    "find_local_deadlock",
    "find_pure_m",
    "fire_step",
    "initial_dependency_marking",
    "initial_process",
    "is_maximal",
    "labelled_step",
    "make_net",
    "net_end",
    "parse_net",
    "postset",
    "preset",
    "refine_transition",
    "serialize_net",
    "state_bound",
    "step_enabled",
    "validate_process",
    "visible_pomset",
    "weak_step",
]
