"""basisgov: governance engine for decision bases.

Typed premises with lifecycle and evidence, dependency-gated commitment,
typed discrepancy routing, budgeted decision slices, value-gated probing,
and a hash-chained provenance ledger that makes live state a pure fold of
the event log.
"""

from .engine import Basis
from .errors import BasisError, ERROR_CODES
from .ledger import EventKind, Ledger, LedgerEvent, canonical_json, verify_chain
from .model import (
    Axis,
    DecisionSlice,
    Discrepancy,
    EpistemicAction,
    EpistemicDecision,
    EvidenceDirection,
    EvidenceRecord,
    EvidenceSource,
    FrameworkKind,
    FrameworkObject,
    GateResult,
    GateVerdict,
    LinkKind,
    PendingAction,
    PolicyConfig,
    PredicateKind,
    Premise,
    PremiseStatus,
    ProbeSpec,
    RepairKind,
    RepairOption,
    Stakes,
    TransitionResult,
)
from .state import BasisState, apply_event, replay

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "BasisError",
    "BasisState",
    "ERROR_CODES",
    "EventKind",
    "Ledger",
    "LedgerEvent",
    "apply_event",
    "canonical_json",
    "replay",
    "verify_chain",
    "Axis",
    "DecisionSlice",
    "Discrepancy",
    "EpistemicAction",
    "EpistemicDecision",
    "EvidenceDirection",
    "EvidenceRecord",
    "EvidenceSource",
    "FrameworkKind",
    "FrameworkObject",
    "GateResult",
    "GateVerdict",
    "LinkKind",
    "PendingAction",
    "PolicyConfig",
    "PredicateKind",
    "Premise",
    "PremiseStatus",
    "ProbeSpec",
    "RepairKind",
    "RepairOption",
    "Stakes",
    "TransitionResult",
    "__version__",
]
