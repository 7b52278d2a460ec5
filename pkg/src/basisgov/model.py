"""Domain types for governed decision bases.

A basis is made of framework objects (the standing rules of the expert),
premises (action-justifying claims with a lifecycle), evidence records
(immutable, provenance-stamped), pending actions, expectations (observable
predictions grounded in a premise), dependency links, discrepancies, and
probes. Everything here is a plain value type; all mutation goes through the
ledger-backed engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import BasisError, INVALID_VALUE

# Tolerance for threshold comparisons so sums of weights like 0.6+0.5-0.3
# gate identically across platforms.
FLOAT_EPS = 1e-9


class FrameworkKind(str, Enum):
    GOAL = "goal"
    CONSTRAINT = "constraint"
    PRIORITY = "priority"
    THRESHOLD = "threshold"
    PROTOCOL = "protocol"
    ROLE_ALLOCATION = "role-allocation"


class Axis(str, Enum):
    """Alignment axis of a premise or discrepancy."""

    TELEOLOGICAL = "teleological"
    EPISTEMIC = "epistemic"
    PROCEDURAL = "procedural"
    UNKNOWN = "unknown"  # only valid on unlinked discrepancies


# Framework kinds grouped by the axis they ground.
TELEOLOGICAL_KINDS = {FrameworkKind.GOAL, FrameworkKind.CONSTRAINT, FrameworkKind.PRIORITY}
PROCEDURAL_KINDS = {FrameworkKind.THRESHOLD, FrameworkKind.PROTOCOL, FrameworkKind.ROLE_ALLOCATION}


def axis_for_framework_kind(kind: FrameworkKind) -> Axis:
    return Axis.TELEOLOGICAL if kind in TELEOLOGICAL_KINDS else Axis.PROCEDURAL


class PremiseStatus(str, Enum):
    DRAFT = "draft"
    CONTESTED = "contested"
    COMMITTED = "committed"
    REJECTED = "rejected"


#: "uncommitted" means draft or contested.
UNCOMMITTED = {PremiseStatus.DRAFT, PremiseStatus.CONTESTED}

#: Legal lifecycle edges. committed -> contested additionally requires a cause
#: (an open linked discrepancy or an explicit expert challenge); demotion of a
#: committed premise must pass through contested, never straight to rejected
#: or draft, so hardening and un-hardening are both disciplined.
LEGAL_TRANSITIONS: dict[PremiseStatus, set[PremiseStatus]] = {
    PremiseStatus.DRAFT: {PremiseStatus.CONTESTED, PremiseStatus.COMMITTED, PremiseStatus.REJECTED},
    PremiseStatus.CONTESTED: {PremiseStatus.COMMITTED, PremiseStatus.REJECTED},
    PremiseStatus.COMMITTED: {PremiseStatus.CONTESTED},
    PremiseStatus.REJECTED: set(),
}


class Stakes(str, Enum):
    LOW = "low"
    HIGH = "high"


class EvidenceDirection(str, Enum):
    SUPPORTS = "supports"
    REFUTES = "refutes"


class EvidenceSource(str, Enum):
    OBSERVATION = "observation"
    EXPERT_ASSERTION = "expert-assertion"
    PROBE_RESULT = "probe-result"


class ActionStatus(str, Enum):
    PENDING = "pending"
    COMMITTED = "committed"
    WITHDRAWN = "withdrawn"


class PredicateKind(str, Enum):
    EQUALS = "equals"
    IN_RANGE = "in-range"
    AT_LEAST = "at-least"
    AT_MOST = "at-most"


class LinkKind(str, Enum):
    SUPPORTS = "supports"
    GROUNDS = "grounds"


class DiscrepancyStatus(str, Enum):
    OPEN = "open"
    RESOLVED = "resolved"


class Linkage(str, Enum):
    LINKED = "linked"
    UNLINKED = "unlinked"


class RepairKind(str, Enum):
    REFRAME = "reframe"
    INVESTIGATE = "investigate"
    NEGOTIATE = "negotiate"
    CONSERVATIVE_ALTERNATIVE = "conservative-alternative"
    # Shown when nothing is contested and the gate passes: the only "repair"
    # left is confirming the commitment itself.
    COMMIT_CONFIRMATION = "commit-confirmation"


class GateVerdict(str, Enum):
    ALLOWED = "allowed"
    BLOCKED = "blocked"
    OVERRIDE_REQUIRED = "override-required"


class EpistemicAction(str, Enum):
    PROBE = "probe"
    DEFER = "defer"
    ESCALATE = "escalate"
    COMMIT = "commit"


@dataclass
class FrameworkObject:
    """A standing rule of the expert: goal, constraint, threshold, protocol, ..."""

    id: str
    kind: FrameworkKind
    statement: str
    params: dict
    revision: int = 1

    @property
    def axis(self) -> Axis:
        return axis_for_framework_kind(self.kind)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "statement": self.statement,
            "params": self.params,
            "revision": self.revision,
        }


@dataclass
class Premise:
    """An explicit action-justifying claim with lifecycle status."""

    id: str
    axis: Axis
    statement: str
    status: PremiseStatus = PremiseStatus.DRAFT
    credence: float = 0.5
    evidence_threshold: float = 0.0
    evidence_ids: list[str] = field(default_factory=list)
    stakes: Stakes = Stakes.LOW
    created_from: Optional[str] = None

    @property
    def uncommitted(self) -> bool:
        return self.status in UNCOMMITTED

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "axis": self.axis.value,
            "statement": self.statement,
            "status": self.status.value,
            "credence": self.credence,
            "evidence_threshold": self.evidence_threshold,
            "evidence_ids": list(self.evidence_ids),
            "stakes": self.stakes.value,
            "created_from": self.created_from,
        }


@dataclass
class EvidenceRecord:
    """Immutable observation or assertion. Corrections are new records."""

    id: str
    payload: str
    direction: EvidenceDirection
    weight: float
    source: EvidenceSource
    actor: str
    session: str
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "payload": self.payload,
            "direction": self.direction.value,
            "weight": self.weight,
            "source": self.source.value,
            "actor": self.actor,
            "session": self.session,
            "timestamp": self.timestamp,
        }


@dataclass
class PendingAction:
    """A candidate commitment. Utility is expert-assigned and used only to
    break ties among gate-passing candidates."""

    id: str
    description: str
    utility: float
    consequential: bool
    status: ActionStatus = ActionStatus.PENDING

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "utility": self.utility,
            "consequential": self.consequential,
            "status": self.status.value,
        }


@dataclass
class Expectation:
    """An observable prediction grounded in exactly one premise."""

    id: str
    premise_id: str
    variable: str
    predicate: PredicateKind
    operands: list

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "premise_id": self.premise_id,
            "variable": self.variable,
            "predicate": self.predicate.value,
            "operands": list(self.operands),
        }


@dataclass
class DependencyLink:
    """Typed edge: source justifies/supports target. The graph stays acyclic."""

    id: str
    source: str
    target: str
    kind: LinkKind

    def to_dict(self) -> dict:
        return {"id": self.id, "source": self.source, "target": self.target, "kind": self.kind.value}


@dataclass
class Discrepancy:
    """First-class mismatch object: trigger, violated object, decision impact."""

    id: str
    trigger: str
    violated_object: Optional[str]
    axis: Axis
    impact: list[str]
    status: DiscrepancyStatus = DiscrepancyStatus.OPEN
    linkage: Linkage = Linkage.LINKED
    resolution_evidence: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "trigger": self.trigger,
            "violated_object": self.violated_object,
            "axis": self.axis.value,
            "impact": list(self.impact),
            "status": self.status.value,
            "linkage": self.linkage.value,
            "resolution_evidence": self.resolution_evidence,
        }


@dataclass
class ProbeSpec:
    """A discriminating test targeting one premise."""

    id: str
    premise_id: str
    description: str
    discrimination: float  # in [0, 1]
    cost: float  # >= 0
    resulted: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "premise_id": self.premise_id,
            "description": self.description,
            "discrimination": self.discrimination,
            "cost": self.cost,
            "resulted": self.resulted,
        }


@dataclass
class RepairOption:
    kind: RepairKind
    target: str
    probe: Optional[dict] = None  # {probe_id?, description, discrimination, cost}
    risk_note_required: bool = False

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "target": self.target,
            "probe": self.probe,
            "risk_note_required": self.risk_note_required,
        }


@dataclass
class GateResult:
    verdict: GateVerdict
    blocking_premises: list[dict]  # [{"premise_id": ..., "status": ...}]
    checked_at: int

    @property
    def allowed(self) -> bool:
        return self.verdict is GateVerdict.ALLOWED

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "blocking_premises": list(self.blocking_premises),
            "checked_at": self.checked_at,
        }


@dataclass
class TransitionResult:
    applied: bool
    premise_id: str
    status: PremiseStatus
    reason: Optional[str] = None
    blocking: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "applied": self.applied,
            "premise_id": self.premise_id,
            "status": self.status.value,
            "reason": self.reason,
            "blocking": list(self.blocking),
        }


@dataclass
class DecisionSlice:
    """Budgeted negotiation projection for one pending action.

    Item accounting: len(premises) + len(discrepant_evidence) +
    len(repair_options) + 1 (the consequence) never exceeds budget max_items.
    """

    action_id: str
    premises: list[dict]  # [{"premise_id", "status", "sensitive", "context"}]
    discrepant_evidence: list[dict]
    consequence: dict  # {"text", "dominant_premise", "if_committed", "if_rejected"}
    repair_options: list[RepairOption]
    budget: dict  # {"max_items": int}
    compiled_at: int

    def to_dict(self) -> dict:
        return {
            "action_id": self.action_id,
            "premises": list(self.premises),
            "discrepant_evidence": list(self.discrepant_evidence),
            "consequence": self.consequence,
            "repair_options": [o.to_dict() for o in self.repair_options],
            "budget": self.budget,
            "compiled_at": self.compiled_at,
        }

    def item_count(self) -> int:
        return len(self.premises) + len(self.discrepant_evidence) + len(self.repair_options) + 1


@dataclass
class EpistemicDecision:
    action: EpistemicAction
    justification: dict
    chosen_probe: Optional[str] = None  # probe id

    def to_dict(self) -> dict:
        return {
            "action": self.action.value,
            "justification": self.justification,
            "chosen_probe": self.chosen_probe,
        }


@dataclass
class PolicyConfig:
    """Knobs of the value-gated epistemic policy.

    probe_threshold: minimum value-of-information for a probe to fire.
    cost_weight: exchange rate from probe cost into information bits.
    contested_gate_count: number of contested load-bearing premises at which
        repair takes priority over everything but escalation.
    interaction_budget: maximum cost of a single probe the policy may spend.
    """

    probe_threshold: float = 0.1
    cost_weight: float = 1.0
    contested_gate_count: int = 2
    interaction_budget: float = 1.0

    def __post_init__(self):
        for name in ("probe_threshold", "cost_weight", "contested_gate_count", "interaction_budget"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise BasisError(INVALID_VALUE, f"policy field {name} must be finite")
        if self.probe_threshold < 0:
            raise BasisError(INVALID_VALUE, "probe_threshold must be >= 0")
        if self.cost_weight < 0:
            raise BasisError(INVALID_VALUE, "cost_weight must be >= 0")
        if self.contested_gate_count < 1:
            raise BasisError(INVALID_VALUE, "contested_gate_count must be >= 1")
        if self.interaction_budget < 0:
            raise BasisError(INVALID_VALUE, "interaction_budget must be >= 0")

    def to_dict(self) -> dict:
        return {
            "probe_threshold": self.probe_threshold,
            "cost_weight": self.cost_weight,
            "contested_gate_count": self.contested_gate_count,
            "interaction_budget": self.interaction_budget,
        }


def evidence_score(records: list[EvidenceRecord]) -> float:
    """Signed additive aggregation: sum of supporting weights minus refuting."""
    score = 0.0
    for r in records:
        score += r.weight if r.direction is EvidenceDirection.SUPPORTS else -r.weight
    return score


def expectation_holds(predicate: PredicateKind, operands: list, value) -> bool:
    """Evaluate an expectation predicate against an observed value."""
    if predicate is PredicateKind.EQUALS:
        return value == operands[0]
    if predicate is PredicateKind.IN_RANGE:
        return operands[0] <= value <= operands[1]
    if predicate is PredicateKind.AT_LEAST:
        return value >= operands[0]
    if predicate is PredicateKind.AT_MOST:
        return value <= operands[0]
    raise BasisError(INVALID_VALUE, f"unknown predicate: {predicate}")


def validate_operands(predicate: PredicateKind, operands: list) -> None:
    arity = 2 if predicate is PredicateKind.IN_RANGE else 1
    if len(operands) != arity:
        raise BasisError(
            INVALID_VALUE, f"predicate {predicate.value} takes {arity} operand(s), got {len(operands)}"
        )
    if predicate is PredicateKind.IN_RANGE and operands[0] > operands[1]:
        raise BasisError(INVALID_VALUE, "in-range operands must satisfy low <= high")
