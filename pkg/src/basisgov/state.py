"""Basis snapshot and the event fold.

A ``BasisState`` is derived state only: both the live engine and ``replay``
build it by folding ledger events through :func:`apply_event`, which is the
single source of truth for what each event does. That construction makes
"live state == replay(log)" hold by design; the test suite still checks it
over fuzzed runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import BasisError, UNKNOWN_EVENT_KIND
from .ledger import EventKind, LedgerEvent, canonical_json
from .model import (
    ActionStatus,
    Axis,
    DependencyLink,
    Discrepancy,
    DiscrepancyStatus,
    EvidenceDirection,
    EvidenceRecord,
    EvidenceSource,
    Expectation,
    FrameworkKind,
    FrameworkObject,
    LinkKind,
    Linkage,
    PendingAction,
    PredicateKind,
    Premise,
    PremiseStatus,
    ProbeSpec,
    Stakes,
)


@dataclass
class BasisState:
    frameworks: dict[str, FrameworkObject] = field(default_factory=dict)
    framework_history: dict[str, list[dict]] = field(default_factory=dict)
    premises: dict[str, Premise] = field(default_factory=dict)
    evidence: dict[str, EvidenceRecord] = field(default_factory=dict)
    actions: dict[str, PendingAction] = field(default_factory=dict)
    expectations: dict[str, Expectation] = field(default_factory=dict)
    links: dict[str, DependencyLink] = field(default_factory=dict)
    discrepancies: dict[str, Discrepancy] = field(default_factory=dict)
    probes: dict[str, ProbeSpec] = field(default_factory=dict)
    sessions: dict[str, dict] = field(default_factory=dict)
    #: index of the last state-changing event folded in; -1 when empty
    version: int = -1
    #: reverse-reachability memo, cleared on every LinkAdded (not part of state)
    reach_cache: dict = field(default_factory=dict, compare=False, repr=False)

    # -- lookup helpers ----------------------------------------------------

    def has_object(self, object_id: str) -> bool:
        return (
            object_id in self.premises
            or object_id in self.expectations
            or object_id in self.actions
            or object_id in self.frameworks
            or object_id in self.evidence
            or object_id in self.discrepancies
            or object_id in self.probes
            or object_id in self.sessions
        )

    def evidence_for(self, premise_id: str) -> list[EvidenceRecord]:
        return [self.evidence[eid] for eid in self.premises[premise_id].evidence_ids]

    def open_discrepancies_on_premise(self, premise_id: str) -> list[Discrepancy]:
        """Open linked discrepancies whose violated object resolves to the premise."""
        out = []
        for d in self.discrepancies.values():
            if d.status is not DiscrepancyStatus.OPEN or d.linkage is not Linkage.LINKED:
                continue
            if self.violated_premise_of(d) == premise_id:
                out.append(d)
        return out

    def violated_premise_of(self, d: Discrepancy) -> Optional[str]:
        """Premise a discrepancy bears on: directly, or through its expectation."""
        if d.violated_object is None:
            return None
        if d.violated_object in self.premises:
            return d.violated_object
        if d.violated_object in self.expectations:
            return self.expectations[d.violated_object].premise_id
        return None

    # -- canonical form ------------------------------------------------------

    def to_canonical_dict(self) -> dict:
        return {
            "frameworks": {k: v.to_dict() for k, v in sorted(self.frameworks.items())},
            "framework_history": {k: v for k, v in sorted(self.framework_history.items())},
            "premises": {k: v.to_dict() for k, v in sorted(self.premises.items())},
            "evidence": {k: v.to_dict() for k, v in sorted(self.evidence.items())},
            "actions": {k: v.to_dict() for k, v in sorted(self.actions.items())},
            "expectations": {k: v.to_dict() for k, v in sorted(self.expectations.items())},
            "links": {k: v.to_dict() for k, v in sorted(self.links.items())},
            "discrepancies": {k: v.to_dict() for k, v in sorted(self.discrepancies.items())},
            "probes": {k: v.to_dict() for k, v in sorted(self.probes.items())},
            "sessions": {k: v for k, v in sorted(self.sessions.items())},
            "version": self.version,
        }

    def canonical(self) -> str:
        return canonical_json(self.to_canonical_dict())

    # -- deterministic id allocation ----------------------------------------

    def next_id(self, prefix: str) -> str:
        counts = {
            "P": len(self.premises),
            "E": len(self.evidence),
            "A": len(self.actions),
            "X": len(self.expectations),
            "L": len(self.links),
            "D": len(self.discrepancies),
            "F": len(self.frameworks),
            "PR": len(self.probes),
            "S": len(self.sessions),
        }
        return f"{prefix}{counts[prefix] + 1:04d}"


def apply_event(state: BasisState, event: LedgerEvent) -> BasisState:
    """Fold one event into the snapshot. Total over all event kinds."""
    p = event.payload
    kind = event.kind

    if kind is EventKind.PREMISE_CREATED:
        state.premises[p["premise_id"]] = Premise(
            id=p["premise_id"],
            axis=Axis(p["axis"]),
            statement=p["statement"],
            status=PremiseStatus.DRAFT,
            credence=p["credence"],
            evidence_threshold=p["evidence_threshold"],
            stakes=Stakes(p["stakes"]),
            created_from=p.get("created_from"),
        )
    elif kind is EventKind.CREDENCE_SET:
        state.premises[p["premise_id"]].credence = p["credence"]
    elif kind is EventKind.EVIDENCE_ATTACHED:
        record = EvidenceRecord(
            id=p["evidence_id"],
            payload=p["payload"],
            direction=EvidenceDirection(p["direction"]),
            weight=p["weight"],
            source=EvidenceSource(p["source"]),
            actor=event.actor,
            session=event.session,
            timestamp=event.timestamp,
        )
        state.evidence[record.id] = record
        for pid in p["premise_ids"]:
            state.premises[pid].evidence_ids.append(record.id)
    elif kind is EventKind.TRANSITION_APPLIED:
        state.premises[p["premise_id"]].status = PremiseStatus(p["to"])
    elif kind in (EventKind.TRANSITION_PROPOSED, EventKind.TRANSITION_REJECTED):
        pass  # audit record only
    elif kind is EventKind.ACTION_CREATED:
        state.actions[p["action_id"]] = PendingAction(
            id=p["action_id"],
            description=p["description"],
            utility=p["utility"],
            consequential=p["consequential"],
        )
    elif kind is EventKind.ACTION_WITHDRAWN:
        state.actions[p["action_id"]].status = ActionStatus.WITHDRAWN
    elif kind is EventKind.EXPECTATION_CREATED:
        state.expectations[p["expectation_id"]] = Expectation(
            id=p["expectation_id"],
            premise_id=p["premise_id"],
            variable=p["variable"],
            predicate=PredicateKind(p["predicate"]),
            operands=p["operands"],
        )
    elif kind is EventKind.LINK_ADDED:
        state.links[p["link_id"]] = DependencyLink(
            id=p["link_id"], source=p["source"], target=p["target"], kind=LinkKind(p["kind"])
        )
        state.reach_cache.clear()
    elif kind is EventKind.DISCREPANCY_OPENED:
        state.discrepancies[p["discrepancy_id"]] = Discrepancy(
            id=p["discrepancy_id"],
            trigger=p["trigger"],
            violated_object=p.get("violated_object"),
            axis=Axis(p["axis"]),
            impact=list(p["impact"]),
            linkage=Linkage(p["linkage"]),
        )
    elif kind is EventKind.DISCREPANCY_LINKED:
        d = state.discrepancies[p["discrepancy_id"]]
        d.violated_object = p["violated_object"]
        d.axis = Axis(p["axis"])
        d.impact = list(p["impact"])
        d.linkage = Linkage.LINKED
    elif kind is EventKind.DISCREPANCY_TYPED:
        state.discrepancies[p["discrepancy_id"]].axis = Axis(p["axis"])
    elif kind is EventKind.DISCREPANCY_RESOLVED:
        d = state.discrepancies[p["discrepancy_id"]]
        d.status = DiscrepancyStatus.RESOLVED
        d.resolution_evidence = p["resolution_evidence"]
    elif kind in (EventKind.SLICE_COMPILED, EventKind.CHALLENGE_ISSUED, EventKind.GATE_CHECKED, EventKind.POLICY_DECIDED):
        pass  # audit record only
    elif kind is EventKind.PROBE_PROPOSED:
        state.probes[p["probe_id"]] = ProbeSpec(
            id=p["probe_id"],
            premise_id=p["premise_id"],
            description=p["description"],
            discrimination=p["discrimination"],
            cost=p["cost"],
        )
    elif kind is EventKind.PROBE_RESULTED:
        state.probes[p["probe_id"]].resulted = True
    elif kind is EventKind.COMMIT_GRANTED:
        state.actions[p["action_id"]].status = ActionStatus.COMMITTED
    elif kind is EventKind.OVERRIDE_GRANTED:
        state.actions[p["action_id"]].status = ActionStatus.COMMITTED
    elif kind is EventKind.FRAMEWORK_REVISED:
        obj = FrameworkObject(
            id=p["object_id"],
            kind=FrameworkKind(p["kind"]),
            statement=p["statement"],
            params=dict(p["params"]),
            revision=p["revision"],
        )
        state.frameworks[obj.id] = obj
        state.framework_history.setdefault(obj.id, []).append(obj.to_dict())
    elif kind is EventKind.SESSION_OPENED:
        state.sessions[p["session_id"]] = {"actor": event.actor, "open": True}
    elif kind is EventKind.SESSION_CLOSED:
        state.sessions[p["session_id"]]["open"] = False
    else:  # pragma: no cover - EventKind is closed, but replay must be total
        raise BasisError(UNKNOWN_EVENT_KIND, f"no fold rule for event kind {kind}")

    from .ledger import STATE_EVENT_KINDS

    if kind in STATE_EVENT_KINDS:
        state.version = event.index
    return state


def replay(events: list[LedgerEvent]) -> BasisState:
    """Deterministically rebuild the snapshot from an event log."""
    state = BasisState()
    for event in events:
        apply_event(state, event)
    return state
