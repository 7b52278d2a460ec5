"""Command layer over an event-sourced decision basis.

Every mutation follows the same shape: validate against the current snapshot,
build the event payloads, append to the ledger, fold. The snapshot is never
written directly, so live state and replay(log) agree by construction. Reads
(gate checks, slices, policy decisions) are pure; the audit events they
append do not change the snapshot.
"""

from __future__ import annotations

import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import discrepancy as disc
from . import graph, policy, slices
from .errors import (
    ALREADY_LINKED,
    ALREADY_RESOLVED,
    ACTION_NOT_PENDING,
    BasisError,
    CONSTRAINT_VIOLATION,
    CYCLE_DETECTED,
    EMPTY_RISK_NOTE,
    EMPTY_STATEMENT,
    EVIDENCE_BELOW_THRESHOLD,
    GATE_ALREADY_ALLOWED,
    ILLEGAL_TRANSITION,
    INVALID_DISCRIMINATION,
    INVALID_VALUE,
    NON_EXPERT_ACTOR,
    OPEN_DISCREPANCY,
    OVERRIDE_REQUIRED,
    PREDECESSOR_NOT_REJECTED,
    UNKNOWN_ACTION,
    UNKNOWN_ENDPOINT,
    UNKNOWN_OBJECT,
    UNKNOWN_PREMISE,
    UNLINKED_DISCREPANCY,
)
from .ledger import EventKind, Ledger, LedgerEvent, verify_chain, why as ledger_why
from .model import (
    FLOAT_EPS,
    ActionStatus,
    Axis,
    DecisionSlice,
    Discrepancy,
    DiscrepancyStatus,
    EpistemicDecision,
    EvidenceDirection,
    EvidenceRecord,
    EvidenceSource,
    FrameworkKind,
    GateResult,
    GateVerdict,
    LEGAL_TRANSITIONS,
    LinkKind,
    Linkage,
    PolicyConfig,
    PredicateKind,
    Premise,
    PremiseStatus,
    ProbeSpec,
    RepairKind,
    Stakes,
    TransitionResult,
    evidence_score,
    expectation_holds,
    validate_operands,
)
from .state import BasisState, apply_event, replay

logger = logging.getLogger(__name__)


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


class Basis:
    """One governed decision basis: typed premises, evidence, dependency
    links, pending actions, and the append-only event log behind them."""

    def __init__(
        self,
        directory: str | Path | None = None,
        policy_config: Optional[PolicyConfig] = None,
        clock: Optional[Callable[[], str]] = None,
        experts: Optional[set[str]] = None,
        session: str = "s0",
        durable: bool = True,
    ):
        self.ledger = Ledger(directory, durable=durable)
        self.state: BasisState = replay(self.ledger.events)
        self.policy_config = policy_config or PolicyConfig()
        self.clock = clock or _utc_now
        self.experts = set(experts) if experts is not None else {"expert"}
        self.session = session

    # ------------------------------------------------------------------ core

    def _append(self, kind: EventKind, payload: dict, actor: str) -> LedgerEvent:
        event = self.ledger.append(kind, payload, actor, self.session, self.clock())
        apply_event(self.state, event)
        return event

    def _require_premise(self, premise_id: str) -> Premise:
        premise = self.state.premises.get(premise_id)
        if premise is None:
            raise BasisError(UNKNOWN_PREMISE, f"no premise {premise_id}")
        return premise

    def _require_action(self, action_id: str, pending: bool = False):
        action = self.state.actions.get(action_id)
        if action is None:
            raise BasisError(UNKNOWN_ACTION, f"no action {action_id}")
        if pending and action.status is not ActionStatus.PENDING:
            raise BasisError(ACTION_NOT_PENDING, f"action {action_id} is {action.status.value}")
        return action

    def _require_expert(self, actor: str) -> None:
        if actor not in self.experts:
            raise BasisError(NON_EXPERT_ACTOR, f"actor {actor!r} lacks the expert role")

    # -------------------------------------------------------------- sessions

    def open_session(self, actor: str, session_id: Optional[str] = None) -> str:
        session_id = session_id or self.state.next_id("S")
        if session_id in self.state.sessions:
            raise BasisError(INVALID_VALUE, f"session {session_id} already opened")
        self._append(EventKind.SESSION_OPENED, {"session_id": session_id}, actor)
        self.session = session_id
        return session_id

    def close_session(self, actor: str, session_id: Optional[str] = None) -> str:
        session_id = session_id or self.session
        record = self.state.sessions.get(session_id)
        if record is None:
            raise BasisError(UNKNOWN_OBJECT, f"no session {session_id}")
        if not record.get("open"):
            raise BasisError(INVALID_VALUE, f"session {session_id} already closed")
        self._append(EventKind.SESSION_CLOSED, {"session_id": session_id}, actor)
        return session_id

    # ------------------------------------------------------------- framework

    def revise_framework(
        self,
        kind: FrameworkKind | str,
        statement: str,
        params: Optional[dict] = None,
        actor: str = "expert",
        object_id: Optional[str] = None,
    ):
        """Create a framework object (revision 1) or bump an existing one."""
        if not statement or not statement.strip():
            raise BasisError(EMPTY_STATEMENT, "framework statement must be non-empty")
        kind = FrameworkKind(kind)
        if object_id is None:
            object_id = self.state.next_id("F")
            revision = 1
        else:
            existing = self.state.frameworks.get(object_id)
            if existing is None:
                raise BasisError(UNKNOWN_OBJECT, f"no framework object {object_id}")
            revision = existing.revision + 1
        self._append(
            EventKind.FRAMEWORK_REVISED,
            {
                "object_id": object_id,
                "kind": kind.value,
                "statement": statement,
                "params": dict(params or {}),
                "revision": revision,
            },
            actor,
        )
        return self.state.frameworks[object_id]

    # -------------------------------------------------------------- premises

    def create_premise(
        self,
        axis: Axis | str,
        statement: str,
        evidence_threshold: float = 0.0,
        stakes: Stakes | str = Stakes.LOW,
        predecessor: Optional[str] = None,
        actor: str = "expert",
    ) -> Premise:
        if not statement or not statement.strip():
            raise BasisError(EMPTY_STATEMENT, "premise statement must be non-empty")
        if evidence_threshold < 0:
            raise BasisError(INVALID_VALUE, "evidence_threshold must be >= 0")
        if predecessor is not None:
            prior = self._require_premise(predecessor)
            if prior.status is not PremiseStatus.REJECTED:
                raise BasisError(
                    PREDECESSOR_NOT_REJECTED,
                    f"predecessor {predecessor} is {prior.status.value}, not rejected",
                    blocking=[predecessor],
                )
        premise_id = self.state.next_id("P")
        self._append(
            EventKind.PREMISE_CREATED,
            {
                "premise_id": premise_id,
                "axis": Axis(axis).value,
                "statement": statement,
                "credence": 0.5,
                "evidence_threshold": evidence_threshold,
                "stakes": Stakes(stakes).value,
                "created_from": predecessor,
            },
            actor,
        )
        return self.state.premises[premise_id]

    def set_credence(self, premise_id: str, credence: float, actor: str = "expert") -> Premise:
        self._require_premise(premise_id)
        if not 0.0 <= credence <= 1.0:
            raise BasisError(INVALID_VALUE, "credence must be in [0,1]")
        self._append(
            EventKind.CREDENCE_SET,
            {"premise_id": premise_id, "credence": credence},
            actor,
        )
        return self.state.premises[premise_id]

    def score_evidence(self, premise_id: str) -> float:
        premise = self._require_premise(premise_id)
        return evidence_score(self.state.evidence_for(premise.id))

    # -------------------------------------------------------------- evidence

    def attach_evidence(
        self,
        premise_id: str,
        payload: str,
        direction: EvidenceDirection | str,
        weight: float,
        source: EvidenceSource | str = EvidenceSource.EXPERT_ASSERTION,
        actor: str = "expert",
    ) -> EvidenceRecord:
        premise = self._require_premise(premise_id)
        direction = EvidenceDirection(direction)
        source = EvidenceSource(source)
        if not 0.0 <= weight <= 1.0:
            raise BasisError(INVALID_VALUE, "evidence weight must be in [0,1]")
        evidence_id = self.state.next_id("E")
        self._append(
            EventKind.EVIDENCE_ATTACHED,
            {
                "evidence_id": evidence_id,
                "payload": payload,
                "direction": direction.value,
                "weight": weight,
                "source": source.value,
                "premise_ids": [premise_id],
            },
            actor,
        )
        if direction is EvidenceDirection.REFUTES and premise.status is PremiseStatus.COMMITTED:
            # A late refuting record against a committed premise is itself a
            # mismatch with the committed basis: open a linked discrepancy and
            # demote through contested rather than letting the score rot.
            self._open_discrepancy(evidence_id, premise_id, actor)
        return self.state.evidence[evidence_id]

    # ----------------------------------------------------------- transitions

    def propose_transition(
        self, premise_id: str, target: PremiseStatus | str, actor: str = "expert"
    ) -> TransitionResult:
        premise = self._require_premise(premise_id)
        target = PremiseStatus(target)
        self._append(
            EventKind.TRANSITION_PROPOSED,
            {"premise_id": premise_id, "from": premise.status.value, "to": target.value},
            actor,
        )
        reason, blocking = self._transition_blocker(premise, target)
        if reason is not None:
            self._append(
                EventKind.TRANSITION_REJECTED,
                {
                    "premise_id": premise_id,
                    "from": premise.status.value,
                    "to": target.value,
                    "reason": reason,
                    "blocking": blocking,
                },
                actor,
            )
            return TransitionResult(
                applied=False,
                premise_id=premise_id,
                status=premise.status,
                reason=reason,
                blocking=blocking,
            )
        self._apply_transition(premise_id, premise.status, target, "proposal", actor)
        return TransitionResult(
            applied=True, premise_id=premise_id, status=target, reason=None, blocking=[]
        )

    def _transition_blocker(
        self, premise: Premise, target: PremiseStatus
    ) -> tuple[Optional[str], list[str]]:
        """First rule that rejects the transition, or (None, []) if legal."""
        if target not in LEGAL_TRANSITIONS[premise.status]:
            return ILLEGAL_TRANSITION, [premise.id]
        if premise.status is PremiseStatus.COMMITTED and target is PremiseStatus.CONTESTED:
            # Demotion needs a logged cause; bare proposals cannot un-harden.
            if not self.state.open_discrepancies_on_premise(premise.id):
                return ILLEGAL_TRANSITION, [premise.id]
        if target is PremiseStatus.COMMITTED:
            score = evidence_score(self.state.evidence_for(premise.id))
            if score + FLOAT_EPS < premise.evidence_threshold:
                return EVIDENCE_BELOW_THRESHOLD, [premise.id]
            open_ds = self.state.open_discrepancies_on_premise(premise.id)
            if open_ds:
                return OPEN_DISCREPANCY, [d.id for d in open_ds]
            violated = self._violated_constraints_over(premise.id)
            if violated:
                return CONSTRAINT_VIOLATION, violated
        return None, []

    def _violated_constraints_over(self, premise_id: str) -> list[str]:
        """Constraint framework objects upstream of the premise that currently
        carry an open linked discrepancy."""
        found = []
        for d in self.state.discrepancies.values():
            if d.status is not DiscrepancyStatus.OPEN or d.linkage is not Linkage.LINKED:
                continue
            obj = self.state.frameworks.get(d.violated_object or "")
            if obj is None or obj.kind is not FrameworkKind.CONSTRAINT:
                continue
            if premise_id in graph.descendants(self.state, obj.id):
                found.append(obj.id)
        return sorted(set(found))

    def _apply_transition(
        self,
        premise_id: str,
        current: PremiseStatus,
        target: PremiseStatus,
        cause: str,
        actor: str,
    ) -> None:
        self._append(
            EventKind.TRANSITION_APPLIED,
            {
                "premise_id": premise_id,
                "from": current.value,
                "to": target.value,
                "cause": cause,
            },
            actor,
        )

    def challenge_premise(self, premise_id: str, reason: str, actor: str) -> Premise:
        """Expert-only contest of a premise, logged even when already contested."""
        self._require_expert(actor)
        premise = self._require_premise(premise_id)
        if premise.status is PremiseStatus.REJECTED:
            raise BasisError(ILLEGAL_TRANSITION, f"premise {premise_id} is rejected (terminal)")
        self._append(
            EventKind.CHALLENGE_ISSUED,
            {"premise_id": premise_id, "reason": reason},
            actor,
        )
        if premise.status in (PremiseStatus.DRAFT, PremiseStatus.COMMITTED):
            self._apply_transition(
                premise_id, premise.status, PremiseStatus.CONTESTED, "expert-challenge", actor
            )
        return self.state.premises[premise_id]

    # --------------------------------------------------- actions and linkage

    def create_action(
        self, description: str, utility: float, consequential: bool, actor: str = "expert"
    ):
        if not description or not description.strip():
            raise BasisError(EMPTY_STATEMENT, "action description must be non-empty")
        action_id = self.state.next_id("A")
        self._append(
            EventKind.ACTION_CREATED,
            {
                "action_id": action_id,
                "description": description,
                "utility": utility,
                "consequential": bool(consequential),
            },
            actor,
        )
        return self.state.actions[action_id]

    def withdraw_action(self, action_id: str, actor: str = "expert"):
        self._require_action(action_id, pending=True)
        self._append(EventKind.ACTION_WITHDRAWN, {"action_id": action_id}, actor)
        return self.state.actions[action_id]

    def create_expectation(
        self,
        premise_id: str,
        variable: str,
        predicate: PredicateKind | str,
        operands: Sequence[float],
        actor: str = "expert",
    ):
        self._require_premise(premise_id)
        if not variable or not variable.strip():
            raise BasisError(EMPTY_STATEMENT, "expectation variable must be named")
        predicate = PredicateKind(predicate)
        validate_operands(predicate, list(operands))
        expectation_id = self.state.next_id("X")
        self._append(
            EventKind.EXPECTATION_CREATED,
            {
                "expectation_id": expectation_id,
                "premise_id": premise_id,
                "variable": variable,
                "predicate": predicate.value,
                "operands": list(operands),
            },
            actor,
        )
        return self.state.expectations[expectation_id]

    def add_link(
        self, source: str, target: str, kind: LinkKind | str = LinkKind.SUPPORTS, actor: str = "expert"
    ):
        state = self.state
        if not (source in state.premises or source in state.expectations or source in state.frameworks):
            raise BasisError(UNKNOWN_ENDPOINT, f"link source {source} is not a premise, expectation, or framework object")
        if not (target in state.premises or target in state.expectations or target in state.actions):
            raise BasisError(UNKNOWN_ENDPOINT, f"link target {target} is not a premise, expectation, or action")
        if graph.would_cycle(state, source, target):
            raise BasisError(CYCLE_DETECTED, f"linking {source} -> {target} would create a cycle", blocking=[source, target])
        link_id = state.next_id("L")
        self._append(
            EventKind.LINK_ADDED,
            {"link_id": link_id, "source": source, "target": target, "kind": LinkKind(kind).value},
            actor,
        )
        return state.links[link_id]

    # ---------------------------------------------------------------- gating

    def load_bearing(self, action_id: str) -> list[str]:
        self._require_action(action_id)
        return graph.load_bearing(self.state, action_id)

    def check_gate(self, action_id: str, intent: str = "check", actor: str = "system") -> GateResult:
        self._require_action(action_id, pending=True)
        result = graph.evaluate_gate(self.state, action_id, intent=intent)
        self._append(
            EventKind.GATE_CHECKED,
            {
                "action_id": action_id,
                "intent": intent,
                "verdict": result.verdict.value,
                "blocking": result.blocking_premises,
            },
            actor,
        )
        return result

    def commit_action(self, action_id: str, actor: str = "expert") -> GateResult:
        """Commit through the gate. Consequential actions hard-block; for
        non-consequential ones a blocked verdict is advisory only."""
        action = self._require_action(action_id, pending=True)
        result = self.check_gate(action_id, intent="commit-now", actor=actor)
        if result.allowed:
            self._append(
                EventKind.COMMIT_GRANTED,
                {"action_id": action_id, "verdict": result.verdict.value, "advisory": False},
                actor,
            )
            return result
        if action.consequential:
            raise BasisError(
                OVERRIDE_REQUIRED,
                f"gate blocks {action_id}; an expert override with a risk note is required",
                blocking=[b["premise_id"] for b in result.blocking_premises],
            )
        self._append(
            EventKind.COMMIT_GRANTED,
            {"action_id": action_id, "verdict": result.verdict.value, "advisory": True},
            actor,
        )
        return result

    def override_commit(self, action_id: str, risk_note: str, actor: str) -> GateResult:
        self._require_expert(actor)
        if not risk_note or not risk_note.strip():
            raise BasisError(EMPTY_RISK_NOTE, "override requires a non-empty risk note")
        self._require_action(action_id, pending=True)
        result = graph.evaluate_gate(self.state, action_id, intent="commit-now")
        if result.allowed:
            raise BasisError(GATE_ALREADY_ALLOWED, f"gate already allows {action_id}; override refused")
        self._append(
            EventKind.GATE_CHECKED,
            {
                "action_id": action_id,
                "intent": "commit-now",
                "verdict": result.verdict.value,
                "blocking": result.blocking_premises,
            },
            actor,
        )
        self._append(
            EventKind.OVERRIDE_GRANTED,
            {
                "action_id": action_id,
                "risk_note": risk_note,
                "blocking": result.blocking_premises,
            },
            actor,
        )
        return result

    # ---------------------------------------------------------- discrepancies

    def _open_discrepancy(self, trigger_evidence_id: str, violated_object: str, actor: str) -> Discrepancy:
        axis = disc.axis_of(self.state, violated_object)
        discrepancy_id = self.state.next_id("D")
        self._append(
            EventKind.DISCREPANCY_OPENED,
            {
                "discrepancy_id": discrepancy_id,
                "trigger": trigger_evidence_id,
                "violated_object": violated_object,
                "axis": axis.value,
                "impact": disc.impact_of(self.state, violated_object),
                "linkage": Linkage.LINKED.value,
            },
            actor,
        )
        self._contest_violated_premise(violated_object, actor)
        return self.state.discrepancies[discrepancy_id]

    def _contest_violated_premise(self, violated_object: str, actor: str) -> None:
        pid = disc.violated_premise(self.state, violated_object)
        if pid is not None and self.state.premises[pid].status is PremiseStatus.COMMITTED:
            self._apply_transition(
                pid, PremiseStatus.COMMITTED, PremiseStatus.CONTESTED, "open-discrepancy", actor
            )

    def ingest_observation(
        self,
        variable: str,
        value,
        actor: str = "world",
        note: str = "",
        weight: float = 0.5,
        anomalous: bool = False,
    ) -> list[Discrepancy]:
        """Record an observation and open discrepancies for every committed
        expectation on the variable that the value violates. Unmatched
        observations open one unlinked discrepancy only when the caller flags
        them anomalous."""
        if not 0.0 <= weight <= 1.0:
            raise BasisError(INVALID_VALUE, "evidence weight must be in [0,1]")
        failing = disc.detect_violations(self.state, variable, value)
        matched = disc.variable_declared(self.state, variable)
        # Evidence direction follows the predicates themselves; detection
        # (and thus discrepancy opening) stays scoped to committed premises.
        declaring = [e for e in self.state.expectations.values() if e.variable == variable]
        violated = sorted({
            e.premise_id
            for e in declaring
            if not expectation_holds(e.predicate, e.operands, value)
        })
        if violated:
            direction = EvidenceDirection.REFUTES
            premise_ids = violated
        else:
            direction = EvidenceDirection.SUPPORTS
            premise_ids = sorted({e.premise_id for e in declaring})
        evidence_id = self.state.next_id("E")
        self._append(
            EventKind.EVIDENCE_ATTACHED,
            {
                "evidence_id": evidence_id,
                "payload": note or f"{variable}={value}",
                "direction": direction.value,
                "weight": weight,
                "source": EvidenceSource.OBSERVATION.value,
                "premise_ids": premise_ids,
                "variable": variable,
                "value": value,
            },
            actor,
        )
        opened: list[Discrepancy] = []
        for exp in failing:
            opened.append(self._open_discrepancy(evidence_id, exp.id, actor))
        if not failing and not matched and anomalous:
            discrepancy_id = self.state.next_id("D")
            self._append(
                EventKind.DISCREPANCY_OPENED,
                {
                    "discrepancy_id": discrepancy_id,
                    "trigger": evidence_id,
                    "violated_object": None,
                    "axis": Axis.UNKNOWN.value,
                    "impact": [],
                    "linkage": Linkage.UNLINKED.value,
                },
                actor,
            )
            opened.append(self.state.discrepancies[discrepancy_id])
        return opened

    def link_discrepancy(self, discrepancy_id: str, violated_object_id: str, actor: str) -> Discrepancy:
        self._require_expert(actor)
        d = self.state.discrepancies.get(discrepancy_id)
        if d is None:
            raise BasisError(UNKNOWN_OBJECT, f"no discrepancy {discrepancy_id}")
        if d.linkage is Linkage.LINKED:
            raise BasisError(ALREADY_LINKED, f"discrepancy {discrepancy_id} is already linked")
        axis = disc.axis_of(self.state, violated_object_id)
        self._append(
            EventKind.DISCREPANCY_LINKED,
            {
                "discrepancy_id": discrepancy_id,
                "violated_object": violated_object_id,
                "axis": axis.value,
                "impact": disc.impact_of(self.state, violated_object_id),
            },
            actor,
        )
        self._contest_violated_premise(violated_object_id, actor)
        return self.state.discrepancies[discrepancy_id]

    def type_discrepancy(self, discrepancy_id: str, actor: str = "system") -> Axis:
        d = self.state.discrepancies.get(discrepancy_id)
        if d is None:
            raise BasisError(UNKNOWN_OBJECT, f"no discrepancy {discrepancy_id}")
        if d.linkage is not Linkage.LINKED or d.violated_object is None:
            raise BasisError(
                UNLINKED_DISCREPANCY,
                f"discrepancy {discrepancy_id} must be linked before typing",
            )
        axis = disc.axis_of(self.state, d.violated_object)
        self._append(
            EventKind.DISCREPANCY_TYPED,
            {"discrepancy_id": discrepancy_id, "axis": axis.value},
            actor,
        )
        return axis

    def route(self, discrepancy_id: str) -> RepairKind:
        d = self.state.discrepancies.get(discrepancy_id)
        if d is None:
            raise BasisError(UNKNOWN_OBJECT, f"no discrepancy {discrepancy_id}")
        return disc.route_axis(d.axis)

    def resolve_discrepancy(
        self, discrepancy_id: str, resolution_evidence_id: str, actor: str = "expert"
    ) -> Discrepancy:
        d = self.state.discrepancies.get(discrepancy_id)
        if d is None:
            raise BasisError(UNKNOWN_OBJECT, f"no discrepancy {discrepancy_id}")
        if d.status is DiscrepancyStatus.RESOLVED:
            raise BasisError(ALREADY_RESOLVED, f"discrepancy {discrepancy_id} is already resolved")
        if resolution_evidence_id not in self.state.evidence:
            raise BasisError(UNKNOWN_OBJECT, f"no evidence record {resolution_evidence_id}")
        self._append(
            EventKind.DISCREPANCY_RESOLVED,
            {
                "discrepancy_id": discrepancy_id,
                "resolution_evidence": resolution_evidence_id,
            },
            actor,
        )
        return self.state.discrepancies[discrepancy_id]

    # ---------------------------------------------------------------- probes

    def propose_probe(
        self,
        premise_id: str,
        description: str,
        discrimination: float,
        cost: float,
        actor: str = "assistant",
    ) -> ProbeSpec:
        self._require_premise(premise_id)
        if not 0.0 <= discrimination <= 1.0:
            raise BasisError(INVALID_DISCRIMINATION, "discrimination must be in [0,1]")
        if cost < 0:
            raise BasisError(INVALID_VALUE, "probe cost must be >= 0")
        probe_id = self.state.next_id("PR")
        self._append(
            EventKind.PROBE_PROPOSED,
            {
                "probe_id": probe_id,
                "premise_id": premise_id,
                "description": description,
                "discrimination": discrimination,
                "cost": cost,
            },
            actor,
        )
        return self.state.probes[probe_id]

    def record_probe_result(
        self, probe_id: str, passed: bool, weight: float, actor: str = "expert", note: str = ""
    ) -> EvidenceRecord:
        probe = self.state.probes.get(probe_id)
        if probe is None:
            raise BasisError(UNKNOWN_OBJECT, f"no probe {probe_id}")
        if probe.resulted:
            raise BasisError(ALREADY_RESOLVED, f"probe {probe_id} already has a result")
        if not 0.0 <= weight <= 1.0:
            raise BasisError(INVALID_VALUE, "evidence weight must be in [0,1]")
        premise = self._require_premise(probe.premise_id)
        self._append(
            EventKind.PROBE_RESULTED,
            {"probe_id": probe_id, "premise_id": probe.premise_id, "passed": bool(passed)},
            actor,
        )
        direction = EvidenceDirection.SUPPORTS if passed else EvidenceDirection.REFUTES
        evidence_id = self.state.next_id("E")
        self._append(
            EventKind.EVIDENCE_ATTACHED,
            {
                "evidence_id": evidence_id,
                "payload": note or f"probe {probe_id} {'passed' if passed else 'failed'}",
                "direction": direction.value,
                "weight": weight,
                "source": EvidenceSource.PROBE_RESULT.value,
                "premise_ids": [probe.premise_id],
            },
            actor,
        )
        if direction is EvidenceDirection.REFUTES and premise.status is PremiseStatus.COMMITTED:
            self._open_discrepancy(evidence_id, premise.id, actor)
        return self.state.evidence[evidence_id]

    # ------------------------------------------------------ slices and policy

    def compile_slice(self, action_id: str, max_items: int = slices.DEFAULT_MAX_ITEMS, actor: str = "system") -> DecisionSlice:
        decision_slice = slices.compile_slice(self.state, action_id, max_items)
        self._append(
            EventKind.SLICE_COMPILED,
            {"action_id": action_id, "slice": decision_slice.to_dict()},
            actor,
        )
        return decision_slice

    def decide(self, action_id: str, config: Optional[PolicyConfig] = None, actor: str = "system") -> EpistemicDecision:
        self._require_action(action_id, pending=True)
        config = config or self.policy_config
        probes = sorted(
            (p for p in self.state.probes.values() if not p.resulted), key=lambda p: p.id
        )
        decision = policy.decide(self.state, action_id, probes, config)
        self._append(
            EventKind.POLICY_DECIDED,
            {"action_id": action_id, "decision": decision.to_dict()},
            actor,
        )
        return decision

    def recommend(self, candidates: Optional[Sequence[str]] = None) -> Optional[str]:
        return policy.recommend(self.state, candidates)

    def sensitivity(self, premise_id: str, candidates: Optional[Sequence[str]] = None) -> bool:
        return policy.sensitivity(self.state, premise_id, candidates)

    def probe_value(self, probe_id: str, config: Optional[PolicyConfig] = None) -> float:
        probe = self.state.probes.get(probe_id)
        if probe is None:
            raise BasisError(UNKNOWN_OBJECT, f"no probe {probe_id}")
        return policy.probe_value(self.state, probe, None, config or self.policy_config)

    # ------------------------------------------------------------- provenance

    def verify(self) -> dict:
        return verify_chain(self.ledger.events)

    def replay_matches_live(self) -> bool:
        return replay(self.ledger.events).canonical() == self.state.canonical()

    def why(self, object_id: str) -> list[LedgerEvent]:
        if not self.state.has_object(object_id):
            raise BasisError(UNKNOWN_OBJECT, f"no object {object_id}")
        return ledger_why(self.ledger.events, {object_id})

    def events_since(self, index: int) -> list[LedgerEvent]:
        return self.ledger.since(index)

    def close(self) -> None:
        self.ledger.close()
