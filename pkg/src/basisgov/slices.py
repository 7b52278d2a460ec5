"""Budgeted decision slices: the bounded projection shown before a commit.

A slice answers three questions about one pending action without dumping the
whole basis: which uncommitted load-bearing premises matter most, what broke,
and what to do about it. Item accounting is strict -- premises plus
discrepant evidence plus repair options plus the consequence line never
exceed the budget -- and compilation is a pure function of the snapshot, so
the same state and budget always produce the same bytes.
"""

from __future__ import annotations

from typing import Optional

from .discrepancy import route_axis
from .errors import (
    ACTION_NOT_PENDING,
    BUDGET_TOO_SMALL,
    BasisError,
    UNKNOWN_ACTION,
)
from .graph import load_bearing
from .model import (
    ActionStatus,
    Axis,
    DecisionSlice,
    DiscrepancyStatus,
    Linkage,
    PremiseStatus,
    RepairKind,
    RepairOption,
    Stakes,
)
from .policy import binary_entropy, recommend, sensitivity
from .state import BasisState

DEFAULT_MAX_ITEMS = 7
MIN_MAX_ITEMS = 4  # 1 premise + consequence + 1 option + headroom


def rank_premises(state: BasisState, premise_ids: list[str]) -> list[str]:
    """Order by sensitivity (desc), credence entropy (desc), then id."""
    keyed = []
    for pid in premise_ids:
        premise = state.premises[pid]
        keyed.append((
            0 if sensitivity(state, pid) else 1,
            -binary_entropy(premise.credence),
            pid,
        ))
    keyed.sort()
    return [k[-1] for k in keyed]


def open_discrepancies_on(state: BasisState, premise_id: str) -> list:
    found = [
        d
        for d in state.discrepancies.values()
        if d.status is DiscrepancyStatus.OPEN
        and d.linkage is Linkage.LINKED
        and state.violated_premise_of(d) == premise_id
    ]
    found.sort(key=lambda d: d.id)
    return found


def compile_slice(
    state: BasisState,
    action_id: str,
    max_items: int = DEFAULT_MAX_ITEMS,
) -> DecisionSlice:
    action = state.actions.get(action_id)
    if action is None:
        raise BasisError(UNKNOWN_ACTION, f"no action {action_id}")
    if action.status is not ActionStatus.PENDING:
        raise BasisError(ACTION_NOT_PENDING, f"action {action_id} is {action.status.value}")
    if max_items < MIN_MAX_ITEMS:
        raise BasisError(BUDGET_TOO_SMALL, f"max_items must be at least {MIN_MAX_ITEMS}, got {max_items}")

    bearing = load_bearing(state, action_id)
    uncommitted = rank_premises(
        state, [pid for pid in bearing if state.premises[pid].uncommitted]
    )
    committed = rank_premises(
        state, [pid for pid in bearing if state.premises[pid].status is PremiseStatus.COMMITTED]
    )

    dominant = uncommitted[0] if uncommitted else None
    dominant_discrepancies = open_discrepancies_on(state, dominant) if dominant else []

    options = _repair_options(state, dominant, dominant_discrepancies)
    # Slots left for premises + evidence once the consequence line and the
    # repair options are charged against the budget.
    slots = max_items - 1 - len(options)
    evidence_reserve = 1 if dominant_discrepancies else 0

    shown: list[dict] = []
    for pid in uncommitted[: max(slots - evidence_reserve, 0)]:
        shown.append(_premise_entry(state, pid, context=False))

    evidence = _discrepant_evidence(state, [e["premise_id"] for e in shown])
    evidence = evidence[: slots - len(shown)]

    # Committed premises appear only as trailing context when headroom remains.
    headroom = slots - len(shown) - len(evidence)
    for pid in committed[: max(headroom, 0)]:
        shown.append(_premise_entry(state, pid, context=True))

    return DecisionSlice(
        action_id=action_id,
        premises=shown,
        discrepant_evidence=evidence,
        consequence=_consequence(state, action_id, dominant),
        repair_options=options,
        budget={"max_items": max_items},
        compiled_at=state.version,
    )


def _premise_entry(state: BasisState, premise_id: str, context: bool) -> dict:
    premise = state.premises[premise_id]
    return {
        "premise_id": premise_id,
        "statement": premise.statement,
        "status": premise.status.value,
        "sensitive": sensitivity(state, premise_id),
        "context": context,
    }


def _discrepant_evidence(state: BasisState, premise_ids: list[str]) -> list[dict]:
    """Triggers of open discrepancies on the shown premises, most recent first."""
    entries = []
    for pid in premise_ids:
        for d in open_discrepancies_on(state, pid):
            record = state.evidence.get(d.trigger)
            if record is None:
                continue
            entries.append({
                "evidence_id": record.id,
                "discrepancy_id": d.id,
                "premise_id": pid,
                "direction": record.direction.value,
                "source": record.source.value,
            })
    entries.sort(key=lambda e: e["evidence_id"], reverse=True)
    seen = set()
    unique = []
    for e in entries:
        if e["evidence_id"] in seen:
            continue
        seen.add(e["evidence_id"])
        unique.append(e)
    return unique


def _consequence(state: BasisState, action_id: str, dominant: Optional[str]) -> dict:
    if dominant is None:
        return {
            "text": "gate passes; no uncommitted load-bearing premises",
            "dominant_premise": None,
            "if_committed": action_id,
            "if_rejected": action_id,
        }
    if_committed = recommend(state, status_overrides={dominant: PremiseStatus.COMMITTED})
    if_rejected = recommend(state, status_overrides={dominant: PremiseStatus.REJECTED})
    return {
        "text": (
            f"if {dominant} commits the recommendation is "
            f"{if_committed or 'no action'}; if it is rejected, "
            f"{if_rejected or 'no action'}"
        ),
        "dominant_premise": dominant,
        "if_committed": if_committed,
        "if_rejected": if_rejected,
    }


def _repair_options(
    state: BasisState,
    dominant: Optional[str],
    dominant_discrepancies: list,
) -> list[RepairOption]:
    if dominant is None:
        return [RepairOption(kind=RepairKind.COMMIT_CONFIRMATION, target="")]

    if dominant_discrepancies:
        lead = dominant_discrepancies[0]
        axis = lead.axis
        target = lead.violated_object or dominant
    else:
        axis = state.premises[dominant].axis
        target = dominant

    operator = route_axis(axis) if axis is not Axis.UNKNOWN else RepairKind.INVESTIGATE
    if operator is RepairKind.INVESTIGATE:
        primary = RepairOption(
            kind=RepairKind.INVESTIGATE,
            target=dominant,
            probe=_probe_payload(state, dominant),
        )
    else:
        primary = RepairOption(kind=operator, target=target)

    options = [primary]
    if state.premises[dominant].stakes is Stakes.HIGH:
        options.append(RepairOption(
            kind=RepairKind.CONSERVATIVE_ALTERNATIVE,
            target=dominant,
            risk_note_required=True,
        ))
    return options


def _probe_payload(state: BasisState, premise_id: str) -> dict:
    """Best registered probe for the premise, or a synthesized placeholder."""
    candidates = [
        p for p in state.probes.values() if p.premise_id == premise_id and not p.resulted
    ]
    if candidates:
        best = min(candidates, key=lambda p: (-p.discrimination, p.cost, p.id))
        return {
            "probe_id": best.id,
            "description": best.description,
            "discrimination": best.discrimination,
            "cost": best.cost,
        }
    return {
        "probe_id": None,
        "description": f"targeted check of {premise_id}",
        "discrimination": 0.5,
        "cost": 0.2,
    }
