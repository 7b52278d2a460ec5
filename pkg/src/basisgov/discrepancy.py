"""Discrepancy detection, typing, and repair routing.

A discrepancy records a mismatch between what the committed basis implies
and an incoming observation or assertion. Detection is driven by declared
expectations: an observation on a variable is checked against every
expectation on that variable whose grounding premise is committed
(expectations of draft or contested premises are dormant).

Typing is derived from the violated object, never from text:
framework goal/constraint/priority -> teleological; premise or expectation
-> the premise's own axis (an evidence-standard premise types procedural).
The repair operator follows the axis exactly: reframe / investigate /
negotiate.
"""

from __future__ import annotations

from typing import Optional

from .errors import BasisError, UNKNOWN_OBJECT, UNTYPED_DISCREPANCY
from .graph import descendants
from .model import (
    ActionStatus,
    Axis,
    Expectation,
    PremiseStatus,
    RepairKind,
    expectation_holds,
)
from .state import BasisState

#: Exhaustive axis -> repair operator routing table.
ROUTING: dict[Axis, RepairKind] = {
    Axis.TELEOLOGICAL: RepairKind.REFRAME,
    Axis.EPISTEMIC: RepairKind.INVESTIGATE,
    Axis.PROCEDURAL: RepairKind.NEGOTIATE,
}


def detect_violations(state: BasisState, variable: str, value) -> list[Expectation]:
    """Expectations on this variable, grounded in a committed premise, whose
    predicate fails for the observed value. Deterministic order by id."""
    failing = []
    for exp in state.expectations.values():
        if exp.variable != variable:
            continue
        premise = state.premises.get(exp.premise_id)
        if premise is None or premise.status is not PremiseStatus.COMMITTED:
            continue
        if not expectation_holds(exp.predicate, exp.operands, value):
            failing.append(exp)
    failing.sort(key=lambda e: e.id)
    return failing


def variable_declared(state: BasisState, variable: str) -> bool:
    """Whether any expectation (dormant or live) declares this variable."""
    return any(exp.variable == variable for exp in state.expectations.values())


def axis_of(state: BasisState, object_id: str) -> Axis:
    """Alignment axis of a violated object, derived from its type."""
    if object_id in state.frameworks:
        return state.frameworks[object_id].axis
    if object_id in state.premises:
        return state.premises[object_id].axis
    if object_id in state.expectations:
        premise_id = state.expectations[object_id].premise_id
        return state.premises[premise_id].axis
    raise BasisError(UNKNOWN_OBJECT, f"no framework object, premise, or expectation {object_id}")


def impact_of(state: BasisState, object_id: str) -> list[str]:
    """Pending actions downstream of the violated object.

    An expectation has no outgoing links of its own in most bases, so its
    grounding premise anchors the traversal as well.
    """
    reach = set(descendants(state, object_id))
    if object_id in state.expectations:
        reach |= descendants(state, state.expectations[object_id].premise_id)
    impacted = [
        aid
        for aid in reach
        if aid in state.actions and state.actions[aid].status is ActionStatus.PENDING
    ]
    impacted.sort()
    return impacted


def route_axis(axis: Axis) -> RepairKind:
    """teleological -> reframe, epistemic -> investigate, procedural -> negotiate."""
    if axis is Axis.UNKNOWN:
        raise BasisError(UNTYPED_DISCREPANCY, "discrepancy must be linked and typed before routing")
    return ROUTING[axis]


def violated_premise(state: BasisState, violated_object: Optional[str]) -> Optional[str]:
    """Premise a violation bears on, if the violated object is or grounds one."""
    if violated_object is None:
        return None
    if violated_object in state.premises:
        return violated_object
    if violated_object in state.expectations:
        return state.expectations[violated_object].premise_id
    return None
