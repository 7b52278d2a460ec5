"""Dependency graph: reachability, load-bearing premises, and the commit gate.

Links point from a justifying object (premise, expectation, or framework
object) toward what it supports (premise, expectation, or pending action).
A premise is load-bearing for an action when it lies on any directed path
into that action. The gate allows commitment only when every load-bearing
premise is committed.

Everything here is a pure function over a snapshot; the engine records
GateChecked events around :func:`evaluate_gate` when a check is an auditable
act rather than an internal evaluation.
"""

from __future__ import annotations

from collections import deque
from typing import Optional

from .model import ActionStatus, GateResult, GateVerdict, PremiseStatus
from .state import BasisState


def incoming(state: BasisState) -> dict[str, list[str]]:
    edges: dict[str, list[str]] = {}
    for link in state.links.values():
        edges.setdefault(link.target, []).append(link.source)
    return edges


def outgoing(state: BasisState) -> dict[str, list[str]]:
    edges: dict[str, list[str]] = {}
    for link in state.links.values():
        edges.setdefault(link.source, []).append(link.target)
    return edges


def would_cycle(state: BasisState, source: str, target: str) -> bool:
    """True if adding source->target creates a directed cycle."""
    if source == target:
        return True
    # A cycle appears iff source is already reachable from target.
    out = outgoing(state)
    seen = {target}
    stack = [target]
    while stack:
        node = stack.pop()
        if node == source:
            return True
        for nxt in out.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def ancestors_with_distance(state: BasisState, node_id: str) -> dict[str, int]:
    """All objects with a directed path into node_id, with shortest hop count.

    Memoized per snapshot; the cache is cleared whenever a link is added.
    """
    cached = state.reach_cache.get(node_id)
    if cached is not None:
        return cached
    inc = incoming(state)
    dist: dict[str, int] = {}
    queue = deque([(node_id, 0)])
    while queue:
        node, d = queue.popleft()
        for src in inc.get(node, ()):
            if src not in dist:
                dist[src] = d + 1
                queue.append((src, d + 1))
    state.reach_cache[node_id] = dist
    return dist


def descendants(state: BasisState, node_id: str) -> set[str]:
    out = outgoing(state)
    seen: set[str] = set()
    stack = [node_id]
    while stack:
        node = stack.pop()
        for nxt in out.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def load_bearing(state: BasisState, action_id: str) -> list[str]:
    """Premises on any dependency path into the action.

    Deterministic order: shortest path length first, then id. Uncommitted
    load-bearing premises are the gate's blocking set; committed ancestors
    are still returned so slices can show them as context.
    """
    dist = ancestors_with_distance(state, action_id)
    premise_dist = [(d, node) for node, d in dist.items() if node in state.premises]
    premise_dist.sort()
    return [node for _, node in premise_dist]


def evaluate_gate(
    state: BasisState,
    action_id: str,
    intent: str = "check",
    status_overrides: Optional[dict[str, PremiseStatus]] = None,
) -> GateResult:
    """Apply the commitment-gating rule to one pending action.

    allowed iff every load-bearing premise is committed. With
    ``intent="commit-now"`` on a consequential action, a blocked verdict is
    reported as override-required instead, to tell the caller an explicit
    expert override (under logged risk) is the only way forward.

    ``status_overrides`` force premise statuses for counterfactual evaluation
    (sensitivity, flip consequences) without touching the snapshot.
    """
    overrides = status_overrides or {}
    blocking = []
    for pid in load_bearing(state, action_id):
        status = overrides.get(pid, state.premises[pid].status)
        if status is not PremiseStatus.COMMITTED:
            blocking.append({"premise_id": pid, "status": status.value})
    if not blocking:
        verdict = GateVerdict.ALLOWED
    elif intent == "commit-now" and state.actions[action_id].consequential:
        verdict = GateVerdict.OVERRIDE_REQUIRED
    else:
        verdict = GateVerdict.BLOCKED
    return GateResult(verdict=verdict, blocking_premises=blocking, checked_at=state.version)


def pending_actions(state: BasisState) -> list[str]:
    return [a.id for a in state.actions.values() if a.status is ActionStatus.PENDING]
