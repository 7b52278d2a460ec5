"""Value-gated epistemic control: probe, defer, escalate, or commit.

The policy treats challenge itself as a decision under interaction cost.
A probe is worth running when the uncertainty it can resolve is both
decision-relevant (targets a premise that is load-bearing for some pending
candidate) and decision-sensitive (flipping that premise changes the
recommended action), and its expected information gain beats its weighted
cost:

    value = relevant * sensitive * H(credence) * discrimination - cost_weight * cost

with H the binary entropy in bits. All counterfactual evaluation is pure:
statuses are forced through overrides, never written to the snapshot, and no
events are emitted by hypothetical runs.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .errors import BasisError, INVALID_DISCRIMINATION, UNKNOWN_PREMISE
from .graph import evaluate_gate, load_bearing, pending_actions
from .model import (
    EpistemicAction,
    EpistemicDecision,
    GateVerdict,
    PolicyConfig,
    PremiseStatus,
    ProbeSpec,
    Stakes,
)
from .state import BasisState


def binary_entropy(p: float) -> float:
    """Entropy of a Bernoulli(p) in bits; 0 at the endpoints."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def recommend(
    state: BasisState,
    candidates: Optional[Sequence[str]] = None,
    status_overrides: Optional[dict[str, PremiseStatus]] = None,
) -> Optional[str]:
    """Highest-utility pending candidate whose gate verdict is allowed.

    Returns None when every candidate is blocked. Ties break toward the
    smaller id so the recommendation is deterministic.
    """
    ids = list(candidates) if candidates is not None else pending_actions(state)
    best: Optional[str] = None
    for aid in ids:
        action = state.actions.get(aid)
        if action is None or action.status.value != "pending":
            continue
        verdict = evaluate_gate(state, aid, status_overrides=status_overrides).verdict
        if verdict is not GateVerdict.ALLOWED:
            continue
        if best is None:
            best = aid
            continue
        incumbent = state.actions[best]
        # Ids are zero-padded, so the lexicographic tie-break is numeric.
        if action.utility > incumbent.utility or (action.utility == incumbent.utility and aid < best):
            best = aid
    return best


def sensitivity(state: BasisState, premise_id: str, candidates: Optional[Sequence[str]] = None) -> bool:
    """Would flipping this premise change the recommended action?

    Compares recommend() under the counterfactuals premise:=committed and
    premise:=rejected. The flips are hypotheticals: no evidence thresholds
    are checked and the snapshot is untouched.
    """
    if premise_id not in state.premises:
        raise BasisError(UNKNOWN_PREMISE, f"no premise {premise_id}")
    as_committed = recommend(state, candidates, {premise_id: PremiseStatus.COMMITTED})
    as_rejected = recommend(state, candidates, {premise_id: PremiseStatus.REJECTED})
    return as_committed != as_rejected


def probe_value(
    state: BasisState,
    probe: ProbeSpec,
    candidates: Optional[Sequence[str]] = None,
    config: Optional[PolicyConfig] = None,
) -> float:
    """Value of information of running the probe against its premise."""
    config = config or PolicyConfig()
    if not 0.0 <= probe.discrimination <= 1.0:
        raise BasisError(INVALID_DISCRIMINATION, f"discrimination must be in [0,1], got {probe.discrimination}")
    premise = state.premises.get(probe.premise_id)
    if premise is None:
        raise BasisError(UNKNOWN_PREMISE, f"no premise {probe.premise_id}")
    ids = list(candidates) if candidates is not None else pending_actions(state)
    relevant = any(probe.premise_id in load_bearing(state, aid) for aid in ids)
    gain = 0.0
    if relevant and sensitivity(state, probe.premise_id, ids):
        gain = binary_entropy(premise.credence) * probe.discrimination
    return gain - config.cost_weight * probe.cost


def decide(
    state: BasisState,
    action_id: str,
    probes: Sequence[ProbeSpec],
    config: PolicyConfig,
) -> EpistemicDecision:
    """Select the epistemic action for one pending commitment.

    Precedence:
      1. escalate - an open discrepancy sits on a high-stakes load-bearing
         premise; that needs expert adjudication, not automation.
      2. commit - the gate already allows.
      3. repair priority - when contested load-bearing premises reach the
         configured count, probe the best probe if it clears the value
         threshold within budget, else escalate.
      4. probe - best probe clears the value threshold within budget.
      5. defer - value of information is low under the current budget.
    """
    bearing = load_bearing(state, action_id)
    candidates = pending_actions(state)

    # 1. High-stakes open discrepancy on a load-bearing premise.
    for d in sorted(state.discrepancies.values(), key=lambda d: d.id):
        if d.status.value != "open":
            continue
        pid = state.violated_premise_of(d)
        if pid in bearing and state.premises[pid].stakes is Stakes.HIGH:
            return EpistemicDecision(
                action=EpistemicAction.ESCALATE,
                justification={
                    "kind": "high-stakes-discrepancy",
                    "discrepancy_ids": [d.id],
                    "premise_ids": [pid],
                },
            )

    # 2. Gate already passes.
    gate = evaluate_gate(state, action_id)
    if gate.verdict is GateVerdict.ALLOWED:
        return EpistemicDecision(
            action=EpistemicAction.COMMIT,
            justification={"kind": "gate-allowed", "action_id": action_id},
        )

    # Score available probes once; shared by rules 3 and 4.
    scores: dict[str, float] = {}
    for probe in probes:
        if probe.resulted:
            continue
        scores[probe.id] = probe_value(state, probe, candidates, config)
    best_id = None
    if scores:
        best_id = min(scores, key=lambda k: (-scores[k], k))
    best_ok = (
        best_id is not None
        and scores[best_id] > config.probe_threshold
        and state.probes.get(best_id, _probe_by_id(probes, best_id)).cost <= config.interaction_budget
    )

    contested = [
        pid for pid in bearing if state.premises[pid].status is PremiseStatus.CONTESTED
    ]

    # 3. Repair priority: too many contested load-bearing premises.
    if len(contested) >= config.contested_gate_count:
        if best_ok:
            return EpistemicDecision(
                action=EpistemicAction.PROBE,
                justification={
                    "kind": "repair-priority",
                    "premise_ids": [_probe_by_id(probes, best_id).premise_id],
                    "contested": contested,
                    "voi": scores,
                },
                chosen_probe=best_id,
            )
        return EpistemicDecision(
            action=EpistemicAction.ESCALATE,
            justification={"kind": "contested-above-gate", "premise_ids": contested, "voi": scores},
        )

    # 4. A probe is worth its cost.
    if best_ok:
        return EpistemicDecision(
            action=EpistemicAction.PROBE,
            justification={
                "kind": "informative-probe",
                "premise_ids": [_probe_by_id(probes, best_id).premise_id],
                "voi": scores,
            },
            chosen_probe=best_id,
        )

    # 5. Nothing worth probing.
    return EpistemicDecision(
        action=EpistemicAction.DEFER,
        justification={
            "kind": "low-voi",
            "note": "VOI is low under current budget",
            "blocking": [b["premise_id"] for b in gate.blocking_premises],
            "voi": scores,
        },
    )


def _probe_by_id(probes: Sequence[ProbeSpec], probe_id: str) -> ProbeSpec:
    for p in probes:
        if p.id == probe_id:
            return p
    raise KeyError(probe_id)
