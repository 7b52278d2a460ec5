"""Stable error codes shared by the engine, the HTTP API, and the CLI.

Every refusal the engine can produce carries one of these codes. The set is
closed: the gateway republishes it verbatim, and the API test suite enumerates
it, so adding a code here is an interface change.
"""

from __future__ import annotations

EMPTY_STATEMENT = "empty-statement"
PREDECESSOR_NOT_REJECTED = "predecessor-not-rejected"
UNKNOWN_PREMISE = "unknown-premise"
UNKNOWN_ACTION = "unknown-action"
UNKNOWN_OBJECT = "unknown-object"
UNKNOWN_ENDPOINT = "unknown-endpoint"
ILLEGAL_TRANSITION = "illegal-transition"
EVIDENCE_BELOW_THRESHOLD = "evidence-below-threshold"
OPEN_DISCREPANCY = "open-discrepancy"
CONSTRAINT_VIOLATION = "constraint-violation"
CYCLE_DETECTED = "cycle-detected"
ACTION_NOT_PENDING = "action-not-pending"
EMPTY_RISK_NOTE = "empty-risk-note"
NON_EXPERT_ACTOR = "non-expert-actor"
GATE_ALREADY_ALLOWED = "gate-already-allowed"
OVERRIDE_REQUIRED = "override-required"
UNLINKED_DISCREPANCY = "unlinked-discrepancy"
UNTYPED_DISCREPANCY = "untyped-discrepancy"
ALREADY_LINKED = "already-linked"
ALREADY_RESOLVED = "already-resolved"
BUDGET_TOO_SMALL = "budget-too-small"
INVALID_DISCRIMINATION = "invalid-discrimination"
INVALID_POLICY = "invalid-policy"
INVALID_VALUE = "invalid-value"
CHAIN_BROKEN = "chain-broken"
UNKNOWN_EVENT_KIND = "unknown-event-kind"
STORAGE_FAILURE = "storage-failure"
BAD_CONFIG = "bad-config"

ERROR_CODES: frozenset[str] = frozenset(
    {
        EMPTY_STATEMENT,
        PREDECESSOR_NOT_REJECTED,
        UNKNOWN_PREMISE,
        UNKNOWN_ACTION,
        UNKNOWN_OBJECT,
        UNKNOWN_ENDPOINT,
        ILLEGAL_TRANSITION,
        EVIDENCE_BELOW_THRESHOLD,
        OPEN_DISCREPANCY,
        CONSTRAINT_VIOLATION,
        CYCLE_DETECTED,
        ACTION_NOT_PENDING,
        EMPTY_RISK_NOTE,
        NON_EXPERT_ACTOR,
        GATE_ALREADY_ALLOWED,
        OVERRIDE_REQUIRED,
        UNLINKED_DISCREPANCY,
        UNTYPED_DISCREPANCY,
        ALREADY_LINKED,
        ALREADY_RESOLVED,
        BUDGET_TOO_SMALL,
        INVALID_DISCRIMINATION,
        INVALID_POLICY,
        INVALID_VALUE,
        CHAIN_BROKEN,
        UNKNOWN_EVENT_KIND,
        STORAGE_FAILURE,
        BAD_CONFIG,
    }
)


class BasisError(Exception):
    """An engine refusal with a stable machine-readable code.

    ``blocking`` names the objects that caused the refusal (premise ids,
    discrepancy ids, constraint ids, ...), so callers can anchor any
    follow-up challenge to a concrete object instead of a free-form message.
    """

    def __init__(self, code: str, message: str, blocking: list | None = None):
        if code not in ERROR_CODES:
            raise ValueError(f"unpublished error code: {code}")
        super().__init__(message)
        self.code = code
        self.message = message
        self.blocking = list(blocking or [])

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.blocking:
            out["blocking_objects"] = self.blocking
        return out
