"""Append-only, hash-chained provenance ledger.

Every state mutation in the engine is an event here; the basis snapshot is
nothing but a fold over this log, so "why did we decide X?" is always
answerable and silent edits are impossible. Hashing uses a canonical JSON
form: UTF-8, lexicographically sorted keys, no insignificant whitespace,
binary fields as lowercase hex.

On-disk layout (one directory per basis):
    events.jsonl   one event per line, append-only
    head           hex of the last event hash, rewritten atomically
    snapshot.json  optional state cache keyed by event index
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional

from .errors import BasisError, CHAIN_BROKEN, STORAGE_FAILURE, UNKNOWN_EVENT_KIND

logger = logging.getLogger(__name__)

GENESIS_HASH = "0" * 64


class EventKind(str, Enum):
    PREMISE_CREATED = "PremiseCreated"
    CREDENCE_SET = "CredenceSet"
    EVIDENCE_ATTACHED = "EvidenceAttached"
    TRANSITION_PROPOSED = "TransitionProposed"
    TRANSITION_APPLIED = "TransitionApplied"
    TRANSITION_REJECTED = "TransitionRejected"
    ACTION_CREATED = "ActionCreated"
    ACTION_WITHDRAWN = "ActionWithdrawn"
    EXPECTATION_CREATED = "ExpectationCreated"
    LINK_ADDED = "LinkAdded"
    DISCREPANCY_OPENED = "DiscrepancyOpened"
    DISCREPANCY_LINKED = "DiscrepancyLinked"
    DISCREPANCY_TYPED = "DiscrepancyTyped"
    DISCREPANCY_RESOLVED = "DiscrepancyResolved"
    SLICE_COMPILED = "SliceCompiled"
    CHALLENGE_ISSUED = "ChallengeIssued"
    PROBE_PROPOSED = "ProbeProposed"
    PROBE_RESULTED = "ProbeResulted"
    GATE_CHECKED = "GateChecked"
    COMMIT_GRANTED = "CommitGranted"
    OVERRIDE_GRANTED = "OverrideGranted"
    POLICY_DECIDED = "PolicyDecided"
    FRAMEWORK_REVISED = "FrameworkRevised"
    SESSION_OPENED = "SessionOpened"
    SESSION_CLOSED = "SessionClosed"


#: Kinds that change the domain snapshot. The others (checks, slices, policy
#: decisions, rejected proposals) are pure audit records: replay skips them
#: and the state version does not advance past them.
STATE_EVENT_KINDS = {
    EventKind.PREMISE_CREATED,
    EventKind.CREDENCE_SET,
    EventKind.EVIDENCE_ATTACHED,
    EventKind.TRANSITION_APPLIED,
    EventKind.ACTION_CREATED,
    EventKind.ACTION_WITHDRAWN,
    EventKind.EXPECTATION_CREATED,
    EventKind.LINK_ADDED,
    EventKind.DISCREPANCY_OPENED,
    EventKind.DISCREPANCY_LINKED,
    EventKind.DISCREPANCY_TYPED,
    EventKind.DISCREPANCY_RESOLVED,
    EventKind.PROBE_PROPOSED,
    EventKind.PROBE_RESULTED,
    EventKind.COMMIT_GRANTED,
    EventKind.OVERRIDE_GRANTED,
    EventKind.FRAMEWORK_REVISED,
    EventKind.SESSION_OPENED,
    EventKind.SESSION_CLOSED,
}


def canonical_json(value) -> str:
    """Canonical serialization used for hashing and byte-stable comparisons."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class LedgerEvent:
    index: int
    kind: EventKind
    payload: dict
    actor: str
    session: str
    timestamp: str
    prev_hash: str
    hash: str = ""

    def preimage(self) -> str:
        return canonical_json(
            {
                "index": self.index,
                "kind": self.kind.value,
                "payload": self.payload,
                "actor": self.actor,
                "session": self.session,
                "timestamp": self.timestamp,
                "prev_hash": self.prev_hash,
            }
        )

    def seal(self) -> "LedgerEvent":
        self.hash = sha256_hex(self.preimage())
        return self

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind.value,
            "payload": self.payload,
            "actor": self.actor,
            "session": self.session,
            "timestamp": self.timestamp,
            "prev_hash": self.prev_hash,
            "hash": self.hash,
        }

    def to_line(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, raw: dict) -> "LedgerEvent":
        try:
            kind = EventKind(raw["kind"])
        except ValueError:
            raise BasisError(UNKNOWN_EVENT_KIND, f"unknown event kind: {raw.get('kind')}")
        return cls(
            index=raw["index"],
            kind=kind,
            payload=raw["payload"],
            actor=raw["actor"],
            session=raw["session"],
            timestamp=raw["timestamp"],
            prev_hash=raw["prev_hash"],
            hash=raw["hash"],
        )


def verify_chain(events: Iterable[LedgerEvent]) -> dict:
    """Recompute every hash and check linkage; report the first mismatch."""
    prev = GENESIS_HASH
    for i, ev in enumerate(events):
        if ev.index != i or ev.prev_hash != prev or sha256_hex(ev.preimage()) != ev.hash:
            return {"valid": False, "broken_at": i}
        prev = ev.hash
    return {"valid": True, "broken_at": None}


class Ledger:
    """Single-writer event log, optionally persisted to a basis directory.

    Appends are acknowledged only after the event line is flushed (and
    fsynced when ``durable``). The ``head`` file stores the last hash so a
    truncated log is detectable even though the chain itself stays valid
    under truncation.
    """

    def __init__(self, directory: str | Path | None = None, durable: bool = True):
        self.directory = Path(directory) if directory else None
        self.durable = durable
        self.events: list[LedgerEvent] = []
        self.head = GENESIS_HASH
        self._fh = None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            self._load()
            self._fh = open(self.events_path, "a", encoding="utf-8")

    # -- paths -------------------------------------------------------------

    @property
    def events_path(self) -> Path:
        return self.directory / "events.jsonl"

    @property
    def head_path(self) -> Path:
        return self.directory / "head"

    @property
    def snapshot_path(self) -> Path:
        return self.directory / "snapshot.json"

    # -- recovery ----------------------------------------------------------

    def _load(self) -> None:
        if not self.events_path.exists():
            self.events_path.touch()
            self._write_head(GENESIS_HASH)
            return
        raw = self.events_path.read_bytes().decode("utf-8")
        lines = raw.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        events = []
        for n, line in enumerate(lines):
            try:
                events.append(LedgerEvent.from_dict(json.loads(line)))
            except json.JSONDecodeError:
                # A torn final write was never acknowledged; drop it.
                if n == len(lines) - 1:
                    logger.warning("dropping torn trailing line in %s", self.events_path)
                    self._rewrite(events)
                    break
                raise BasisError(STORAGE_FAILURE, f"corrupt event line {n} in {self.events_path}")
        check = verify_chain(events)
        if not check["valid"]:
            raise BasisError(CHAIN_BROKEN, f"chain broken at index {check['broken_at']}")
        self.events = events
        self.head = events[-1].hash if events else GENESIS_HASH
        if self.head_path.exists():
            stored = self.head_path.read_text(encoding="utf-8").strip()
            if stored != self.head:
                known = {e.hash for e in self.events} | {GENESIS_HASH}
                if stored in known:
                    # Crash between event write and head rewrite: repair head.
                    logger.warning("repairing stale head in %s", self.directory)
                    self._write_head(self.head)
                else:
                    raise BasisError(
                        STORAGE_FAILURE,
                        f"head {stored[:12]}... not found in log: events.jsonl was truncated",
                    )
        else:
            self._write_head(self.head)

    def _rewrite(self, events: list[LedgerEvent]) -> None:
        tmp = self.events_path.with_suffix(".jsonl.tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            for ev in events:
                fh.write(ev.to_line() + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.events_path)

    def _write_head(self, value: str) -> None:
        tmp = self.head_path.with_suffix(".tmp")
        tmp.write_text(value + "\n", encoding="utf-8")
        os.replace(tmp, self.head_path)

    # -- append ------------------------------------------------------------

    def append(self, kind: EventKind, payload: dict, actor: str, session: str, timestamp: str) -> LedgerEvent:
        event = LedgerEvent(
            index=len(self.events),
            kind=kind,
            payload=payload,
            actor=actor,
            session=session,
            timestamp=timestamp,
            prev_hash=self.head,
        ).seal()
        if self._fh is not None:
            try:
                self._fh.write(event.to_line() + "\n")
                self._fh.flush()
                if self.durable:
                    os.fsync(self._fh.fileno())
            except OSError as exc:
                raise BasisError(STORAGE_FAILURE, f"append failed: {exc}")
        self.events.append(event)
        self.head = event.hash
        if self._fh is not None:
            self._write_head(self.head)
        return event

    def verify(self) -> dict:
        return verify_chain(self.events)

    def since(self, index: int) -> list[LedgerEvent]:
        """Events with index strictly greater than ``index``."""
        return self.events[index + 1 :]

    def __len__(self) -> int:
        return len(self.events)

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    # -- snapshot cache ----------------------------------------------------

    def write_snapshot(self, state_dict: dict, version: int) -> None:
        if self.directory is None:
            return
        tmp = self.snapshot_path.with_suffix(".json.tmp")
        tmp.write_text(canonical_json({"version": version, "state": state_dict}), encoding="utf-8")
        os.replace(tmp, self.snapshot_path)

    def read_snapshot(self) -> Optional[dict]:
        if self.directory is None or not self.snapshot_path.exists():
            return None
        return json.loads(self.snapshot_path.read_text(encoding="utf-8"))


def why(events: list[LedgerEvent], object_ids: set[str]) -> list[LedgerEvent]:
    """Ordered sub-log of events touching any of the given object ids.

    An event touches an object when the id appears anywhere in its payload,
    so transition history, evidence attachment, gate checks, and overrides
    all show up without each event kind needing bespoke indexing.
    """

    def mentions(value) -> bool:
        if isinstance(value, str):
            return value in object_ids
        if isinstance(value, dict):
            return any(mentions(v) for v in value.values())
        if isinstance(value, list):
            return any(mentions(v) for v in value)
        return False

    return [ev for ev in events if mentions(ev.payload)]
