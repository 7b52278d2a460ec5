"""Frozen end-to-end trace of the tutoring walkthrough.

A learner clears the drill bar (target 0.8, observed 0.85), but the premise
that drill mastery transfers to novel problems fails its probe. The engine
must contest that premise, block the advance, surface a teach-back repair
option with a flip consequence, and allow the advance only after a passing
teach-back result resolves the conflict. The resulting event log is pinned
byte-for-byte (the injected clock makes timestamps deterministic), so any
drift in event shapes, ids, hashing, or ordering fails here before it
reaches an external consumer.

Regenerate after an intentional interface change with:

    python3 tests/test_golden_trace.py --regenerate
"""

import json
import sys
from pathlib import Path

from basisgov.gateway.config import GatewayConfig
from basisgov.gateway.service import GatewayService

GOLDEN_PATH = Path(__file__).parent / "data" / "golden_trace.jsonl"


def ticking_clock(start_minute: int = 0):
    """Deterministic one-second ticks; wall time never enters the trace."""
    counter = {"n": 0}

    def clock() -> str:
        n = counter["n"]
        counter["n"] += 1
        return f"2026-01-05T12:{start_minute + n // 60:02d}:{n % 60:02d}+00:00"

    return clock


def run_scenario(directory: str) -> GatewayService:
    """Drive the tutoring walkthrough through the public facade, asserting
    the behavioral checkpoints along the way."""
    svc = GatewayService(
        config=GatewayConfig(basis_dir=directory), durable=False, clock=ticking_clock())

    svc.open_session("expert")
    drills = svc.create_premise(
        "epistemic", "the learner has mastered the drill set",
        evidence_threshold=0.5)["premise"]["id"]
    transfer = svc.create_premise(
        "epistemic", "a passing drill score implies transfer to novel problems",
        evidence_threshold=0.5)["premise"]["id"]
    svc.attach_evidence(drills, "drill block completed without hints", "supports", 0.6)
    svc.attach_evidence(transfer, "tutor expects the usual carryover", "supports", 0.6)
    svc.create_expectation(drills, "drill_score", "at-least", [0.8])

    advance = svc.create_action("advance the learner to the next unit", 0.9, True)["action"]["id"]
    review = svc.create_action("review with mixed practice first", 0.3, True)["action"]["id"]
    svc.add_link(drills, advance)
    svc.add_link(transfer, advance)
    svc.propose_transition(drills, "committed")
    svc.propose_transition(transfer, "committed")

    # The drill bar clears, so that premise stays settled.
    out = svc.ingest_observation("drill_score", 0.85)
    assert out["discrepancies"] == []

    # The transfer check does not.
    probe1 = svc.propose_probe(transfer, "attempt one novel transfer problem", 0.9, 0.2)["probe"]["id"]
    svc.record_probe_result(probe1, False, 1.0)
    ds = svc.list_discrepancies()["discrepancies"]
    assert [d["id"] for d in ds] == ["D0001"]
    assert ds[0]["violated_object"] == transfer

    gate = svc.check_gate(advance)["gate"]
    assert gate["verdict"] == "blocked"
    assert [b["premise_id"] for b in gate["blocking_premises"]] == [transfer]

    probe2 = svc.propose_probe(transfer, "teach-back check", 0.85, 0.2)["probe"]["id"]
    sl = svc.compile_slice(advance)["slice"]
    assert any(p["premise_id"] == transfer for p in sl["premises"])
    assert [o["kind"] for o in sl["repair_options"]] == ["investigate"]
    assert sl["repair_options"][0]["probe"]["probe_id"] == probe2
    assert sl["repair_options"][0]["probe"]["description"] == "teach-back check"
    assert sl["consequence"]["dominant_premise"] == transfer
    assert sl["consequence"]["if_committed"] == advance
    assert sl["consequence"]["if_rejected"] == review

    evidence = svc.record_probe_result(probe2, True, 1.0)["evidence"]["id"]
    svc.resolve_discrepancy("D0001", evidence)
    assert svc.propose_transition(transfer, "committed")["transition"]["applied"] is True

    commit = svc.commit_action(advance)
    assert commit["gate"]["verdict"] == "allowed"
    assert commit["action"]["status"] == "committed"
    svc.close_session("expert")
    return svc


def normalized_lines(raw: bytes) -> list[dict]:
    """Event lines with timestamps (and the hashes derived from them) blanked."""
    rows = []
    for line in raw.decode("utf-8").splitlines():
        row = json.loads(line)
        row["timestamp"] = "T"
        row["hash"] = row["prev_hash"] = "H"
        rows.append(row)
    return rows


def test_trace_matches_the_frozen_log(tmp_path):
    svc = run_scenario(str(tmp_path))
    svc.close()
    produced = (tmp_path / "events.jsonl").read_bytes()
    assert GOLDEN_PATH.exists(), "golden trace missing; see module docstring"
    golden = GOLDEN_PATH.read_bytes()
    assert normalized_lines(produced) == normalized_lines(golden)
    assert produced == golden


def test_replaying_the_frozen_log_reaches_the_committed_state(tmp_path):
    base = tmp_path / "basis"
    base.mkdir()
    golden = GOLDEN_PATH.read_bytes()
    (base / "events.jsonl").write_bytes(golden)
    last = json.loads(golden.decode("utf-8").splitlines()[-1])
    (base / "head").write_text(last["hash"], encoding="utf-8")
    svc = GatewayService(config=GatewayConfig(basis_dir=str(base)), durable=False)
    try:
        assert svc.verify_log() == {"valid": True, "broken_at": None}
        assert svc.replay_check()["matches"] is True
        state = svc.engine.state
        assert state.premises["P0002"].status.value == "committed"
        assert state.actions["A0001"].status == "committed"
        assert state.discrepancies["D0001"].status.value == "resolved"
    finally:
        svc.close()


if __name__ == "__main__":
    if "--regenerate" not in sys.argv:
        sys.exit("pass --regenerate to rewrite the frozen trace")
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        service = run_scenario(tmp)
        service.close()
        GOLDEN_PATH.parent.mkdir(parents=True, exist_ok=True)
        GOLDEN_PATH.write_bytes((Path(tmp) / "events.jsonl").read_bytes())
    print(f"wrote {GOLDEN_PATH}")
