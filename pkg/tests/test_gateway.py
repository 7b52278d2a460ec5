"""Gateway facade, HTTP API, CLI, and config loading."""

import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from basisgov import BasisError
from basisgov.errors import (
    BAD_CONFIG,
    ERROR_CODES,
    INVALID_VALUE,
    NON_EXPERT_ACTOR,
    OVERRIDE_REQUIRED,
    UNKNOWN_PREMISE,
)
from basisgov.gateway.cli import main as cli_main
from basisgov.gateway.config import GatewayConfig, load_config
from basisgov.gateway.service import (
    ERROR_STATUS,
    OPERATION_SURFACE,
    GatewayService,
    build_app,
    error_status,
)


@pytest.fixture
def service():
    svc = GatewayService(durable=False)
    yield svc
    svc.close()


@pytest.fixture
def client(service):
    return TestClient(build_app(service))


def seed_blocked_action(svc):
    """A consequential action guarded by one uncommitted premise."""
    p = svc.create_premise("epistemic", "pivot claim", 0.5)["premise"]
    a = svc.create_action("risky plan", 0.9, True)["action"]
    svc.add_link(p["id"], a["id"])
    return p["id"], a["id"]


class TestOperationSurface:
    def test_every_row_names_a_real_service_method(self, service):
        for row in OPERATION_SURFACE:
            assert callable(getattr(service, row["service"])), row["op"]

    def test_every_row_has_a_live_http_route(self, service):
        app = build_app(service)
        served = set()
        for route in app.routes:
            for method in getattr(route, "methods", set()) or set():
                served.add((method, route.path))
        for row in OPERATION_SURFACE:
            assert row["http"] in served, row["op"]

    def test_every_api_route_is_published_in_the_table(self, service):
        app = build_app(service)
        published = {row["http"] for row in OPERATION_SURFACE}
        boilerplate = {"/openapi.json", "/docs", "/docs/oauth2-redirect", "/redoc"}
        for route in app.routes:
            if route.path in boilerplate:
                continue
            for method in getattr(route, "methods", set()) or set():
                if method == "HEAD":
                    continue
                assert (method, route.path) in published, route.path

    def test_every_row_resolves_to_a_cli_command(self):
        for row in OPERATION_SURFACE:
            node = cli_main
            for part in row["cli"].split():
                assert part in node.commands, f"{row['op']}: no command {part!r}"
                node = node.commands[part]
            assert not hasattr(node, "commands"), f"{row['cli']} is a group, not a command"

    def test_operations_are_unique(self):
        ops = [row["op"] for row in OPERATION_SURFACE]
        routes = [row["http"] for row in OPERATION_SURFACE]
        assert len(set(ops)) == len(ops)
        assert len(set(routes)) == len(routes)


class TestErrorStatus:
    def test_published_codes_are_real(self):
        assert set(ERROR_STATUS) <= ERROR_CODES

    @pytest.mark.parametrize("code,status", sorted(ERROR_STATUS.items()))
    def test_mapped_codes(self, code, status):
        assert error_status(code) == status

    def test_unmapped_codes_default_to_400(self):
        assert error_status("empty-statement") == 400
        assert error_status("invalid-value") == 400


class TestServiceFacade:
    def test_mutations_return_dicts_with_event_index(self, service):
        out = service.create_premise("epistemic", "claim")
        assert out["premise"]["id"] == "P0001"
        assert out["event_index"] == service.engine.ledger.events[-1].index

    def test_idempotency_key_replays_the_first_result(self, service):
        first = service.create_premise("epistemic", "claim", idempotency_key="k1")
        events = len(service.engine.ledger.events)
        second = service.create_premise("epistemic", "claim", idempotency_key="k1")
        assert second is first
        assert len(service.engine.ledger.events) == events
        third = service.create_premise("epistemic", "claim", idempotency_key="k2")
        assert third["premise"]["id"] != first["premise"]["id"]

    def test_commit_blocked_consequential_raises_override_required(self, service):
        _, aid = seed_blocked_action(service)
        with pytest.raises(BasisError) as e:
            service.commit_action(aid)
        assert e.value.code == OVERRIDE_REQUIRED

    def test_override_commits_with_risk_note(self, service):
        _, aid = seed_blocked_action(service)
        out = service.override_commit(aid, "accepting the schedule risk", "expert")
        assert out["action"]["status"] == "committed"

    def test_trusted_desk_mode_pre_grants_the_expert_actor(self, service):
        assert "expert" in service.engine.experts

    def test_token_mode_requires_a_grant(self, tmp_path):
        svc = GatewayService(
            config=GatewayConfig(expert_token="sekrit"), durable=False)
        try:
            assert svc.engine.experts == set()
            pid = svc.create_premise("epistemic", "claim")["premise"]["id"]
            with pytest.raises(BasisError) as e:
                svc.challenge_premise(pid, "doubt", "expert")
            assert e.value.code == NON_EXPERT_ACTOR
            svc.grant_expert("alice", "wrong-token")
            assert "alice" not in svc.engine.experts
            svc.grant_expert("alice", "sekrit")
            assert "alice" in svc.engine.experts
            svc.challenge_premise(pid, "doubt", "alice")
        finally:
            svc.close()

    def test_events_since_is_strictly_greater(self, service):
        service.create_premise("epistemic", "one")
        service.create_premise("epistemic", "two")
        all_events = service.events_since(-1)["events"]
        tail = service.events_since(all_events[0]["index"])["events"]
        assert [e["index"] for e in tail] == [e["index"] for e in all_events][1:]

    def test_verify_and_replay_report_ok(self, service):
        service.create_premise("epistemic", "claim")
        assert service.verify_log() == {"valid": True, "broken_at": None}
        assert service.replay_check()["matches"] is True


class TestHttpApi:
    def test_create_premise_roundtrip(self, client):
        r = client.post("/premises", json={"axis": "epistemic", "statement": "claim"})
        assert r.status_code == 200
        body = r.json()
        assert body["premise"]["status"] == "draft"
        assert body["event_index"] >= 0

    def test_unknown_premise_is_404_with_error_envelope(self, client):
        r = client.get("/premises/P9999/score")
        assert r.status_code == 404
        assert r.json()["error"]["code"] == UNKNOWN_PREMISE

    def test_blocked_consequential_commit_is_409(self, client, service):
        _, aid = seed_blocked_action(service)
        r = client.post(f"/actions/{aid}/commit")
        assert r.status_code == 409
        err = r.json()["error"]
        assert err["code"] == OVERRIDE_REQUIRED
        assert err["blocking_objects"]

    def test_non_expert_override_is_403(self):
        svc = GatewayService(config=GatewayConfig(expert_token="sekrit"), durable=False)
        try:
            client = TestClient(build_app(svc))
            _, aid = seed_blocked_action(svc)
            r = client.post(f"/actions/{aid}/override",
                            json={"risk_note": "note", "actor": "mallory"})
            assert r.status_code == 403
            r = client.post(f"/actions/{aid}/override",
                            json={"risk_note": "accepting the risk"},
                            headers={"X-Actor": "alice", "X-Expert-Token": "sekrit"})
            assert r.status_code == 200
            assert r.json()["action"]["status"] == "committed"
        finally:
            svc.close()

    def test_path_params_merge_into_the_call(self, client):
        pid = client.post("/premises", json={
            "axis": "teleological", "statement": "goal holds"}).json()["premise"]["id"]
        r = client.post(f"/premises/{pid}/transition", json={"target": "committed"})
        assert r.status_code == 200
        assert r.json()["transition"]["status"] == "committed"

    def test_actor_header_is_recorded_on_the_event(self, client):
        client.post("/premises", json={"axis": "epistemic", "statement": "claim"},
                    headers={"X-Actor": "fieldbot"})
        events = client.get("/events", params={"since": -1}).json()["events"]
        assert events[-1]["actor"] == "fieldbot"

    def test_idempotency_over_http(self, client):
        payload = {"axis": "epistemic", "statement": "claim", "idempotency_key": "req-1"}
        first = client.post("/premises", json=payload).json()
        second = client.post("/premises", json=payload).json()
        assert second == first

    def test_full_loop_gate_slice_decide(self, client):
        pid = client.post("/premises", json={
            "axis": "epistemic", "statement": "pivot", "evidence_threshold": 0.5,
        }).json()["premise"]["id"]
        aid = client.post("/actions", json={
            "description": "plan", "utility": 0.9, "consequential": True,
        }).json()["action"]["id"]
        client.post("/links", json={"source": pid, "target": aid})

        gate = client.post(f"/actions/{aid}/gate", json={}).json()["gate"]
        assert gate["verdict"] == "blocked"
        assert gate["blocking_premises"][0]["premise_id"] == pid

        sl = client.post(f"/actions/{aid}/slice", json={}).json()["slice"]
        items = len(sl["premises"]) + len(sl["discrepant_evidence"]) + len(sl["repair_options"]) + 1
        assert items <= sl["budget"]["max_items"]

        decision = client.post(f"/actions/{aid}/decide", json={}).json()["decision"]
        assert decision["action"] in {"probe", "defer", "escalate"}

        client.post("/evidence", json={
            "premise_id": pid, "payload": "verified", "direction": "supports", "weight": 0.8})
        client.post(f"/premises/{pid}/transition", json={"target": "committed"})
        r = client.post(f"/actions/{aid}/commit")
        assert r.status_code == 200
        assert r.json()["gate"]["verdict"] == "allowed"

    def test_health_verify_replay_endpoints(self, client):
        client.post("/premises", json={"axis": "epistemic", "statement": "claim"})
        health = client.get("/health").json()
        assert health["status"] == "ok" and health["events"] >= 1
        assert client.get("/log/verify").json()["valid"] is True
        assert client.get("/log/replay").json()["matches"] is True

    def test_why_traces_an_object(self, client):
        pid = client.post("/premises", json={
            "axis": "epistemic", "statement": "claim"}).json()["premise"]["id"]
        client.post("/evidence", json={
            "premise_id": pid, "payload": "note", "direction": "supports", "weight": 0.5})
        trail = client.get(f"/why/{pid}").json()
        assert [e["kind"] for e in trail["events"]] == ["PremiseCreated", "EvidenceAttached"]


class TestCli:
    def run(self, tmp_path, *args, expect_exit=0, json_out=True):
        runner = CliRunner()
        base = ["--dir", str(tmp_path)] + (["--json"] if json_out else [])
        result = runner.invoke(cli_main, base + list(args))
        assert result.exit_code == expect_exit, result.output + result.stderr
        return result

    def test_init_requires_a_directory(self):
        result = CliRunner().invoke(cli_main, ["init"])
        assert result.exit_code == 1
        assert json.loads(result.stderr)["error"]["code"] == BAD_CONFIG

    def test_happy_path_persists_across_invocations(self, tmp_path):
        self.run(tmp_path, "init")
        out = json.loads(self.run(tmp_path, "premise", "add", "epistemic", "claim",
                                  "--threshold", "0.5").output)
        pid = out["premise"]["id"]
        self.run(tmp_path, "evidence", "add", pid, "verified",
                 "--direction", "supports", "--weight", "0.8")
        self.run(tmp_path, "premise", "transition", pid, "committed")
        listed = json.loads(self.run(tmp_path, "premise", "list").output)
        assert listed["premises"][0]["status"] == "committed"

    def test_errors_exit_1_with_json_on_stderr(self, tmp_path):
        result = self.run(tmp_path, "premise", "transition", "P9999", "committed",
                          expect_exit=1)
        assert json.loads(result.stderr)["error"]["code"] == UNKNOWN_PREMISE

    def test_override_requires_a_risk_note(self, tmp_path):
        result = CliRunner().invoke(cli_main, ["--dir", str(tmp_path), "override", "A0001"])
        assert result.exit_code != 0

    def test_log_verify_flags_tampering(self, tmp_path):
        self.run(tmp_path, "premise", "add", "epistemic", "claim")
        self.run(tmp_path, "log", "verify")
        log_path = tmp_path / "events.jsonl"
        lines = log_path.read_text(encoding="utf-8").splitlines()
        lines[0] = lines[0].replace("claim", "clean")
        log_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        result = CliRunner().invoke(
            cli_main, ["--dir", str(tmp_path), "log", "verify"])
        assert result.exit_code == 1

    def test_human_output_is_prose_not_json(self, tmp_path):
        result = self.run(tmp_path, "premise", "add", "epistemic", "claim",
                          json_out=False)
        assert "P0001" in result.output
        with pytest.raises(json.JSONDecodeError):
            json.loads(result.output)

    def test_config_file_sets_policy_knobs(self, tmp_path):
        cfg = tmp_path / "gateway.json"
        cfg.write_text(json.dumps({"policy": {"probe_threshold": 0.25}}), encoding="utf-8")
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "--dir", str(tmp_path / "basis"), "--config", str(cfg), "--json", "health"])
        assert result.exit_code == 0, result.stderr

    def test_bad_config_fails_loudly(self, tmp_path):
        cfg = tmp_path / "gateway.json"
        cfg.write_text(json.dumps({"listen_prot": 9}), encoding="utf-8")
        result = CliRunner().invoke(cli_main, [
            "--dir", str(tmp_path / "basis"), "--config", str(cfg), "health"])
        assert result.exit_code == 1


class TestConfigLoading:
    def test_defaults_when_no_path_and_no_env(self, monkeypatch):
        monkeypatch.delenv("BASISGOV_CONFIG", raising=False)
        config = load_config()
        assert config.listen_port == 8410
        assert config.slice_max_items == 7
        assert config.policy_config().probe_threshold == 0.1

    def test_env_var_supplies_the_path(self, tmp_path, monkeypatch):
        cfg = tmp_path / "gateway.json"
        cfg.write_text(json.dumps({"listen_port": 9001}), encoding="utf-8")
        monkeypatch.setenv("BASISGOV_CONFIG", str(cfg))
        assert load_config().listen_port == 9001

    @pytest.mark.parametrize("content", [
        "{not json",
        json.dumps([1, 2]),
        json.dumps({"listen_prot": 9}),
        json.dumps({"policy": ["nope"]}),
        json.dumps({"policy": {"probe_treshold": 0.2}}),
        json.dumps({"slice_max_items": 3}),
    ])
    def test_malformed_configs_are_rejected(self, tmp_path, content):
        cfg = tmp_path / "gateway.json"
        cfg.write_text(content, encoding="utf-8")
        with pytest.raises(BasisError) as e:
            load_config(cfg)
        assert e.value.code == BAD_CONFIG

    def test_missing_file_is_rejected(self, tmp_path):
        with pytest.raises(BasisError) as e:
            load_config(tmp_path / "absent.json")
        assert e.value.code == BAD_CONFIG

    def test_bad_policy_values_are_rejected_eagerly(self, tmp_path):
        cfg = tmp_path / "gateway.json"
        cfg.write_text(json.dumps({"policy": {"cost_weight": -1}}), encoding="utf-8")
        with pytest.raises(BasisError) as e:
            load_config(cfg)
        assert e.value.code == INVALID_VALUE
