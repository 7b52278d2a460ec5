"""Gateway facade and HTTP API.

GatewayService is the one public surface over the engine: plain dicts in and
out, stable error codes, optional idempotency keys on mutations. The HTTP
app, the CLI, and the simulation harness all go through it, so behavior
cannot drift between transports. Expert role is granted per actor by a
static token; when no token is configured the basis runs in trusted desk
mode and the configured expert actor is pre-granted.
"""

# No postponed annotations here: FastAPI must resolve the endpoint type
# hints at runtime, and Request/Body are imported inside build_app.

import logging
from typing import Optional

from ..engine import Basis
from ..errors import BasisError
from ..ledger import verify_chain
from ..state import replay
from .config import GatewayConfig

logger = logging.getLogger(__name__)

#: HTTP status for each stable error code; codes not listed map to 400.
ERROR_STATUS = {
    "unknown-premise": 404,
    "unknown-action": 404,
    "unknown-object": 404,
    "unknown-endpoint": 404,
    "non-expert-actor": 403,
    "override-required": 409,
    "gate-already-allowed": 409,
    "already-linked": 409,
    "already-resolved": 409,
    "chain-broken": 500,
    "storage-failure": 500,
    "unknown-event-kind": 500,
}


def error_status(code: str) -> int:
    return ERROR_STATUS.get(code, 400)


class GatewayService:
    """Dict-in/dict-out facade over one decision basis."""

    def __init__(
        self,
        config: Optional[GatewayConfig] = None,
        directory: Optional[str] = None,
        durable: bool = True,
        clock=None,
    ):
        self.config = config or GatewayConfig()
        if directory is None:
            directory = self.config.basis_dir
        # With a token configured, expert role is granted per-request; without
        # one this is a trusted single-desk deployment.
        experts = set() if self.config.expert_token else {self.config.expert_actor}
        self.engine = Basis(
            directory=directory,
            policy_config=self.config.policy_config(),
            experts=experts,
            clock=clock,
            durable=durable,
        )
        self._idempotent: dict[str, dict] = {}

    # -- plumbing -----------------------------------------------------------

    def grant_expert(self, actor: str, token: Optional[str]) -> None:
        if self.config.expert_token and token == self.config.expert_token:
            self.engine.experts.add(actor)

    def _last_index(self) -> int:
        return self.engine.ledger.events[-1].index if self.engine.ledger.events else -1

    def _mutate(self, idempotency_key: Optional[str], fn) -> dict:
        if idempotency_key is not None and idempotency_key in self._idempotent:
            return self._idempotent[idempotency_key]
        result = fn()
        result["event_index"] = self._last_index()
        if idempotency_key is not None:
            self._idempotent[idempotency_key] = result
        return result

    def close(self) -> None:
        self.engine.close()

    # -- sessions -----------------------------------------------------------

    def open_session(self, actor: str = "expert", session_id: Optional[str] = None,
                     idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "session_id": self.engine.open_session(actor, session_id),
        })

    def close_session(self, actor: str = "expert", session_id: Optional[str] = None,
                      idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "session_id": self.engine.close_session(actor, session_id),
        })

    # -- framework ----------------------------------------------------------

    def revise_framework(self, kind: str, statement: str, params: Optional[dict] = None,
                         object_id: Optional[str] = None, actor: str = "expert",
                         idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "framework": self.engine.revise_framework(kind, statement, params, actor, object_id).to_dict(),
        })

    # -- premises -----------------------------------------------------------

    def create_premise(self, axis: str, statement: str, evidence_threshold: float = 0.0,
                       stakes: str = "low", predecessor: Optional[str] = None,
                       actor: str = "expert", idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "premise": self.engine.create_premise(
                axis, statement, evidence_threshold, stakes, predecessor, actor
            ).to_dict(),
        })

    def list_premises(self) -> dict:
        premises = [self.engine.state.premises[k].to_dict() for k in sorted(self.engine.state.premises)]
        return {"premises": premises}

    def set_credence(self, premise_id: str, credence: float, actor: str = "expert",
                     idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "premise": self.engine.set_credence(premise_id, credence, actor).to_dict(),
        })

    def score_evidence(self, premise_id: str) -> dict:
        return {"premise_id": premise_id, "score": self.engine.score_evidence(premise_id)}

    def attach_evidence(self, premise_id: str, payload: str, direction: str, weight: float,
                        source: str = "expert-assertion", actor: str = "expert",
                        idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "evidence": self.engine.attach_evidence(
                premise_id, payload, direction, weight, source, actor
            ).to_dict(),
        })

    def propose_transition(self, premise_id: str, target: str, actor: str = "expert",
                           idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "transition": self.engine.propose_transition(premise_id, target, actor).to_dict(),
        })

    def challenge_premise(self, premise_id: str, reason: str, actor: str,
                          idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "premise": self.engine.challenge_premise(premise_id, reason, actor).to_dict(),
        })

    def sensitivity(self, premise_id: str) -> dict:
        return {"premise_id": premise_id, "sensitive": self.engine.sensitivity(premise_id)}

    # -- actions and structure ------------------------------------------------

    def create_action(self, description: str, utility: float, consequential: bool,
                      actor: str = "expert", idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "action": self.engine.create_action(description, utility, consequential, actor).to_dict(),
        })

    def withdraw_action(self, action_id: str, actor: str = "expert",
                        idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "action": self.engine.withdraw_action(action_id, actor).to_dict(),
        })

    def list_actions(self) -> dict:
        actions = [self.engine.state.actions[k].to_dict() for k in sorted(self.engine.state.actions)]
        return {"actions": actions}

    def create_expectation(self, premise_id: str, variable: str, predicate: str,
                           operands: list, actor: str = "expert",
                           idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "expectation": self.engine.create_expectation(
                premise_id, variable, predicate, operands, actor
            ).to_dict(),
        })

    def add_link(self, source: str, target: str, kind: str = "supports", actor: str = "expert",
                 idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "link": self.engine.add_link(source, target, kind, actor).to_dict(),
        })

    def load_bearing(self, action_id: str) -> dict:
        return {"action_id": action_id, "premise_ids": self.engine.load_bearing(action_id)}

    # -- gating ---------------------------------------------------------------

    def check_gate(self, action_id: str, intent: str = "check", actor: str = "system",
                   idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "gate": self.engine.check_gate(action_id, intent, actor).to_dict(),
        })

    def commit_action(self, action_id: str, actor: str = "expert",
                      idempotency_key: Optional[str] = None) -> dict:
        def run():
            gate = self.engine.commit_action(action_id, actor)
            return {
                "gate": gate.to_dict(),
                "action": self.engine.state.actions[action_id].to_dict(),
            }
        return self._mutate(idempotency_key, run)

    def override_commit(self, action_id: str, risk_note: str, actor: str,
                        idempotency_key: Optional[str] = None) -> dict:
        def run():
            gate = self.engine.override_commit(action_id, risk_note, actor)
            return {
                "gate": gate.to_dict(),
                "action": self.engine.state.actions[action_id].to_dict(),
            }
        return self._mutate(idempotency_key, run)

    # -- observations and discrepancies ----------------------------------------

    def ingest_observation(self, variable: str, value, actor: str = "world", note: str = "",
                           weight: float = 0.5, anomalous: bool = False,
                           idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "discrepancies": [
                d.to_dict()
                for d in self.engine.ingest_observation(variable, value, actor, note, weight, anomalous)
            ],
        })

    def list_discrepancies(self) -> dict:
        ds = [self.engine.state.discrepancies[k].to_dict() for k in sorted(self.engine.state.discrepancies)]
        return {"discrepancies": ds}

    def link_discrepancy(self, discrepancy_id: str, violated_object_id: str, actor: str,
                         idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "discrepancy": self.engine.link_discrepancy(discrepancy_id, violated_object_id, actor).to_dict(),
        })

    def type_discrepancy(self, discrepancy_id: str, actor: str = "system",
                         idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "discrepancy_id": discrepancy_id,
            "axis": self.engine.type_discrepancy(discrepancy_id, actor).value,
        })

    def route_discrepancy(self, discrepancy_id: str) -> dict:
        return {"discrepancy_id": discrepancy_id, "repair": self.engine.route(discrepancy_id).value}

    def resolve_discrepancy(self, discrepancy_id: str, resolution_evidence_id: str,
                            actor: str = "expert", idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "discrepancy": self.engine.resolve_discrepancy(
                discrepancy_id, resolution_evidence_id, actor
            ).to_dict(),
        })

    # -- probes -----------------------------------------------------------------

    def propose_probe(self, premise_id: str, description: str, discrimination: float,
                      cost: float, actor: str = "assistant",
                      idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "probe": self.engine.propose_probe(premise_id, description, discrimination, cost, actor).to_dict(),
        })

    def record_probe_result(self, probe_id: str, passed: bool, weight: float,
                            actor: str = "expert", note: str = "",
                            idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "evidence": self.engine.record_probe_result(probe_id, passed, weight, actor, note).to_dict(),
        })

    def probe_value(self, probe_id: str) -> dict:
        return {"probe_id": probe_id, "value": self.engine.probe_value(probe_id)}

    # -- slices and policy --------------------------------------------------------

    def compile_slice(self, action_id: str, max_items: Optional[int] = None,
                      actor: str = "system", idempotency_key: Optional[str] = None) -> dict:
        budget = max_items if max_items is not None else self.config.slice_max_items
        return self._mutate(idempotency_key, lambda: {
            "slice": self.engine.compile_slice(action_id, budget, actor).to_dict(),
        })

    def decide(self, action_id: str, actor: str = "system",
               idempotency_key: Optional[str] = None) -> dict:
        return self._mutate(idempotency_key, lambda: {
            "decision": self.engine.decide(action_id, actor=actor).to_dict(),
        })

    def recommend(self, candidates: Optional[list] = None) -> dict:
        return {"recommended": self.engine.recommend(candidates)}

    # -- provenance -----------------------------------------------------------------

    def why(self, object_id: str) -> dict:
        return {
            "object_id": object_id,
            "events": [e.to_dict() for e in self.engine.why(object_id)],
        }

    def events_since(self, index: int = -1) -> dict:
        return {
            "events": [e.to_dict() for e in self.engine.events_since(index)],
            "head": self.engine.ledger.head,
            "version": self.engine.state.version,
        }

    def verify_log(self) -> dict:
        return verify_chain(self.engine.ledger.events)

    def replay_check(self) -> dict:
        rebuilt = replay(self.engine.ledger.events)
        return {
            "matches": rebuilt.canonical() == self.engine.state.canonical(),
            "version": rebuilt.version,
            "events": len(self.engine.ledger.events),
        }

    def health(self) -> dict:
        return {
            "status": "ok",
            "events": len(self.engine.ledger),
            "version": self.engine.state.version,
            "session": self.engine.session,
        }


#: One row per exposed operation: service method, HTTP route, CLI command.
#: The completeness test walks this table, so adding an operation anywhere
#: without wiring all three surfaces fails loudly.
OPERATION_SURFACE = [
    {"op": "open_session", "service": "open_session", "http": ("POST", "/sessions/open"), "cli": "session open"},
    {"op": "close_session", "service": "close_session", "http": ("POST", "/sessions/close"), "cli": "session close"},
    {"op": "revise_framework", "service": "revise_framework", "http": ("POST", "/framework/revise"), "cli": "framework revise"},
    {"op": "create_premise", "service": "create_premise", "http": ("POST", "/premises"), "cli": "premise add"},
    {"op": "list_premises", "service": "list_premises", "http": ("GET", "/premises"), "cli": "premise list"},
    {"op": "set_credence", "service": "set_credence", "http": ("POST", "/premises/{premise_id}/credence"), "cli": "premise credence"},
    {"op": "score_evidence", "service": "score_evidence", "http": ("GET", "/premises/{premise_id}/score"), "cli": "premise score"},
    {"op": "propose_transition", "service": "propose_transition", "http": ("POST", "/premises/{premise_id}/transition"), "cli": "premise transition"},
    {"op": "challenge_premise", "service": "challenge_premise", "http": ("POST", "/premises/{premise_id}/challenge"), "cli": "premise challenge"},
    {"op": "sensitivity", "service": "sensitivity", "http": ("GET", "/premises/{premise_id}/sensitivity"), "cli": "premise sensitivity"},
    {"op": "why", "service": "why", "http": ("GET", "/why/{object_id}"), "cli": "premise why"},
    {"op": "attach_evidence", "service": "attach_evidence", "http": ("POST", "/evidence"), "cli": "evidence add"},
    {"op": "create_action", "service": "create_action", "http": ("POST", "/actions"), "cli": "action add"},
    {"op": "list_actions", "service": "list_actions", "http": ("GET", "/actions"), "cli": "action list"},
    {"op": "withdraw_action", "service": "withdraw_action", "http": ("POST", "/actions/{action_id}/withdraw"), "cli": "action withdraw"},
    {"op": "load_bearing", "service": "load_bearing", "http": ("GET", "/actions/{action_id}/load-bearing"), "cli": "action load-bearing"},
    {"op": "create_expectation", "service": "create_expectation", "http": ("POST", "/expectations"), "cli": "expectation add"},
    {"op": "add_link", "service": "add_link", "http": ("POST", "/links"), "cli": "link add"},
    {"op": "check_gate", "service": "check_gate", "http": ("POST", "/actions/{action_id}/gate"), "cli": "gate"},
    {"op": "commit_action", "service": "commit_action", "http": ("POST", "/actions/{action_id}/commit"), "cli": "action commit"},
    {"op": "override_commit", "service": "override_commit", "http": ("POST", "/actions/{action_id}/override"), "cli": "override"},
    {"op": "ingest_observation", "service": "ingest_observation", "http": ("POST", "/observations"), "cli": "observe"},
    {"op": "list_discrepancies", "service": "list_discrepancies", "http": ("GET", "/discrepancies"), "cli": "discrepancy list"},
    {"op": "link_discrepancy", "service": "link_discrepancy", "http": ("POST", "/discrepancies/{discrepancy_id}/link"), "cli": "discrepancy link"},
    {"op": "type_discrepancy", "service": "type_discrepancy", "http": ("POST", "/discrepancies/{discrepancy_id}/type"), "cli": "discrepancy type"},
    {"op": "route_discrepancy", "service": "route_discrepancy", "http": ("GET", "/discrepancies/{discrepancy_id}/route"), "cli": "discrepancy route"},
    {"op": "resolve_discrepancy", "service": "resolve_discrepancy", "http": ("POST", "/discrepancies/{discrepancy_id}/resolve"), "cli": "discrepancy resolve"},
    {"op": "propose_probe", "service": "propose_probe", "http": ("POST", "/probes"), "cli": "probe add"},
    {"op": "record_probe_result", "service": "record_probe_result", "http": ("POST", "/probes/{probe_id}/result"), "cli": "probe result"},
    {"op": "probe_value", "service": "probe_value", "http": ("GET", "/probes/{probe_id}/value"), "cli": "probe value"},
    {"op": "compile_slice", "service": "compile_slice", "http": ("POST", "/actions/{action_id}/slice"), "cli": "slice"},
    {"op": "decide", "service": "decide", "http": ("POST", "/actions/{action_id}/decide"), "cli": "decide"},
    {"op": "recommend", "service": "recommend", "http": ("GET", "/recommendation"), "cli": "recommend"},
    {"op": "events_since", "service": "events_since", "http": ("GET", "/events"), "cli": "log show"},
    {"op": "verify_log", "service": "verify_log", "http": ("GET", "/log/verify"), "cli": "log verify"},
    {"op": "replay_check", "service": "replay_check", "http": ("GET", "/log/replay"), "cli": "log replay"},
    {"op": "health", "service": "health", "http": ("GET", "/health"), "cli": "health"},
]


def build_app(service: GatewayService):
    """FastAPI app over a GatewayService. Import is deferred so the core
    engine stays usable without the HTTP stack."""
    from fastapi import Body, FastAPI, Header, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse

    app = FastAPI(title="basisgov gateway", version="0.1.0")
    app.state.service = service
    # The browser console is served from its own origin.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(BasisError)
    async def basis_error_handler(request: Request, exc: BasisError):
        return JSONResponse(status_code=error_status(exc.code), content={"error": exc.to_dict()})

    def resolve_actor(body: Optional[dict], x_actor: Optional[str], x_expert_token: Optional[str], default: str) -> str:
        actor = (body or {}).get("actor") or x_actor or default
        service.grant_expert(actor, x_expert_token)
        return actor

    def mutation(path: str, method_name: str, default_actor: str = "expert"):
        method = getattr(service, method_name)

        @app.post(path, name=method_name)
        async def endpoint(
            request: Request,
            body: Optional[dict] = Body(None),
            x_actor: Optional[str] = Header(None),
            x_expert_token: Optional[str] = Header(None),
        ):
            body = dict(body or {})
            body["actor"] = resolve_actor(body, x_actor, x_expert_token, default_actor)
            body.update(request.path_params)
            return method(**body)

        return endpoint

    # Mutations (path params merge into the body).
    mutation("/sessions/open", "open_session")
    mutation("/sessions/close", "close_session")
    mutation("/framework/revise", "revise_framework")
    mutation("/premises", "create_premise")
    mutation("/premises/{premise_id}/credence", "set_credence")
    mutation("/premises/{premise_id}/transition", "propose_transition")
    mutation("/premises/{premise_id}/challenge", "challenge_premise")
    mutation("/evidence", "attach_evidence")
    mutation("/actions", "create_action")
    mutation("/actions/{action_id}/withdraw", "withdraw_action")
    mutation("/expectations", "create_expectation")
    mutation("/links", "add_link")
    mutation("/actions/{action_id}/gate", "check_gate", default_actor="system")
    mutation("/actions/{action_id}/commit", "commit_action")
    mutation("/actions/{action_id}/override", "override_commit")
    mutation("/observations", "ingest_observation", default_actor="world")
    mutation("/discrepancies/{discrepancy_id}/link", "link_discrepancy")
    mutation("/discrepancies/{discrepancy_id}/type", "type_discrepancy", default_actor="system")
    mutation("/discrepancies/{discrepancy_id}/resolve", "resolve_discrepancy")
    mutation("/probes", "propose_probe", default_actor="assistant")
    mutation("/probes/{probe_id}/result", "record_probe_result")
    mutation("/actions/{action_id}/slice", "compile_slice", default_actor="system")
    mutation("/actions/{action_id}/decide", "decide", default_actor="system")

    # Reads.
    @app.get("/premises")
    async def premises():
        return service.list_premises()

    @app.get("/premises/{premise_id}/score")
    async def premise_score(premise_id: str):
        return service.score_evidence(premise_id)

    @app.get("/premises/{premise_id}/sensitivity")
    async def premise_sensitivity(premise_id: str):
        return service.sensitivity(premise_id)

    @app.get("/actions")
    async def actions():
        return service.list_actions()

    @app.get("/actions/{action_id}/load-bearing")
    async def action_load_bearing(action_id: str):
        return service.load_bearing(action_id)

    @app.get("/discrepancies")
    async def discrepancies():
        return service.list_discrepancies()

    @app.get("/discrepancies/{discrepancy_id}/route")
    async def discrepancy_route(discrepancy_id: str):
        return service.route_discrepancy(discrepancy_id)

    @app.get("/probes/{probe_id}/value")
    async def probe_value(probe_id: str):
        return service.probe_value(probe_id)

    @app.get("/recommendation")
    async def recommendation(candidates: Optional[str] = None):
        ids = candidates.split(",") if candidates else None
        return service.recommend(ids)

    @app.get("/why/{object_id}")
    async def why(object_id: str):
        return service.why(object_id)

    @app.get("/events")
    async def events(since: int = -1):
        return service.events_since(since)

    @app.get("/log/verify")
    async def log_verify():
        return service.verify_log()

    @app.get("/log/replay")
    async def log_replay():
        return service.replay_check()

    @app.get("/health")
    async def health():
        return service.health()

    return app
