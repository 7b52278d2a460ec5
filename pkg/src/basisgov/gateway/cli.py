"""Command-line companion for the gateway.

Every command drives the same GatewayService facade the HTTP API uses, so
CLI behavior matches the service exactly. Default output is a short human
line; --json switches to the raw service response. Any stable error code
exits non-zero with the error on stderr.
"""

from __future__ import annotations

import json
import sys
from typing import Optional

import click

from ..errors import BasisError
from .config import GatewayConfig, load_config
from .service import GatewayService, build_app


def echo_result(ctx: click.Context, result: dict, line: str) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(result, indent=2, sort_keys=True))
    else:
        click.echo(line)


def open_service(ctx: click.Context) -> GatewayService:
    config: GatewayConfig = ctx.obj["config"]
    service = GatewayService(config=config, directory=ctx.obj["dir"] or config.basis_dir)
    service.grant_expert(ctx.obj["actor"], ctx.obj["token"])
    return service


def run(ctx: click.Context, fn, line_fn) -> None:
    """Execute one service call with uniform error handling and teardown."""
    service = open_service(ctx)
    try:
        result = fn(service)
    except BasisError as exc:
        click.echo(json.dumps({"error": exc.to_dict()}), err=True)
        sys.exit(1)
    finally:
        service.close()
    echo_result(ctx, result, line_fn(result))


def actor_of(ctx: click.Context) -> str:
    return ctx.obj["actor"]


@click.group()
@click.option("--dir", "directory", envvar="BASISGOV_DIR", default=None,
              help="Basis directory (defaults to config basis_dir or in-memory).")
@click.option("--config", "config_path", envvar="BASISGOV_CONFIG", default=None,
              help="Path to a JSON config file.")
@click.option("--actor", default="expert", show_default=True, help="Acting identity.")
@click.option("--expert-token", envvar="BASISGOV_EXPERT_TOKEN", default=None,
              help="Expert role token, when the basis is token-protected.")
@click.option("--json", "json_out", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx, directory, config_path, actor, expert_token, json_out):
    """Govern a decision basis: premises, evidence, gates, slices, probes."""
    try:
        config = load_config(config_path)
    except BasisError as exc:
        click.echo(json.dumps({"error": exc.to_dict()}), err=True)
        sys.exit(1)
    ctx.obj = {
        "config": config,
        "dir": directory,
        "actor": actor,
        "token": expert_token,
        "json": json_out,
    }


@main.command()
@click.pass_context
def init(ctx):
    """Create the basis directory and an empty ledger."""
    if not ctx.obj["dir"] and not ctx.obj["config"].basis_dir:
        click.echo(json.dumps({"error": {"code": "bad-config", "message": "init requires --dir"}}), err=True)
        sys.exit(1)
    run(ctx, lambda s: s.health(), lambda r: f"initialized basis with {r['events']} events")


@main.command()
@click.pass_context
def health(ctx):
    """Basis status: event count and snapshot version."""
    run(ctx, lambda s: s.health(), lambda r: f"ok: {r['events']} events, version {r['version']}")


# -- sessions ----------------------------------------------------------------

@main.group()
def session():
    """Open or close work sessions."""


@session.command("open")
@click.option("--id", "session_id", default=None)
@click.pass_context
def session_open(ctx, session_id):
    run(ctx, lambda s: s.open_session(actor_of(ctx), session_id),
        lambda r: f"session {r['session_id']} open")


@session.command("close")
@click.option("--id", "session_id", default=None)
@click.pass_context
def session_close(ctx, session_id):
    run(ctx, lambda s: s.close_session(actor_of(ctx), session_id),
        lambda r: f"session {r['session_id']} closed")


# -- framework -----------------------------------------------------------------

@main.group()
def framework():
    """Framework objects: goals, constraints, thresholds, protocols."""


@framework.command("revise")
@click.argument("kind")
@click.argument("statement")
@click.option("--param", "params", multiple=True, help="key=value, repeatable.")
@click.option("--id", "object_id", default=None, help="Existing object to revise.")
@click.pass_context
def framework_revise(ctx, kind, statement, params, object_id):
    parsed = {}
    for item in params:
        key, _, value = item.partition("=")
        try:
            parsed[key] = json.loads(value)
        except json.JSONDecodeError:
            parsed[key] = value
    run(ctx, lambda s: s.revise_framework(kind, statement, parsed, object_id, actor_of(ctx)),
        lambda r: f"{r['framework']['id']} revision {r['framework']['revision']}")


# -- premises --------------------------------------------------------------------

@main.group()
def premise():
    """Create, evolve, and inspect premises."""


@premise.command("add")
@click.argument("axis", type=click.Choice(["teleological", "epistemic", "procedural"]))
@click.argument("statement")
@click.option("--threshold", default=0.0, show_default=True, help="Evidence threshold for commit.")
@click.option("--stakes", type=click.Choice(["low", "high"]), default="low", show_default=True)
@click.option("--predecessor", default=None, help="Rejected premise this one replaces.")
@click.pass_context
def premise_add(ctx, axis, statement, threshold, stakes, predecessor):
    run(ctx, lambda s: s.create_premise(axis, statement, threshold, stakes, predecessor, actor_of(ctx)),
        lambda r: f"{r['premise']['id']} {r['premise']['status']}")


@premise.command("list")
@click.pass_context
def premise_list(ctx):
    def lines(r):
        return "\n".join(
            f"{p['id']} [{p['status']}] ({p['axis']}, stakes={p['stakes']}) {p['statement']}"
            for p in r["premises"]
        ) or "no premises"
    run(ctx, lambda s: s.list_premises(), lines)


@premise.command("transition")
@click.argument("premise_id")
@click.argument("target", type=click.Choice(["contested", "committed", "rejected"]))
@click.pass_context
def premise_transition(ctx, premise_id, target):
    def line(r):
        t = r["transition"]
        if t["applied"]:
            return f"{premise_id} -> {t['status']}"
        return f"rejected: {t['reason']} (blocking: {', '.join(t['blocking']) or 'none'})"
    run(ctx, lambda s: s.propose_transition(premise_id, target, actor_of(ctx)), line)


@premise.command("challenge")
@click.argument("premise_id")
@click.argument("reason")
@click.pass_context
def premise_challenge(ctx, premise_id, reason):
    run(ctx, lambda s: s.challenge_premise(premise_id, reason, actor_of(ctx)),
        lambda r: f"{premise_id} {r['premise']['status']}")


@premise.command("credence")
@click.argument("premise_id")
@click.argument("value", type=float)
@click.pass_context
def premise_credence(ctx, premise_id, value):
    run(ctx, lambda s: s.set_credence(premise_id, value, actor_of(ctx)),
        lambda r: f"{premise_id} credence {r['premise']['credence']}")


@premise.command("score")
@click.argument("premise_id")
@click.pass_context
def premise_score(ctx, premise_id):
    run(ctx, lambda s: s.score_evidence(premise_id),
        lambda r: f"{premise_id} evidence score {r['score']}")


@premise.command("sensitivity")
@click.argument("premise_id")
@click.pass_context
def premise_sensitivity(ctx, premise_id):
    run(ctx, lambda s: s.sensitivity(premise_id),
        lambda r: f"{premise_id} sensitive: {r['sensitive']}")


@premise.command("why")
@click.argument("object_id")
@click.pass_context
def premise_why(ctx, object_id):
    """Provenance chain for any object in the basis."""
    def lines(r):
        return "\n".join(
            f"[{e['index']}] {e['kind']} by {e['actor']} ({e['session']})"
            for e in r["events"]
        ) or "no events"
    run(ctx, lambda s: s.why(object_id), lines)


# -- evidence / expectations / links ------------------------------------------------

@main.group()
def evidence():
    """Immutable evidence records."""


@evidence.command("add")
@click.argument("premise_id")
@click.argument("payload")
@click.option("--direction", type=click.Choice(["supports", "refutes"]), required=True)
@click.option("--weight", type=float, required=True)
@click.option("--source", type=click.Choice(["observation", "expert-assertion", "probe-result"]),
              default="expert-assertion", show_default=True)
@click.pass_context
def evidence_add(ctx, premise_id, payload, direction, weight, source):
    run(ctx, lambda s: s.attach_evidence(premise_id, payload, direction, weight, source, actor_of(ctx)),
        lambda r: f"{r['evidence']['id']} {direction} {premise_id} (weight {weight})")


@main.group()
def expectation():
    """Observable expectations grounded in premises."""


@expectation.command("add")
@click.argument("premise_id")
@click.argument("variable")
@click.argument("predicate", type=click.Choice(["equals", "in-range", "at-least", "at-most"]))
@click.argument("operands", nargs=-1, type=float, required=True)
@click.pass_context
def expectation_add(ctx, premise_id, variable, predicate, operands):
    run(ctx, lambda s: s.create_expectation(premise_id, variable, predicate, list(operands), actor_of(ctx)),
        lambda r: f"{r['expectation']['id']} {variable} {predicate} {list(operands)}")


@main.group()
def link():
    """Typed dependency links."""


@link.command("add")
@click.argument("source")
@click.argument("target")
@click.option("--kind", type=click.Choice(["supports", "grounds"]), default="supports", show_default=True)
@click.pass_context
def link_add(ctx, source, target, kind):
    run(ctx, lambda s: s.add_link(source, target, kind, actor_of(ctx)),
        lambda r: f"{r['link']['id']} {source} -> {target} ({kind})")


# -- actions and gating -----------------------------------------------------------

@main.group()
def action():
    """Pending actions and their commitment."""


@action.command("add")
@click.argument("description")
@click.option("--utility", type=float, default=0.5, show_default=True)
@click.option("--consequential/--routine", default=True, show_default=True)
@click.pass_context
def action_add(ctx, description, utility, consequential):
    run(ctx, lambda s: s.create_action(description, utility, consequential, actor_of(ctx)),
        lambda r: f"{r['action']['id']} pending")


@action.command("list")
@click.pass_context
def action_list(ctx):
    def lines(r):
        return "\n".join(
            f"{a['id']} [{a['status']}] utility={a['utility']} "
            f"{'consequential' if a['consequential'] else 'routine'} {a['description']}"
            for a in r["actions"]
        ) or "no actions"
    run(ctx, lambda s: s.list_actions(), lines)


@action.command("withdraw")
@click.argument("action_id")
@click.pass_context
def action_withdraw(ctx, action_id):
    run(ctx, lambda s: s.withdraw_action(action_id, actor_of(ctx)),
        lambda r: f"{action_id} withdrawn")


@action.command("load-bearing")
@click.argument("action_id")
@click.pass_context
def action_load_bearing(ctx, action_id):
    run(ctx, lambda s: s.load_bearing(action_id),
        lambda r: ", ".join(r["premise_ids"]) or "no load-bearing premises")


@action.command("commit")
@click.argument("action_id")
@click.pass_context
def action_commit(ctx, action_id):
    run(ctx, lambda s: s.commit_action(action_id, actor_of(ctx)),
        lambda r: f"{action_id} committed (gate {r['gate']['verdict']})")


@main.command()
@click.argument("action_id")
@click.option("--intent", type=click.Choice(["check", "commit-now"]), default="check", show_default=True)
@click.pass_context
def gate(ctx, action_id, intent):
    """Check the commitment gate for an action."""
    def line(r):
        blocking = ", ".join(b["premise_id"] for b in r["gate"]["blocking_premises"])
        return f"{r['gate']['verdict']}" + (f" (blocking: {blocking})" if blocking else "")
    run(ctx, lambda s: s.check_gate(action_id, intent, actor_of(ctx)), line)


@main.command()
@click.argument("action_id")
@click.option("--risk-note", required=True, help="Why committing despite the gate is acceptable.")
@click.pass_context
def override(ctx, action_id, risk_note):
    """Commit a blocked action under an expert-logged risk note."""
    run(ctx, lambda s: s.override_commit(action_id, risk_note, actor_of(ctx)),
        lambda r: f"{action_id} committed by override")


# -- observations and discrepancies -------------------------------------------------

@main.command()
@click.argument("variable")
@click.argument("value", type=float)
@click.option("--note", default="")
@click.option("--weight", type=float, default=0.5, show_default=True)
@click.option("--anomalous", is_flag=True, help="Open an unlinked discrepancy when nothing matches.")
@click.pass_context
def observe(ctx, variable, value, note, weight, anomalous):
    """Ingest an observation and detect discrepancies."""
    def line(r):
        if not r["discrepancies"]:
            return "no discrepancies"
        return "\n".join(
            f"{d['id']} {d['linkage']} axis={d['axis']} violates {d['violated_object'] or '?'}"
            for d in r["discrepancies"]
        )
    run(ctx, lambda s: s.ingest_observation(variable, value, actor_of(ctx), note, weight, anomalous), line)


@main.group()
def discrepancy():
    """First-class mismatch objects."""


@discrepancy.command("list")
@click.pass_context
def discrepancy_list(ctx):
    def lines(r):
        return "\n".join(
            f"{d['id']} [{d['status']}] {d['linkage']} axis={d['axis']} impact={','.join(d['impact'])}"
            for d in r["discrepancies"]
        ) or "no discrepancies"
    run(ctx, lambda s: s.list_discrepancies(), lines)


@discrepancy.command("link")
@click.argument("discrepancy_id")
@click.argument("violated_object_id")
@click.pass_context
def discrepancy_link(ctx, discrepancy_id, violated_object_id):
    run(ctx, lambda s: s.link_discrepancy(discrepancy_id, violated_object_id, actor_of(ctx)),
        lambda r: f"{discrepancy_id} linked to {violated_object_id} (axis {r['discrepancy']['axis']})")


@discrepancy.command("type")
@click.argument("discrepancy_id")
@click.pass_context
def discrepancy_type(ctx, discrepancy_id):
    run(ctx, lambda s: s.type_discrepancy(discrepancy_id, actor_of(ctx)),
        lambda r: f"{discrepancy_id} axis {r['axis']}")


@discrepancy.command("route")
@click.argument("discrepancy_id")
@click.pass_context
def discrepancy_route(ctx, discrepancy_id):
    run(ctx, lambda s: s.route_discrepancy(discrepancy_id),
        lambda r: f"{discrepancy_id} -> {r['repair']}")


@discrepancy.command("resolve")
@click.argument("discrepancy_id")
@click.argument("evidence_id")
@click.pass_context
def discrepancy_resolve(ctx, discrepancy_id, evidence_id):
    run(ctx, lambda s: s.resolve_discrepancy(discrepancy_id, evidence_id, actor_of(ctx)),
        lambda r: f"{discrepancy_id} resolved by {evidence_id}")


# -- probes ---------------------------------------------------------------------------

@main.group()
def probe():
    """Discriminating probes against contested premises."""


@probe.command("add")
@click.argument("premise_id")
@click.argument("description")
@click.option("--discrimination", type=float, required=True)
@click.option("--cost", type=float, required=True)
@click.pass_context
def probe_add(ctx, premise_id, description, discrimination, cost):
    run(ctx, lambda s: s.propose_probe(premise_id, description, discrimination, cost, actor_of(ctx)),
        lambda r: f"{r['probe']['id']} on {premise_id}")


@probe.command("result")
@click.argument("probe_id")
@click.option("--passed/--failed", required=True)
@click.option("--weight", type=float, required=True)
@click.option("--note", default="")
@click.pass_context
def probe_result(ctx, probe_id, passed, weight, note):
    run(ctx, lambda s: s.record_probe_result(probe_id, passed, weight, actor_of(ctx), note),
        lambda r: f"{probe_id} {'passed' if passed else 'failed'}; evidence {r['evidence']['id']}")


@probe.command("value")
@click.argument("probe_id")
@click.pass_context
def probe_value(ctx, probe_id):
    run(ctx, lambda s: s.probe_value(probe_id),
        lambda r: f"{probe_id} value {r['value']:.4f}")


# -- slices and policy -------------------------------------------------------------------

@main.command("slice")
@click.argument("action_id")
@click.option("--max-items", type=int, default=None, help="Slice budget override.")
@click.pass_context
def slice_cmd(ctx, action_id, max_items):
    """Compile the budgeted decision slice for an action."""
    def lines(r):
        s = r["slice"]
        out = [f"slice for {s['action_id']} (budget {s['budget']['max_items']}, at event {s['compiled_at']})"]
        for p in s["premises"]:
            tag = " context" if p["context"] else ""
            sens = " sensitive" if p["sensitive"] else ""
            out.append(f"  premise {p['premise_id']} [{p['status']}]{sens}{tag}: {p['statement']}")
        for e in s["discrepant_evidence"]:
            out.append(f"  evidence {e['evidence_id']} ({e['direction']}, {e['source']}) via {e['discrepancy_id']}")
        out.append(f"  consequence: {s['consequence']['text']}")
        for o in s["repair_options"]:
            probe_txt = f" probe: {o['probe']['description']}" if o.get("probe") else ""
            out.append(f"  option: {o['kind']} -> {o['target']}{probe_txt}")
        return "\n".join(out)
    run(ctx, lambda s: s.compile_slice(action_id, max_items, actor_of(ctx)), lines)


@main.command()
@click.argument("action_id")
@click.pass_context
def decide(ctx, action_id):
    """Pick probe, defer, escalate, or commit for a pending action."""
    def line(r):
        d = r["decision"]
        chosen = f" probe {d['chosen_probe']}" if d.get("chosen_probe") else ""
        return f"{d['action']}{chosen} ({d['justification']['kind']})"
    run(ctx, lambda s: s.decide(action_id, actor_of(ctx)), line)


@main.command()
@click.option("--candidates", default=None, help="Comma-separated action ids.")
@click.pass_context
def recommend(ctx, candidates):
    """Highest-utility action the gate currently allows."""
    ids = candidates.split(",") if candidates else None
    run(ctx, lambda s: s.recommend(ids),
        lambda r: r["recommended"] or "no action passes the gate")


# -- ledger ------------------------------------------------------------------------------

@main.group()
def log():
    """Inspect and verify the event log."""


@log.command("show")
@click.option("--since", type=int, default=-1, show_default=True)
@click.pass_context
def log_show(ctx, since):
    def lines(r):
        return "\n".join(
            f"[{e['index']}] {e['kind']} by {e['actor']} ({e['session']})"
            for e in r["events"]
        ) or "no events"
    run(ctx, lambda s: s.events_since(since), lines)


@log.command("verify")
@click.pass_context
def log_verify(ctx):
    service = open_service(ctx)
    try:
        result = service.verify_log()
    except BasisError as exc:
        click.echo(json.dumps({"error": exc.to_dict()}), err=True)
        sys.exit(1)
    finally:
        service.close()
    if not result["valid"]:
        echo_result(ctx, result, f"broken at index {result['broken_at']}")
        sys.exit(1)
    echo_result(ctx, result, "valid")


@log.command("replay")
@click.pass_context
def log_replay(ctx):
    service = open_service(ctx)
    try:
        result = service.replay_check()
    except BasisError as exc:
        click.echo(json.dumps({"error": exc.to_dict()}), err=True)
        sys.exit(1)
    finally:
        service.close()
    if not result["matches"]:
        echo_result(ctx, result, "replay DIVERGES from live state")
        sys.exit(1)
    echo_result(ctx, result, f"replay matches live state ({result['events']} events)")


# -- simulation and serving ---------------------------------------------------------------

@main.command()
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--hidden-false-rate", type=float, default=0.3, show_default=True)
@click.option("--two-session-rate", type=float, default=0.0, show_default=True)
@click.option("--policies", default="governed,answer-centric,sycophantic", show_default=True)
@click.option("--out-dir", default=None, help="Write metrics table and per-trial rows here.")
@click.pass_context
def simulate(ctx, trials, seed, hidden_false_rate, two_session_rate, policies, out_dir):
    """Run the scripted-agent experiment and print the metrics table."""
    from .. import harness

    try:
        result = harness.run_experiment(
            n_trials=trials,
            seed=seed,
            policies=policies.split(","),
            hidden_false_rate=hidden_false_rate,
            two_session_rate=two_session_rate,
            out_dir=out_dir,
        )
    except BasisError as exc:
        click.echo(json.dumps({"error": exc.to_dict()}), err=True)
        sys.exit(1)
    if ctx.obj["json"]:
        click.echo(json.dumps(result, indent=2, sort_keys=True))
    else:
        click.echo(harness.format_table(result))


@main.command()
@click.pass_context
def serve(ctx):
    """Run the HTTP gateway."""
    import uvicorn

    config: GatewayConfig = ctx.obj["config"]
    service = GatewayService(config=config, directory=ctx.obj["dir"] or config.basis_dir)
    app = build_app(service)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="info")


if __name__ == "__main__":
    main()
