"""Scripted-agent simulation comparing governance policies on synthetic tasks.

Each task hides ground truth behind noisy probes and observations. Three
scripted policies drive the engine exclusively through the GatewayService
facade:

  governed       uses the full loop: decide, probe, resolve, gate, commit
  answer-centric commits its preferred action immediately and overrides the
                 gate when blocked; never probes, never looks back
  sycophantic    full detection, but every conflict is resolved in the
                 expert's initially stated direction by stacking assertions,
                 never by probing

Hidden truths live only in the World object; policies see them solely
through sampled probe results and observations, so the comparison cannot
leak ground truth. Identical seeds give identical tasks across policies and
identical metrics across runs.
"""

from __future__ import annotations

import csv
import json
import random
import statistics
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import BasisError, INVALID_POLICY, INVALID_VALUE
from .gateway.config import GatewayConfig
from .gateway.service import GatewayService

POLICIES = ("governed", "answer-centric", "sycophantic")

MAX_LOOP_STEPS = 60

#: Context premises commit on the expert's initial assertion alone; the pivot
#: needs probe-grade evidence on top of it.
PIVOT_THRESHOLD = 1.0
CONTEXT_THRESHOLD = 0.3
ASSERTION_WEIGHT = 0.6
BOOST_WEIGHT = 0.5
OBSERVATION_WEIGHT = 0.5
PROBE_WEIGHT = 1.0


@dataclass
class TaskPremise:
    statement: str
    variable: str
    stakes: str
    threshold: float
    probe_description: str
    probe_discrimination: float
    probe_cost: float
    pivot: bool


@dataclass
class SyntheticTask:
    seed: int
    premises: list[TaskPremise]
    preferred_utility: float
    fallback_utility: float
    sessions: int
    hidden_truths: list[bool] = field(repr=False)

    @property
    def correct_action(self) -> str:
        return "preferred" if all(self.hidden_truths) else "fallback"


@dataclass
class RunMetrics:
    policy: str
    seed: int
    steps_to_commit: int = 0
    inappropriate_commits: int = 0
    inappropriate_overrides: int = 0
    suppressed_conflict_commits: int = 0
    relitigated_premises: int = 0
    probes_run: int = 0
    committed_action: str = ""
    correct: bool = False

    def to_dict(self) -> dict:
        return {
            "policy": self.policy,
            "seed": self.seed,
            "steps_to_commit": self.steps_to_commit,
            "inappropriate_commits": self.inappropriate_commits,
            "inappropriate_overrides": self.inappropriate_overrides,
            "suppressed_conflict_commits": self.suppressed_conflict_commits,
            "relitigated_premises": self.relitigated_premises,
            "probes_run": self.probes_run,
            "committed_action": self.committed_action,
            "correct": self.correct,
        }


def generate_task(seed: int, hidden_false_rate: float = 0.3, two_session_rate: float = 0.0) -> SyntheticTask:
    rng = random.Random(seed)
    n_context = rng.randint(1, 3)
    premises = []
    truths = []
    for i in range(n_context + 1):
        pivot = i == 0
        premises.append(TaskPremise(
            statement=("the decisive hypothesis holds" if pivot else f"supporting condition {i} holds"),
            variable=f"signal_{i}",
            stakes="high" if (not pivot and rng.random() < 0.2) else "low",
            threshold=PIVOT_THRESHOLD if pivot else CONTEXT_THRESHOLD,
            probe_description=f"discriminating check of signal_{i}",
            probe_discrimination=rng.uniform(0.6, 1.0),
            probe_cost=rng.uniform(0.1, 0.5),
            pivot=pivot,
        ))
        truths.append(rng.random() >= hidden_false_rate)
    return SyntheticTask(
        seed=seed,
        premises=premises,
        preferred_utility=rng.uniform(0.7, 1.0),
        fallback_utility=rng.uniform(0.1, 0.4),
        sessions=2 if rng.random() < two_session_rate else 1,
        hidden_truths=truths,
    )


class World:
    """Holds hidden truths; policies reach them only through noisy sampling."""

    def __init__(self, task: SyntheticTask, policy: str):
        self._truths = list(task.hidden_truths)
        self._discrimination = [p.probe_discrimination for p in task.premises]
        self._rng = random.Random((task.seed * 1_000_003) ^ zlib.crc32(policy.encode()))

    def sample_probe(self, premise_index: int) -> bool:
        """Probe outcome: truthful with probability equal to discrimination."""
        truth = self._truths[premise_index]
        if self._rng.random() < self._discrimination[premise_index]:
            return truth
        return not truth

    def observe(self, premise_index: int) -> float:
        """Observed signal value; faithfully above/below the 0.5 expectation."""
        if self._truths[premise_index]:
            return round(self._rng.uniform(0.6, 1.0), 3)
        return round(self._rng.uniform(0.0, 0.4), 3)


class Trial:
    """One policy run over one task, counting every facade call as a step."""

    def __init__(self, task: SyntheticTask, policy: str, directory: Optional[str] = None):
        self.task = task
        self.policy = policy
        self.world = World(task, policy)
        self.directory = directory
        self.service = self._open_service()
        self.steps = 0
        self.probes_run = 0
        self.probed_premises: set[str] = set()
        self.suppressed_premises: set[str] = set()
        self.overrode = False
        self.premise_ids: list[str] = []
        self.probe_ids: dict[str, str] = {}
        self.preferred_id = ""
        self.fallback_id = ""

    def _open_service(self) -> GatewayService:
        return GatewayService(
            config=GatewayConfig(basis_dir=self.directory),
            durable=False,
        )

    def call(self, method: str, *args, **kwargs):
        self.steps += 1
        return getattr(self.service, method)(*args, **kwargs)

    # -- shared basis construction ------------------------------------------

    def setup_premises(self) -> None:
        for tp in self.task.premises:
            result = self.call("create_premise", "epistemic", tp.statement, tp.threshold, tp.stakes)
            pid = result["premise"]["id"]
            self.premise_ids.append(pid)
            self.call("attach_evidence", pid, "initial expert assertion", "supports",
                      ASSERTION_WEIGHT, "expert-assertion")
            self.call("create_expectation", pid, tp.variable, "at-least", [0.5])
            probe = self.call("propose_probe", pid, tp.probe_description,
                              tp.probe_discrimination, tp.probe_cost)
            self.probe_ids[pid] = probe["probe"]["id"]

    def setup_actions(self) -> None:
        preferred = self.call("create_action", "preferred plan", self.task.preferred_utility, True)
        fallback = self.call("create_action", "conservative fallback", self.task.fallback_utility, True)
        self.preferred_id = preferred["action"]["id"]
        self.fallback_id = fallback["action"]["id"]
        for pid in self.premise_ids:
            self.call("add_link", pid, self.preferred_id)

    def commit_context_premises(self) -> None:
        for pid, tp in zip(self.premise_ids, self.task.premises):
            if not tp.pivot:
                self.call("propose_transition", pid, "committed")

    def world_reports(self) -> None:
        """The world announces each signal; detection handles the rest."""
        for i, tp in enumerate(self.task.premises):
            self.call("ingest_observation", tp.variable, self.world.observe(i),
                      weight=OBSERVATION_WEIGHT)

    # -- probe mechanics -------------------------------------------------------

    def run_probe(self, premise_id: str) -> bool:
        """Sample the probe, record the result, resolve what it settles, and
        move the premise accordingly. Returns True if the premise committed."""
        index = self.premise_ids.index(premise_id)
        probe_id = self.probe_ids[premise_id]
        passed = self.world.sample_probe(index)
        result = self.call("record_probe_result", probe_id, passed, PROBE_WEIGHT)
        self.probes_run += 1
        self.probed_premises.add(premise_id)
        evidence_id = result["evidence"]["id"]
        if passed:
            for d in self.call("list_discrepancies")["discrepancies"]:
                if d["status"] == "open" and self._premise_of(d) == premise_id:
                    self.call("resolve_discrepancy", d["id"], evidence_id)
            outcome = self.call("propose_transition", premise_id, "committed")
            return bool(outcome["transition"]["applied"])
        self.call("propose_transition", premise_id, "rejected")
        return False

    def _premise_of(self, d: dict) -> Optional[str]:
        target = d.get("violated_object")
        if target in self.premise_ids:
            return target
        state = self.service.engine.state
        if target in state.expectations:
            return state.expectations[target].premise_id
        return None

    # -- per-policy scripts ------------------------------------------------------

    def governed_decision_loop(self) -> str:
        for _ in range(MAX_LOOP_STEPS):
            decision = self.call("decide", self.preferred_id)["decision"]
            kind = decision["action"]
            if kind == "commit":
                self.call("commit_action", self.preferred_id)
                return "preferred"
            if kind == "probe":
                probe_id = decision["chosen_probe"]
                premise_id = self.service.engine.state.probes[probe_id].premise_id
                if not self.run_probe(premise_id):
                    if self._rejected(premise_id):
                        break
                continue
            if kind == "escalate":
                if not self.expert_adjudicates():
                    break
                continue
            break  # defer: probing is not worth it, take the safe route
        self.call("commit_action", self.fallback_id)
        return "fallback"

    def expert_adjudicates(self) -> bool:
        """Escalation hands control to the scripted expert, who works through
        the unsettled load-bearing premises with their remaining probes."""
        state = self.service.engine.state
        bearing = self.call("load_bearing", self.preferred_id)["premise_ids"]
        progressed = False
        for pid in bearing:
            if state.premises[pid].status.value == "committed":
                continue
            probe_id = self.probe_ids.get(pid)
            if probe_id is None or state.probes[probe_id].resulted:
                return False
            progressed = True
            if not self.run_probe(pid):
                return False
        return progressed

    def _rejected(self, premise_id: str) -> bool:
        return self.service.engine.state.premises[premise_id].status.value == "rejected"

    def run_governed(self) -> str:
        self.commit_context_premises()
        self.world_reports()
        return self.governed_decision_loop()

    def run_answer_centric(self) -> str:
        """Commit the preferred answer immediately; override when blocked."""
        try:
            self.call("commit_action", self.preferred_id)
        except BasisError as exc:
            if exc.code != "override-required":
                raise
            self.call("override_commit", self.preferred_id,
                      "assistant is confident in the preferred plan", "expert")
            self.overrode = True
        return "preferred"

    def run_sycophantic(self) -> str:
        """Full detection, but conflicts are settled by restating agreement."""
        for pid, tp in zip(self.premise_ids, self.task.premises):
            if tp.pivot:
                self.call("attach_evidence", pid, "expert restates confidence", "supports",
                          BOOST_WEIGHT, "expert-assertion")
            self.call("propose_transition", pid, "committed")
        self.world_reports()
        for _ in range(MAX_LOOP_STEPS):
            open_ds = [d for d in self.call("list_discrepancies")["discrepancies"]
                       if d["status"] == "open"]
            if not open_ds:
                break
            for d in open_ds:
                premise_id = self._premise_of(d)
                if premise_id is None:
                    continue
                agree = self.call("attach_evidence", premise_id,
                                  "expert reaffirms the original position", "supports",
                                  BOOST_WEIGHT, "expert-assertion")
                self.call("resolve_discrepancy", d["id"], agree["evidence"]["id"])
                self.suppressed_premises.add(premise_id)
                self.call("propose_transition", premise_id, "committed")
        self.call("commit_action", self.preferred_id)
        return "preferred"

    # -- session-two replay --------------------------------------------------------

    def reopen(self, fresh: bool) -> int:
        """Close and reopen the basis between sessions.

        A persistent reopen replays the ledger, so anything settled in
        session one arrives still settled; re-litigation is whatever lost its
        committed status. A fresh reopen models an agent without a durable
        basis: every premise has to be re-created and re-argued, so all of
        them count."""
        state = self.service.engine.state
        settled = [pid for pid in self.premise_ids
                   if pid in state.premises and state.premises[pid].status.value == "committed"]
        self.service.close()
        if fresh:
            relitigated = len(self.premise_ids)
            self.directory = None
            self.premise_ids = []
            self.probe_ids = {}
            self.service = self._open_service()
            return relitigated
        self.service = self._open_service()
        still = self.service.engine.state
        return sum(
            1 for pid in settled
            if pid not in still.premises or still.premises[pid].status.value != "committed"
        )


def run_trial(task: SyntheticTask, policy: str, base_dir: Optional[str] = None) -> RunMetrics:
    if policy not in POLICIES:
        raise BasisError(INVALID_POLICY, f"policy must be one of {', '.join(POLICIES)}")

    directory = None
    if task.sessions == 2 and policy != "answer-centric":
        # Cross-session persistence needs a real basis directory.
        import tempfile

        directory = tempfile.mkdtemp(prefix=f"basis-{task.seed}-", dir=base_dir)

    trial = Trial(task, policy, directory)
    metrics = RunMetrics(policy=policy, seed=task.seed)
    try:
        trial.call("open_session")
        trial.setup_premises()
        setup_steps = trial.steps

        if task.sessions == 2:
            # Session one settles premises; the decision itself arrives later.
            if policy == "governed":
                trial.commit_context_premises()
                trial.run_probe(trial.premise_ids[0])
            elif policy == "sycophantic":
                for pid, tp in zip(trial.premise_ids, trial.task.premises):
                    if tp.pivot:
                        trial.call("attach_evidence", pid, "expert restates confidence",
                                   "supports", BOOST_WEIGHT, "expert-assertion")
                    trial.call("propose_transition", pid, "committed")
            trial.call("close_session")
            fresh = policy == "answer-centric"
            metrics.relitigated_premises = trial.reopen(fresh)
            trial.call("open_session")
            if fresh:
                trial.setup_premises()
            setup_steps = trial.steps

        trial.setup_actions()

        if policy == "governed":
            if task.sessions == 2:
                trial.world_reports()
                committed = trial.governed_decision_loop()
            else:
                committed = trial.run_governed()
        elif policy == "answer-centric":
            committed = trial.run_answer_centric()
        else:
            committed = trial.run_sycophantic()

        metrics.steps_to_commit = trial.steps - setup_steps
        metrics.probes_run = trial.probes_run
        metrics.committed_action = committed
        metrics.correct = committed == task.correct_action

        if committed == "preferred":
            unresolved_false = [
                pid
                for pid, truth in zip(trial.premise_ids, task.hidden_truths)
                if not truth and pid not in trial.probed_premises
            ]
            if unresolved_false:
                metrics.inappropriate_commits = 1
                if trial.overrode:
                    metrics.inappropriate_overrides = 1
            if trial.suppressed_premises:
                metrics.suppressed_conflict_commits = 1
    finally:
        trial.service.close()
    return metrics


def run_experiment(
    n_trials: int,
    seed: int = 7,
    policies: Optional[list[str]] = None,
    hidden_false_rate: float = 0.3,
    two_session_rate: float = 0.0,
    out_dir: Optional[str] = None,
) -> dict:
    """Paired trials per policy over a shared task stream, with summary CIs."""
    if n_trials < 1:
        raise BasisError(INVALID_VALUE, "n_trials must be at least 1")
    policies = list(policies) if policies else list(POLICIES)
    for p in policies:
        if p not in POLICIES:
            raise BasisError(INVALID_POLICY, f"policy must be one of {', '.join(POLICIES)}")

    rng = random.Random(seed)
    task_seeds = [rng.randrange(2**32) for _ in range(n_trials)]
    rows: list[dict] = []
    for task_seed in task_seeds:
        task = generate_task(task_seed, hidden_false_rate, two_session_rate)
        for policy in policies:
            rows.append(run_trial(task, policy).to_dict())

    summary: dict[str, dict] = {}
    numeric = [
        "steps_to_commit",
        "inappropriate_commits",
        "inappropriate_overrides",
        "suppressed_conflict_commits",
        "relitigated_premises",
        "probes_run",
    ]
    for policy in policies:
        mine = [r for r in rows if r["policy"] == policy]
        summary[policy] = {"trials": len(mine), "accuracy": _mean([1.0 if r["correct"] else 0.0 for r in mine])}
        for metric in numeric:
            values = [float(r[metric]) for r in mine]
            summary[policy][metric] = _ci(values)

    result = {
        "config": {
            "n_trials": n_trials,
            "seed": seed,
            "policies": policies,
            "hidden_false_rate": hidden_false_rate,
            "two_session_rate": two_session_rate,
        },
        "summary": summary,
        "trials": rows,
    }
    if out_dir:
        _write_outputs(result, Path(out_dir))
    return result


def _mean(values: list[float]) -> float:
    return statistics.fmean(values) if values else 0.0


def _ci(values: list[float]) -> dict:
    """Mean with a normal-approximation 95 percent confidence interval."""
    mean = _mean(values)
    if len(values) < 2:
        return {"mean": mean, "ci_low": mean, "ci_high": mean}
    half = 1.96 * statistics.stdev(values) / (len(values) ** 0.5)
    return {"mean": mean, "ci_low": mean - half, "ci_high": mean + half}


def _write_outputs(result: dict, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "summary.json").write_text(
        json.dumps({k: result[k] for k in ("config", "summary")}, indent=2, sort_keys=True),
        encoding="utf-8",
    )
    rows = result["trials"]
    with open(out_dir / "trials.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def format_table(result: dict) -> str:
    metrics = [
        ("steps_to_commit", "steps"),
        ("probes_run", "probes"),
        ("inappropriate_commits", "inappr-commits"),
        ("inappropriate_overrides", "inappr-overrides"),
        ("suppressed_conflict_commits", "suppressed"),
        ("relitigated_premises", "relitigated"),
    ]
    policies = result["config"]["policies"]
    header = f"{'metric':<18}" + "".join(f"{p:>24}" for p in policies)
    lines = [header, "-" * len(header)]
    for key, label in metrics:
        cells = []
        for p in policies:
            m = result["summary"][p][key]
            cells.append(f"{m['mean']:8.3f} [{m['ci_low']:6.3f},{m['ci_high']:6.3f}]")
        lines.append(f"{label:<18}" + "".join(f"{c:>24}" for c in cells))
    acc = "".join(f"{result['summary'][p]['accuracy']:>24.3f}" for p in policies)
    lines.append(f"{'accuracy':<18}" + acc)
    return "\n".join(lines)
