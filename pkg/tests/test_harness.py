"""Scripted-agent simulation: task generation, policy behavior, experiment outputs."""

import csv
import json

import pytest

from basisgov import BasisError
from basisgov.errors import INVALID_POLICY, INVALID_VALUE
from basisgov.harness import (
    POLICIES,
    format_table,
    generate_task,
    run_experiment,
    run_trial,
)


class TestTaskGeneration:
    def test_same_seed_same_task(self):
        assert generate_task(42) == generate_task(42)

    def test_shape_and_ranges(self):
        for seed in range(40):
            task = generate_task(seed)
            assert 2 <= len(task.premises) <= 4
            assert task.premises[0].pivot is True
            assert all(not tp.pivot for tp in task.premises[1:])
            assert 0.7 <= task.preferred_utility <= 1.0
            assert 0.1 <= task.fallback_utility <= 0.4
            for tp in task.premises:
                assert 0.6 <= tp.probe_discrimination <= 1.0
                assert 0.1 <= tp.probe_cost <= 0.5
            assert len(task.hidden_truths) == len(task.premises)

    def test_correct_action_tracks_hidden_truths(self):
        task = generate_task(3, hidden_false_rate=0.0)
        assert all(task.hidden_truths)
        assert task.correct_action == "preferred"
        task = generate_task(3, hidden_false_rate=1.0)
        assert not any(task.hidden_truths)
        assert task.correct_action == "fallback"

    def test_two_session_rate(self):
        assert generate_task(5, two_session_rate=0.0).sessions == 1
        seeds = [generate_task(s, two_session_rate=1.0).sessions for s in range(10)]
        assert all(s == 2 for s in seeds)


class TestTrials:
    def test_unknown_policy_is_rejected(self):
        with pytest.raises(BasisError) as e:
            run_trial(generate_task(1), "oracle")
        assert e.value.code == INVALID_POLICY

    def test_governed_never_commits_on_an_unprobed_false_premise(self):
        for seed in range(25):
            m = run_trial(generate_task(seed, hidden_false_rate=0.5), "governed")
            assert m.inappropriate_commits == 0
            assert m.suppressed_conflict_commits == 0
            assert m.committed_action in {"preferred", "fallback"}

    def test_governed_probes_before_preferring(self):
        # The pivot cannot commit on the assertion alone, so a preferred
        # commit implies at least one probe ran first.
        for seed in range(25):
            m = run_trial(generate_task(seed, hidden_false_rate=0.3), "governed")
            if m.committed_action == "preferred":
                assert m.probes_run >= 1

    def test_answer_centric_overrides_and_never_probes(self):
        for seed in range(10):
            m = run_trial(generate_task(seed, hidden_false_rate=0.5), "answer-centric")
            assert m.committed_action == "preferred"
            assert m.probes_run == 0

    def test_sycophantic_flags_suppression_when_truths_are_false(self):
        flagged = 0
        for seed in range(25):
            task = generate_task(seed, hidden_false_rate=0.6)
            m = run_trial(task, "sycophantic")
            assert m.committed_action == "preferred"
            assert m.probes_run == 0
            flagged += m.suppressed_conflict_commits
        assert flagged > 0

    def test_metrics_row_shape(self):
        row = run_trial(generate_task(9), "governed").to_dict()
        assert set(row) == {
            "policy", "seed", "steps_to_commit", "inappropriate_commits",
            "inappropriate_overrides", "suppressed_conflict_commits",
            "relitigated_premises", "probes_run", "committed_action", "correct",
        }


class TestExperiment:
    def test_rejects_bad_arguments(self):
        with pytest.raises(BasisError) as e:
            run_experiment(0)
        assert e.value.code == INVALID_VALUE
        with pytest.raises(BasisError) as e:
            run_experiment(2, policies=["governed", "oracle"])
        assert e.value.code == INVALID_POLICY

    def test_same_seed_reproduces_every_row(self):
        a = run_experiment(6, seed=13)
        b = run_experiment(6, seed=13)
        assert a["trials"] == b["trials"]
        assert a["summary"] == b["summary"]

    def test_policies_share_the_task_stream(self):
        result = run_experiment(5, seed=21)
        by_policy = {
            p: [r["seed"] for r in result["trials"] if r["policy"] == p]
            for p in POLICIES
        }
        seeds = list(by_policy.values())
        assert seeds[0] == seeds[1] == seeds[2]

    def test_directional_separation(self):
        result = run_experiment(30, seed=97, hidden_false_rate=0.4)
        s = result["summary"]
        assert s["governed"]["inappropriate_commits"]["mean"] == 0.0
        assert s["answer-centric"]["inappropriate_commits"]["mean"] > 0.2
        assert s["answer-centric"]["inappropriate_overrides"]["mean"] > 0.0
        assert s["governed"]["suppressed_conflict_commits"]["mean"] == 0.0
        assert s["sycophantic"]["suppressed_conflict_commits"]["mean"] > 0.2
        assert s["governed"]["accuracy"] > s["answer-centric"]["accuracy"]
        assert s["governed"]["accuracy"] > s["sycophantic"]["accuracy"]
        assert s["governed"]["probes_run"]["mean"] > 0.0

    def test_two_session_relitigation_gap(self, tmp_path):
        result = run_experiment(8, seed=11, two_session_rate=1.0)
        s = result["summary"]
        # Replay restores the settled basis; a fresh start re-argues everything.
        assert s["governed"]["relitigated_premises"]["mean"] == 0.0
        assert s["answer-centric"]["relitigated_premises"]["mean"] >= 2.0

    def test_out_dir_files(self, tmp_path):
        result = run_experiment(3, seed=5, out_dir=str(tmp_path))
        summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
        assert summary["config"]["n_trials"] == 3
        assert set(summary["summary"]) == set(POLICIES)
        with open(tmp_path / "trials.csv", newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 3 * len(POLICIES)
        assert rows[0]["policy"] == result["trials"][0]["policy"]

    def test_format_table_lists_policies_and_metrics(self):
        result = run_experiment(3, seed=5)
        table = format_table(result)
        for policy in POLICIES:
            assert policy in table
        for label in ("steps", "probes", "inappr-commits", "suppressed",
                      "relitigated", "accuracy"):
            assert label in table
