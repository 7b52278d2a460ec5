"""Randomized basis builders shared by the fuzz and equivalence tests."""

from __future__ import annotations

import random

from basisgov import Basis, BasisError
from basisgov.errors import CYCLE_DETECTED

AXES = ["teleological", "epistemic", "procedural"]


def make_engine() -> Basis:
    return Basis(durable=False)


def build_random_graph(basis: Basis, rng: random.Random, n_premises: int = None,
                       n_actions: int = None, edge_rate: float = 0.35):
    """Random acyclic basis built through engine calls only.

    Returns (premise_ids, action_ids, edges) where edges mirrors the links
    the engine accepted.
    """
    n_premises = n_premises if n_premises is not None else rng.randint(2, 8)
    n_actions = n_actions if n_actions is not None else rng.randint(1, 4)
    premise_ids = [
        basis.create_premise(rng.choice(AXES), f"claim {i}", actor="expert").id
        for i in range(n_premises)
    ]
    action_ids = [
        basis.create_action(f"plan {j}", round(rng.random(), 3), rng.random() < 0.7, "expert").id
        for j in range(n_actions)
    ]
    edges = []
    for i, src in enumerate(premise_ids):
        for dst in premise_ids[i + 1:] + action_ids:
            if rng.random() < edge_rate:
                try:
                    basis.add_link(src, dst, "supports", "expert")
                    edges.append((src, dst))
                except BasisError as exc:
                    assert exc.code == CYCLE_DETECTED
    return premise_ids, action_ids, edges


def random_statuses(rng: random.Random, premise_ids: list[str]) -> dict[str, str]:
    return {
        pid: rng.choice(["draft", "contested", "committed", "rejected"])
        for pid in premise_ids
    }
