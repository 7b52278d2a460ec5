"""Gateway configuration: listen address, basis directory, policy knobs.

Config is a flat JSON file. The path comes from an explicit argument or the
BASISGOV_CONFIG environment variable; absent both, defaults apply. Unknown
keys are rejected so typos fail loudly instead of silently running defaults.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import BAD_CONFIG, BasisError
from ..model import PolicyConfig
from ..slices import DEFAULT_MAX_ITEMS

CONFIG_ENV_VAR = "BASISGOV_CONFIG"

_POLICY_KEYS = {"probe_threshold", "cost_weight", "contested_gate_count", "interaction_budget"}
_TOP_KEYS = {
    "listen_host",
    "listen_port",
    "basis_dir",
    "expert_token",
    "expert_actor",
    "slice_max_items",
    "policy",
}


@dataclass
class GatewayConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8410
    basis_dir: Optional[str] = None
    expert_token: Optional[str] = None
    expert_actor: str = "expert"
    slice_max_items: int = DEFAULT_MAX_ITEMS
    policy: dict = field(default_factory=dict)

    def policy_config(self) -> PolicyConfig:
        try:
            return PolicyConfig(**self.policy)
        except TypeError as exc:
            raise BasisError(BAD_CONFIG, f"bad policy config: {exc}")

    def to_dict(self) -> dict:
        return {
            "listen_host": self.listen_host,
            "listen_port": self.listen_port,
            "basis_dir": self.basis_dir,
            "expert_token": self.expert_token,
            "expert_actor": self.expert_actor,
            "slice_max_items": self.slice_max_items,
            "policy": dict(self.policy),
        }


def load_config(path: str | Path | None = None) -> GatewayConfig:
    """Load config from ``path``, the env var, or defaults, in that order."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return GatewayConfig()
    path = Path(path)
    if not path.exists():
        raise BasisError(BAD_CONFIG, f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BasisError(BAD_CONFIG, f"config is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise BasisError(BAD_CONFIG, "config root must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise BasisError(BAD_CONFIG, f"unknown config keys: {sorted(unknown)}")
    policy = raw.get("policy", {})
    if not isinstance(policy, dict):
        raise BasisError(BAD_CONFIG, "policy must be a JSON object")
    bad_policy = set(policy) - _POLICY_KEYS
    if bad_policy:
        raise BasisError(BAD_CONFIG, f"unknown policy keys: {sorted(bad_policy)}")
    config = GatewayConfig(**{**{"policy": {}}, **raw})
    config.policy_config()  # validate values eagerly
    if config.slice_max_items < 4:
        raise BasisError(BAD_CONFIG, "slice_max_items must be at least 4")
    return config
