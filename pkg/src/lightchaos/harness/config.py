"""Run configuration: a flat key-value file (YAML or JSON) plus CLI overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import yaml

from ..exact import fmt, to_fraction
from ..verdicts import Budget

KEYS = (
    "system",
    "scheme",
    "resolution",
    "k_max",
    "p_max",
    "epsilon",
    "delta",
    "seed",
    "knots",
    "grid_pitch",
    "out_dir",
)

BUDGET_KEYS = {"k_max", "p_max", "epsilon", "knots", "grid_pitch"}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    budget: Budget = field(default_factory=Budget)
    system: str | None = None
    scheme: str | None = None
    resolution: int | None = None
    delta: Fraction | None = None
    out_dir: str = "runs"

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        unknown = set(kw) - set(KEYS)
        if unknown:
            raise KeyError(f"unknown config keys: {sorted(unknown)}")
        budget_kw = {k: kw.pop(k) for k in list(kw) if k in BUDGET_KEYS}
        for k in ("epsilon", "grid_pitch"):
            if k in budget_kw:
                budget_kw[k] = to_fraction(budget_kw[k])
        for k in ("k_max", "p_max", "knots"):
            if k in budget_kw:
                budget_kw[k] = int(budget_kw[k])
        if "delta" in kw:
            kw["delta"] = to_fraction(kw["delta"])
        if "seed" in kw:
            kw["seed"] = int(kw["seed"])
        if "resolution" in kw:
            kw["resolution"] = int(kw["resolution"])
        return replace(self, budget=self.budget.with_(**budget_kw), **kw)

    def to_json(self):
        return {
            "seed": self.seed,
            "budget": self.budget.to_json(),
            "system": self.system,
            "scheme": self.scheme,
            "resolution": self.resolution,
            "delta": fmt(self.delta) if self.delta is not None else None,
        }


def load_config(path: str | Path | None, **overrides) -> RunConfig:
    """Read a config file (YAML or JSON by suffix) and apply CLI overrides on top."""
    data = {}
    if path is not None:
        text = Path(path).read_text()
        data = json.loads(text) if str(path).endswith(".json") else (yaml.safe_load(text) or {})
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config must be a flat mapping")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig().with_overrides(**data)
