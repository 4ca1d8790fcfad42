"""Run configuration shared by the CLI and the verification suite."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .exact import is_prime


class ConfigError(ValueError):
    """Invalid configuration (a usage error)."""


@dataclass(frozen=True)
class Config:
    truncation_order: int = 32
    primes: tuple[int, ...] = (2, 3, 5, 7)
    h: str = "1"
    tolerance: float = 1e-9
    oracle_budget: int = 10**7
    seed: int = 42
    output: str = "json"
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        if self.oracle_budget <= 0:
            raise ConfigError("oracle budget must be positive")
        if self.truncation_order < 2:
            raise ConfigError("truncation order must be at least 2")
        for p in self.primes:
            if not isinstance(p, int) or not is_prime(p):
                raise ConfigError(f"{p} is not a prime")
        if self.output not in ("json", "text"):
            raise ConfigError("output must be json or text")

    @classmethod
    def load(cls, path: str | os.PathLike | None = None, **overrides) -> "Config":
        data: dict = {}
        if path is not None:
            try:
                data = json.loads(Path(path).read_text())
            except FileNotFoundError as exc:
                raise ConfigError(f"config file not found: {path}") from exc
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        aliases = {
            "truncationOrder": "truncation_order",
            "primeSet": "primes",
            "floatTolerance": "tolerance",
            "oracleBudget": "oracle_budget",
            "randomSeed": "seed",
            "outputFormat": "output",
        }
        kw = {}
        for k, v in data.items():
            kw[aliases.get(k, k)] = v
        env = os.environ.get("PADELIC_ORACLE_BUDGET")
        if env:
            kw["oracle_budget"] = int(env)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        unknown = set(kw) - {f for f in cls.__dataclass_fields__ if f != "extra"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "primes" in kw:
            kw["primes"] = tuple(kw["primes"])
        if "h" in kw:
            kw["h"] = str(kw["h"])
        return cls(**kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("extra")
        d["primes"] = list(self.primes)
        return d
