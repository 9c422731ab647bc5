"""Run configuration with environment overrides."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace

_ENV = {
    "oracle_degree_guard": "DESSINKIT_ORACLE_GUARD",
    "exact_nielsen_bound": "DESSINKIT_NIELSEN_BOUND",
    "expansion_bound": "DESSINKIT_EXPAND_BOUND",
    "strict_m_prime": "DESSINKIT_STRICT_M_PRIME",
    "require_transitive": "DESSINKIT_REQUIRE_TRANSITIVE",
}


def _parse_bool(name: str, text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"{name}: expected a boolean, got {text!r}")


@dataclass(frozen=True)
class RunConfig:
    oracle_degree_guard: int = 9
    exact_nielsen_bound: int = 12
    expansion_bound: int = 64
    strict_m_prime: bool = False
    require_transitive: bool = True

    def __post_init__(self):
        for name in ("oracle_degree_guard", "exact_nielsen_bound", "expansion_bound"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "RunConfig":
        environ = os.environ if environ is None else environ
        values = {}
        for field, var in _ENV.items():
            if var in environ:
                raw = environ[var]
                if field in ("strict_m_prime", "require_transitive"):
                    values[field] = _parse_bool(var, raw)
                else:
                    try:
                        values[field] = int(raw)
                    except ValueError:
                        raise ValueError(f"{var}: expected an integer, got {raw!r}") from None
        cfg = cls(**values)
        return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})

    def as_json(self) -> dict:
        return asdict(self)
