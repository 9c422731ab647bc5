"""JSON file formats for dessins, partitions and reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .monodromy import Constellation, PreConstellation
from .perm import Partition, Permutation


class FormatError(ValueError):
    """Malformed input; the message names the offending field."""


@dataclass(frozen=True)
class DessinFile:
    n: int
    sigma0: tuple[tuple[int, ...], ...]
    sigma1: tuple[tuple[int, ...], ...]
    name: str | None = None
    provenance: str | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def constellation(self, require_transitive: bool = True) -> PreConstellation:
        s0 = _perm("sigma0", self.sigma0, self.n)
        s1 = _perm("sigma1", self.sigma1, self.n)
        cls = Constellation if require_transitive else PreConstellation
        return cls.from_pair(s0, s1)

    @classmethod
    def from_constellation(cls, c: PreConstellation, name: str | None = None, provenance: str | None = None) -> "DessinFile":
        return cls(c.n, _cyc(c.sigma0), _cyc(c.sigma1), name, provenance)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"n": self.n, "sigma0": [list(c) for c in self.sigma0], "sigma1": [list(c) for c in self.sigma1]}
        if self.name is not None:
            out["name"] = self.name
        if self.provenance is not None:
            out["provenance"] = self.provenance
        return out

    @classmethod
    def from_json(cls, obj: Any) -> "DessinFile":
        if not isinstance(obj, dict):
            raise FormatError("dessin file: top level must be an object")
        if "n" not in obj:
            raise FormatError("dessin file: missing field 'n'")
        n = obj["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise FormatError(f"field 'n': expected a positive integer, got {n!r}")
        gens = []
        for key in ("sigma0", "sigma1"):
            if key not in obj:
                raise FormatError(f"dessin file: missing field {key!r}")
            gens.append(_parse_cycles(key, obj[key], n))
        return cls(n, gens[0], gens[1], obj.get("name"), obj.get("provenance"))


def _parse_cycles(key: str, raw: Any, n: int) -> tuple[tuple[int, ...], ...]:
    if not isinstance(raw, list):
        raise FormatError(f"field {key!r}: expected a list of cycles")
    seen: set[int] = set()
    out = []
    for cyc in raw:
        if not isinstance(cyc, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in cyc):
            raise FormatError(f"field {key!r}: each cycle must be a list of integers, got {cyc!r}")
        for x in cyc:
            if not 1 <= x <= n:
                raise FormatError(f"field {key!r}: point {x} outside 1..{n}")
            if x in seen:
                raise FormatError(f"field {key!r}: point {x} appears in two cycles")
            seen.add(x)
        out.append(tuple(cyc))
    return tuple(out)


def _perm(key: str, cycles, n: int) -> Permutation:
    try:
        return Permutation.from_cycles(cycles, n)
    except ValueError as exc:
        raise FormatError(f"field {key!r}: {exc}") from None


def _cyc(p: Permutation) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(c) for c in p.cycles())


def load_dessin(path: str | Path) -> DessinFile:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None
    return DessinFile.from_json(obj)


def save_dessin(d: DessinFile, path: str | Path) -> None:
    Path(path).write_text(dumps(d.to_json()) + "\n")


def partition_json(p: Partition) -> list[int]:
    return list(p)


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent."""
    return json.dumps(obj, indent=2, sort_keys=True)
