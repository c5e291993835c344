"""Target device description: size, connectivity, native gates, gate durations."""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from ..errors import TargetConfigError
from ..ir.gates import gate_names, lookup

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_NATIVE = frozenset({"PREPZ", "MEASZ", "RX", "RY", "RZ", "CZ"})
ENTANGLING = frozenset({"CZ", "CNOT", "SWAP", "CCNOT"})
DEFAULT_DURATIONS = {"RX": 1, "RY": 1, "RZ": 1, "CZ": 2, "PREPZ": 4, "MEASZ": 10}


def _default_duration(gate: str) -> int:
    if gate in DEFAULT_DURATIONS:
        return DEFAULT_DURATIONS[gate]
    return lookup(gate).num_qubits


@dataclass(frozen=True)
class TargetConfig:
    num_physical_qubits: int
    connectivity: str | tuple[tuple[int, int], ...] = "all"
    native: frozenset[str] = DEFAULT_NATIVE
    durations: dict[str, int] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        n = self.num_physical_qubits
        if not isinstance(n, int) or n < 1:
            raise TargetConfigError(f"qubit count must be a positive integer, got {n!r}")
        if n > 254:
            raise TargetConfigError("at most 254 physical qubits are addressable")
        conn = self.connectivity
        if isinstance(conn, str):
            if conn not in ("all", "linear"):
                raise TargetConfigError(f"unknown connectivity {conn!r}")
        else:
            edges = []
            for e in conn:
                a, b = (int(x) for x in e)
                if a == b or not (0 <= a < n and 0 <= b < n):
                    raise TargetConfigError(f"bad edge {e!r} for {n} qubits")
                edges.append((min(a, b), max(a, b)))
            object.__setattr__(self, "connectivity", tuple(sorted(set(edges))))
        native = frozenset(self.native)
        unknown = native - gate_names()
        if unknown:
            raise TargetConfigError(f"unknown native gates {sorted(unknown)}")
        if not {"PREPZ", "MEASZ"} <= native or not native & ENTANGLING:
            raise TargetConfigError("native set must include PREPZ, MEASZ and an entangling gate")
        object.__setattr__(self, "native", native)
        for g, d in self.durations.items():
            if g not in gate_names() or not isinstance(d, int) or d < 1:
                raise TargetConfigError(f"bad duration {g}={d!r}")
        if n > 1 and not self._connected():
            raise TargetConfigError("connectivity graph is not connected")

    def duration(self, gate: str) -> int:
        return self.durations.get(gate, _default_duration(gate))

    @property
    def all_to_all(self) -> bool:
        return self.connectivity == "all"

    @cached_property
    def neighbours(self) -> list[list[int]]:
        n = self.num_physical_qubits
        if self.connectivity == "all":
            return [[j for j in range(n) if j != i] for i in range(n)]
        if self.connectivity == "linear":
            edges = [(i, i + 1) for i in range(n - 1)]
        else:
            edges = self.connectivity
        adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        return [sorted(x) for x in adj]

    def adjacent(self, a: int, b: int) -> bool:
        return self.all_to_all or b in self.neighbours[a]

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.num_physical_qubits) for b in self.neighbours[a] if a < b]

    def shortest_path(self, a: int, b: int) -> list[int]:
        """BFS path from ``a`` to ``b`` inclusive; ties go to the lowest-numbered neighbour."""
        prev = {a: None}
        queue = deque([a])
        while queue:
            u = queue.popleft()
            if u == b:
                break
            for v in self.neighbours[u]:
                if v not in prev:
                    prev[v] = u
                    queue.append(v)
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        return path[::-1]

    def _connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            for v in self.neighbours[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.num_physical_qubits

    def to_dict(self) -> dict:
        conn = self.connectivity if isinstance(self.connectivity, str) else [list(e) for e in self.connectivity]
        return {
            "qubits": self.num_physical_qubits,
            "connectivity": conn,
            "native": sorted(self.native),
            "durations": dict(sorted(self.durations.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TargetConfig":
        known = {"qubits", "connectivity", "native", "durations"}
        extra = set(d) - known
        if extra:
            raise TargetConfigError(f"unknown target keys {sorted(extra)}")
        if "qubits" not in d:
            raise TargetConfigError("target config needs 'qubits'")
        conn = d.get("connectivity", "all")
        if not isinstance(conn, str):
            conn = tuple(tuple(e) for e in conn)
        return cls(
            num_physical_qubits=d["qubits"],
            connectivity=conn,
            native=frozenset(d.get("native", DEFAULT_NATIVE)),
            durations=dict(d.get("durations", {})),
        )

    @classmethod
    def from_toml(cls, text: str) -> "TargetConfig":
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise TargetConfigError(f"bad target config: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str | Path) -> "TargetConfig":
        return cls.from_toml(Path(path).read_text())
