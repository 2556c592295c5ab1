"""Acyclic quivers: vertices 1..n, arrows as (source, target) pairs."""

from __future__ import annotations

import json
from graphlib import CycleError, TopologicalSorter

from .errors import DomainError


class Quiver:
    """A finite quiver without directed cycles.

    Vertices are labeled 1..n.  Arrows are a list of (source, target) pairs;
    parallel arrows are allowed.  Acyclicity is verified at construction.
    """

    def __init__(self, n: int, arrows):
        if n < 1:
            raise DomainError("a quiver needs at least one vertex")
        self.n = int(n)
        self.arrows = [(int(s), int(t)) for s, t in arrows]
        for s, t in self.arrows:
            if not (1 <= s <= n and 1 <= t <= n):
                raise DomainError(f"arrow ({s},{t}) outside vertices 1..{n}")
        graph = {v: set() for v in range(1, n + 1)}
        for s, t in self.arrows:
            graph[t].add(s)  # predecessors
        try:
            self.topological = tuple(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise DomainError("quiver has a directed cycle") from exc
        self.arrows_out = {v: [] for v in range(1, n + 1)}
        self.arrows_in = {v: [] for v in range(1, n + 1)}
        for a, (s, t) in enumerate(self.arrows):
            self.arrows_out[s].append(a)
            self.arrows_in[t].append(a)
        self._paths = self._enumerate_paths()

    def _enumerate_paths(self):
        """All directed paths as arrow-index tuples, including the n empty paths.

        Returned as {(source, target): [path, ...]}; finite since the quiver
        is acyclic.  The empty path at v has key (v, v) and value ().
        """
        paths = {}
        for v in range(1, self.n + 1):
            paths.setdefault((v, v), []).append(())
        # extend along topological order; iterate until stable (lengths <= n)
        frontier = [((v, v), ()) for v in range(1, self.n + 1)]
        while frontier:
            nxt = []
            for (src, at), path in frontier:
                for a in self.arrows_out[at]:
                    t = self.arrows[a][1]
                    newp = path + (a,)
                    paths.setdefault((src, t), []).append(newp)
                    nxt.append(((src, t), newp))
            frontier = nxt
        return paths

    def paths(self, src: int, tgt: int):
        return self._paths.get((src, tgt), [])

    def __repr__(self):
        return f"Quiver(n={self.n}, arrows={self.arrows})"

    def __eq__(self, other):
        return isinstance(other, Quiver) and other.n == self.n and other.arrows == self.arrows

    def __hash__(self):
        return hash((self.n, tuple(self.arrows)))

    @classmethod
    def from_json(cls, text: str) -> "Quiver":
        """Parse the quiver spec format {"vertices": n, "arrows": [[s,t], ...]}."""
        data = json.loads(text)
        if not isinstance(data, dict) or "vertices" not in data or "arrows" not in data:
            raise DomainError('quiver file must be {"vertices": n, "arrows": [[s,t], ...]}')
        return cls(data["vertices"], data["arrows"])

    @classmethod
    def load(cls, path) -> "Quiver":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def to_json(self) -> str:
        return json.dumps({"vertices": self.n, "arrows": [list(a) for a in self.arrows]})


def a_n_quiver(n: int) -> Quiver:
    """The linearly oriented quiver 1 -> 2 -> ... -> n."""
    return Quiver(n, [(i, i + 1) for i in range(1, n)])
