"""Undirected collaboration graph and the centrality metrics built on it.

All metrics are unweighted: edge weights are stored and persisted but play no
part in distances or centralities. Neighbour iteration is always in sorted
key order, which makes every floating-point result independent of the order
in which actors and edges were added.
"""

from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import SelfLoop, UnknownActor, ValidationError
from .registry import is_key

#: Distance value for actors with no path between them.
UNREACHABLE = None


@dataclass(frozen=True)
class CollaborationEdge:
    a: str
    b: str
    weight: float = 1.0

    def pair(self) -> tuple[str, str]:
        return (self.a, self.b) if self.a <= self.b else (self.b, self.a)


class _State:
    """Immutable once published; carries its own metric caches."""

    __slots__ = ("adj", "_betweenness", "_sorted")

    def __init__(self, adj: Mapping[str, Mapping[str, float]]):
        self.adj = adj
        self._betweenness: dict[str, float] | None = None
        self._sorted: dict[str, tuple[str, ...]] | None = None

    def sorted_adj(self) -> dict[str, tuple[str, ...]]:
        if self._sorted is None:
            self._sorted = {v: tuple(sorted(nbrs)) for v, nbrs in self.adj.items()}
        return self._sorted


class SocialGraph:
    """Collaboration network keyed by business keys.

    Writers are serialized; each mutation publishes a new adjacency map so
    concurrent readers work on a consistent snapshot.
    """

    def __init__(self) -> None:
        self._state = _State({})
        self._write_lock = threading.Lock()

    def snapshot(self) -> SocialGraph:
        view = SocialGraph.__new__(SocialGraph)
        view._state = self._state
        view._write_lock = threading.Lock()
        return view

    @property
    def state(self) -> _State:
        return self._state

    def restore(self, state: _State) -> None:
        with self._write_lock:
            self._state = state

    # mutations ----------------------------------------------------------------

    def add_actor(self, actor: str) -> None:
        if not is_key(actor):
            raise ValidationError(f"malformed actor id {actor!r}")
        with self._write_lock:
            adj = self._state.adj
            if actor in adj:
                return
            self._state = _State({**adj, actor: {}})

    def add_collaboration(self, edge: CollaborationEdge) -> None:
        """Add or re-weight the undirected edge ``{edge.a, edge.b}``."""
        a, b, weight = edge.a, edge.b, edge.weight
        if a == b:
            raise SelfLoop(f"self-loop on {a}")
        if isinstance(weight, bool) or not isinstance(weight, (int, float)):
            raise ValidationError("edge weight must be a number")
        if not (weight > 0 and math.isfinite(weight)):
            raise ValidationError(f"edge weight must be positive and finite, got {weight}")
        with self._write_lock:
            adj = self._state.adj
            for end in (a, b):
                if end not in adj:
                    raise UnknownActor(f"no actor {end}")
            w = float(weight)
            self._state = _State({**adj, a: {**adj[a], b: w}, b: {**adj[b], a: w}})

    # inspection ---------------------------------------------------------------

    def __contains__(self, actor: object) -> bool:
        return actor in self._state.adj

    def __len__(self) -> int:
        return len(self._state.adj)

    def actors(self) -> list[str]:
        return sorted(self._state.adj)

    def edges(self) -> list[CollaborationEdge]:
        adj = self._state.adj
        return [
            CollaborationEdge(a, b, w)
            for a in sorted(adj)
            for b, w in sorted(adj[a].items())
            if a < b
        ]

    def edge_count(self) -> int:
        return sum(len(n) for n in self._state.adj.values()) // 2

    def _require(self, actor: str) -> None:
        if actor not in self._state.adj:
            raise UnknownActor(f"no actor {actor}")

    def neighbors(self, actor: str) -> list[str]:
        self._require(actor)
        return sorted(self._state.adj[actor])

    def weight(self, a: str, b: str) -> float | None:
        return self._state.adj.get(a, {}).get(b)

    # metrics ------------------------------------------------------------------

    def distances_from(self, src: str) -> dict[str, int]:
        """Hop counts from ``src`` to every actor reachable from it."""
        self._require(src)
        return _bfs(self._state.sorted_adj(), src)

    def hop_distance(self, src: str, dst: str) -> int | None:
        """Edge count of a shortest path, or ``UNREACHABLE``."""
        self._require(src)
        self._require(dst)
        if src == dst:
            return 0
        return self.distances_from(src).get(dst, UNREACHABLE)

    def within_hops(self, src: str, k: int) -> set[str]:
        if k < 0:
            raise ValidationError("hop bound must be non-negative")
        return {x for x, d in self.distances_from(src).items() if d <= k}

    def degree(self, actor: str) -> int:
        self._require(actor)
        return len(self._state.adj[actor])

    def closeness(self, actor: str) -> float:
        """Closeness normalised to the size of the actor's component.

        ``(r-1)/sum(d)`` over the ``r`` actors reachable from ``actor``
        (itself included), scaled by ``(r-1)/(n-1)``.
        """
        dist = self.distances_from(actor)
        n = len(self._state.adj)
        reach = len(dist)
        total = sum(dist.values())
        if total == 0 or n <= 1:
            return 0.0
        return (reach - 1) / total * (reach - 1) / (n - 1)

    def betweenness(self, actor: str) -> float:
        """Unnormalised shortest-path betweenness (each unordered pair once)."""
        self._require(actor)
        state = self._state
        if state._betweenness is None:
            state._betweenness = _brandes(state.sorted_adj())
        return state._betweenness[actor]

    def metrics(self, actor: str) -> dict[str, float]:
        return {
            "degree": self.degree(actor),
            "closeness": self.closeness(actor),
            "betweenness": self.betweenness(actor),
        }

    def __iter__(self) -> Iterator[str]:
        return iter(self.actors())


def _bfs(adj: Mapping[str, tuple[str, ...]], src: str) -> dict[str, int]:
    dist = {src: 0}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for w in adj[v]:
            if w not in dist:
                dist[w] = dv
                queue.append(w)
    return dist


def _brandes(adj: Mapping[str, tuple[str, ...]]) -> dict[str, float]:
    # Brandes (2001): one BFS per source, then dependency accumulation
    # in reverse BFS order.
    score = dict.fromkeys(adj, 0.0)
    for s in sorted(adj):
        order = []
        preds: dict[str, list[str]] = {v: [] for v in adj}
        sigma = dict.fromkeys(adj, 0)
        sigma[s] = 1
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(adj, 0.0)
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    # every unordered pair was counted from both ends
    return {v: c / 2.0 for v, c in score.items()}
