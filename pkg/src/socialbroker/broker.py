"""The brokerage pipeline: functional search, social filter, social ranking.

The registry answers which providers *can* deliver the service; the social
graph decides which of them the consumer should trust, and in what order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Any, Callable

from .errors import UnknownConsumer
from .graph import UNREACHABLE, SocialGraph
from .registry import (
    BindingTemplate,
    BusinessEntity,
    BusinessService,
    Registry,
    ServiceRequirements,
    record_to_json,
)
from .requirements import (
    CONSUMER,
    Betweenness,
    Closeness,
    CollaboratedWith,
    ConnectedTo,
    Degree,
    Direction,
    HopsTo,
    MinDegree,
    RankingCriterion,
    SocialConstraint,
    SocialRequirement,
    WithinHops,
)

Score = float | int | None


@dataclass(frozen=True)
class BrokerRequest:
    consumer: str
    service_req: ServiceRequirements = ServiceRequirements()
    social_req: SocialRequirement = SocialRequirement()


@dataclass(frozen=True)
class RankedProvider:
    provider: BusinessEntity
    matched_services: tuple[BusinessService, ...]
    scores: tuple[tuple[RankingCriterion, Score], ...]
    rank: int
    bindings: tuple[BindingTemplate, ...] = ()


@dataclass(frozen=True)
class BrokerResponse:
    providers: tuple[RankedProvider, ...] = ()
    excluded_count: int = 0


class _Hops:
    """Per-query cache of BFS distance maps keyed by anchor."""

    def __init__(self, graph: SocialGraph):
        self.graph = graph
        self._maps: dict[str, dict[str, int]] = {}

    def __call__(self, anchor: str, actor: str) -> int | None:
        if anchor not in self.graph:
            return UNREACHABLE
        if anchor not in self._maps:
            self._maps[anchor] = self.graph.distances_from(anchor)
        return self._maps[anchor].get(actor, UNREACHABLE)


def _bind(anchor: str, consumer: str) -> str:
    return consumer if anchor == CONSUMER else anchor


def evaluate_constraint(
    c: SocialConstraint,
    provider: str,
    consumer: str,
    g: SocialGraph,
    hops: Callable[[str, str], int | None] | None = None,
) -> bool:
    """Whether ``provider`` satisfies one social constraint.

    A provider missing from the graph fails every anchored constraint and
    any positive degree bound; that is a ``False`` result, not an error.
    """
    if consumer not in g:
        raise UnknownConsumer(f"consumer {consumer} is not in the social graph")
    if hops is None:
        hops = _Hops(g)
    if isinstance(c, MinDegree):
        degree = g.degree(provider) if provider in g else 0
        return degree >= c.n
    if provider not in g:
        return False
    d = hops(_bind(c.anchor, consumer), provider)
    if d is UNREACHABLE:
        return False
    if isinstance(c, WithinHops):
        return d <= c.k
    if isinstance(c, CollaboratedWith):
        return d <= 1
    if isinstance(c, ConnectedTo):
        return True
    raise TypeError(f"not a social constraint: {c!r}")


def score(
    criterion: RankingCriterion,
    provider: str,
    consumer: str,
    g: SocialGraph,
    hops: Callable[[str, str], int | None] | None = None,
) -> Score:
    """Metric value of ``provider``; ``None`` when it cannot be computed."""
    metric = criterion.metric
    if provider not in g:
        return UNREACHABLE
    if isinstance(metric, HopsTo):
        return (hops or _Hops(g))(_bind(metric.anchor, consumer), provider)
    if isinstance(metric, Degree):
        return g.degree(provider)
    if isinstance(metric, Closeness):
        return g.closeness(provider)
    if isinstance(metric, Betweenness):
        return g.betweenness(provider)
    raise TypeError(f"not a metric: {metric!r}")


def sort_key(criteria, scores, provider_key: str) -> tuple:
    # missing values go last whichever the direction
    parts = []
    for criterion, value in zip(criteria, scores):
        if value is None:
            parts.append((1, 0))
        elif criterion.direction is Direction.ASC:
            parts.append((0, value))
        else:
            parts.append((0, -value))
    return (tuple(parts), provider_key)


def broker_query(request: BrokerRequest, registry: Registry, graph: SocialGraph) -> BrokerResponse:
    """Run one request through search, filtering and ranking.

    Both stores are read through snapshots taken up front, so concurrent
    writers never leak a half-applied state into the answer.
    """
    registry = registry.snapshot()
    graph = graph.snapshot()
    consumer = request.consumer
    if consumer not in graph:
        raise UnknownConsumer(f"consumer {consumer} is not in the social graph")
    social = request.social_req
    hops = _Hops(graph)

    matches = registry.find_services(request.service_req)
    survivors = []
    excluded = 0
    for provider_key, group in groupby(matches, key=lambda m: m.provider_key):
        if not all(evaluate_constraint(c, provider_key, consumer, graph, hops) for c in social.constraints):
            excluded += 1
            continue
        services = tuple(m.service for m in group)
        values = tuple(score(r, provider_key, consumer, graph, hops) for r in social.ranking)
        survivors.append((sort_key(social.ranking, values, provider_key), provider_key, services, values))

    survivors.sort(key=lambda item: item[0])
    providers = []
    rank = 0
    previous = None
    for position, (key, provider_key, services, values) in enumerate(survivors, start=1):
        if key[0] != previous:
            rank, previous = position, key[0]
        bindings = tuple(b for s in services for b in registry.bindings_of(s.service_key))
        providers.append(
            RankedProvider(
                provider=registry.get_business_detail(provider_key),
                matched_services=services,
                scores=tuple(zip(social.ranking, values)),
                rank=rank,
                bindings=bindings,
            )
        )
    return BrokerResponse(providers=tuple(providers), excluded_count=excluded)


def response_to_json(response: BrokerResponse) -> dict[str, Any]:
    return {
        "providers": [
            {
                "rank": p.rank,
                "business": record_to_json(p.provider),
                "services": [record_to_json(s) for s in p.matched_services],
                "bindings": [record_to_json(b) for b in p.bindings],
                "scores": [{"criterion": str(c), "value": v} for c, v in p.scores],
            }
            for p in response.providers
        ],
        "excluded_count": response.excluded_count,
    }
