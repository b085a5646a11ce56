"""Seeded builders for random graphs, registries and requests."""

from __future__ import annotations

import random
import uuid

from socialbroker.graph import CollaborationEdge, SocialGraph
from socialbroker.registry import (
    BindingTemplate,
    BusinessEntity,
    BusinessService,
    KeyedReference,
    Registry,
    ServiceRequirements,
    TModel,
    load_records,
)
from socialbroker.requirements import (
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
    SocialRequirement,
    WithinHops,
)


def key(rng: random.Random) -> str:
    return str(uuid.UUID(int=rng.getrandbits(128), version=4))


def random_graph(rng: random.Random, n: int, p: float) -> SocialGraph:
    nodes = [key(rng) for _ in range(n)]
    graph = SocialGraph()
    for v in nodes:
        graph.add_actor(v)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                graph.add_collaboration(CollaborationEdge(nodes[i], nodes[j]))
    return graph


TAXONOMIES = [f"7a000000-0000-4000-8000-00000000000{i}" for i in range(1, 4)]
VALUES = ["reports", "audit", "design"]
WORDS = ["Advert", "report", "Audit", "campaign", "design", "survey"]


def random_records(rng: random.Random, owners: list[str]) -> list:
    """tModels, one business per owner, 0-2 services each, 0-2 bindings per service."""
    records: list = [TModel(t, f"taxonomy-{i}") for i, t in enumerate(TAXONOMIES)]

    def refs(k: int) -> list[KeyedReference]:
        return [KeyedReference(rng.choice(TAXONOMIES), "cat", rng.choice(VALUES)) for _ in range(k)]

    for i, owner in enumerate(owners):
        records.append(BusinessEntity(owner, f"Business {i}", categories=refs(rng.randint(0, 1))))
        for _ in range(rng.randint(0, 2)):
            skey = key(rng)
            words = " ".join(rng.sample(WORDS, rng.randint(1, 3)))
            records.append(BusinessService(skey, owner, f"{words} service", rng.choice(["", words.upper()]), refs(rng.randint(0, 2))))
            for _ in range(rng.randint(0, 2)):
                records.append(BindingTemplate(key(rng), skey, "https://x.example", rng.sample(TAXONOMIES, rng.randint(0, 2))))
    return records


def random_service_req(rng: random.Random) -> ServiceRequirements:
    return ServiceRequirements(
        categories=[KeyedReference(rng.choice(TAXONOMIES), "", rng.choice(VALUES)) for _ in range(rng.choice([0, 0, 1]))],
        keywords=rng.sample(["adv", "REPORT", "audit", "ign", "sur", "service"], rng.choice([0, 0, 1])),
        required_tmodels=rng.sample(TAXONOMIES, rng.choice([0, 0, 1])),
    )


def random_anchor(rng: random.Random, actors: list[str]) -> str:
    return CONSUMER if not actors or rng.random() < 0.7 else rng.choice(actors)


def random_social(rng: random.Random, actors: list[str], max_int: int = 4) -> SocialRequirement:
    constraints = []
    for _ in range(rng.choice([0, 1, 1, 2, 3])):
        kind = rng.randrange(4)
        if kind == 0:
            constraints.append(WithinHops(random_anchor(rng, actors), rng.randint(0, max_int)))
        elif kind == 1:
            constraints.append(CollaboratedWith(random_anchor(rng, actors)))
        elif kind == 2:
            constraints.append(MinDegree(rng.randint(0, max_int)))
        else:
            constraints.append(ConnectedTo(random_anchor(rng, actors)))
    ranking = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.randrange(4)
        metric = [HopsTo(random_anchor(rng, actors)), Degree(), Closeness(), Betweenness()][kind]
        ranking.append(RankingCriterion(metric, rng.choice(list(Direction))))
    return SocialRequirement(tuple(constraints), tuple(ranking))


def random_triple(seed: int, default_ranking: bool = False):
    """A (registry, graph, consumer, service_req, social_req) tuple with ≤ 20 providers."""
    rng = random.Random(seed)
    graph = random_graph(rng, rng.randint(2, 20), rng.uniform(0.05, 0.4))
    actors = graph.actors()
    outsiders = [key(rng) for _ in range(rng.randint(0, 3))]
    owners = rng.sample(actors, min(len(actors), rng.randint(1, 17))) + outsiders
    registry = Registry()
    load_records(registry, random_records(rng, owners))
    consumer = rng.choice(actors)
    social = random_social(rng, actors)
    if default_ranking:
        social = SocialRequirement(social.constraints)
    return registry, graph, consumer, random_service_req(rng), social
