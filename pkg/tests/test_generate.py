import itertools

import pytest

from socialbroker.broker import BrokerRequest, broker_query
from socialbroker.errors import ValidationError
from socialbroker.generate import GENERATED_CATEGORY, GenSpec, _pair, generate
from socialbroker.registry import ServiceRequirements
from socialbroker.requirements import parse_social_requirement
from socialbroker.snapshot import dumps


def test_pair_decoding_enumerates_all_pairs():
    for n in range(2, 30):
        expected = list(itertools.combinations(range(n), 2))
        assert [_pair(i, n) for i in range(len(expected))] == expected


def test_isolated_network_answers_nothing():
    registry, graph = generate(GenSpec(n_actors=10, n_edges=0, n_providers=3, seed=7))
    assert len(graph) == 10 and graph.edge_count() == 0
    req = ServiceRequirements(categories=[GENERATED_CATEGORY])
    providers = {m.provider_key for m in registry.find_services(req)}
    assert len(providers) == 3
    for consumer in graph.actors():
        for text in ("connected_to(consumer)", "within_hops(consumer, 5)", "collaborated_with(consumer)"):
            response = broker_query(BrokerRequest(consumer, req, parse_social_requirement(text)), registry, graph)
            if consumer in providers:
                # the consumer itself sits at distance 0
                assert [p.provider.business_key for p in response.providers] == [consumer]
            else:
                assert response.providers == ()


def test_same_spec_same_bytes():
    spec = GenSpec(50, 120, 10, seed=2**64 - 1)
    assert dumps(*generate(spec)) == dumps(*generate(spec))
    assert dumps(*generate(spec)) != dumps(*generate(GenSpec(50, 120, 10, seed=0)))


def test_generated_store_invariants():
    registry, graph = generate(GenSpec(n_actors=20, n_edges=40, n_providers=8, seed=42))
    assert len(graph) == 20 and graph.edge_count() == 40
    businesses = {b.business_key for b in registry.businesses()}
    assert businesses == set(graph.actors())
    services = registry.services()
    assert len(services) == 8 and len({s.business_key for s in services}) == 8
    tmodels = {t.tmodel_key for t in registry.tmodels()}
    for s in services:
        assert s.business_key in businesses
        bindings = registry.bindings_of(s.service_key)
        assert len(bindings) == 1 and set(bindings[0].tmodel_keys) <= tmodels
    edges = {(e.a, e.b) for e in graph.edges()}
    assert len(edges) == 40 and all(a != b for a, b in edges)
    for v in graph.actors():
        for w in graph.neighbors(v):
            assert v in graph.neighbors(w)
    assert sum(graph.degree(v) for v in graph.actors()) == 80


def test_complete_graph_spec():
    _, graph = generate(GenSpec(6, 15, 1, seed=1))
    assert all(graph.degree(v) == 5 for v in graph.actors())


@pytest.mark.parametrize(
    "spec",
    [
        GenSpec(0, 0, 1, 1),
        GenSpec(5, 11, 1, 1),
        GenSpec(5, -1, 1, 1),
        GenSpec(5, 3, 0, 1),
        GenSpec(5, 3, 6, 1),
        GenSpec(5, 3, 2, -1),
        GenSpec(5, 3, 2, 2**64),
    ],
)
def test_bounds(spec):
    with pytest.raises(ValidationError):
        generate(spec)
