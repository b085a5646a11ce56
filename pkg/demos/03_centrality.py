"""
Centrality on a synthetic partner network
=========================================

Degree, closeness and betweenness for a seeded random network, plus the
ranking they induce when used as broker criteria.
"""

from socialbroker import BrokerRequest, ServiceRequirements, broker_query, parse_social_requirement
from socialbroker.generate import GENERATED_CATEGORY, GenSpec, generate

registry, graph = generate(GenSpec(n_actors=40, n_edges=70, n_providers=12, seed=2024))
print(len(graph), "actors,", graph.edge_count(), "edges")

# %%
# The five most central actors by betweenness.
top = sorted(graph.actors(), key=lambda a: -graph.betweenness(a))[:5]
for actor in top:
    m = graph.metrics(actor)
    print(f"{registry.get_business_detail(actor).name}: degree={m['degree']} "
          f"closeness={m['closeness']:.3f} betweenness={m['betweenness']:.1f}")

# %%
# Broker providers that are well connected and reachable from the consumer,
# best brokers first, then the closest.
consumer = top[0]
social = parse_social_requirement("connected_to(consumer) AND min_degree(3) RANK BY betweenness, hops(consumer)")
response = broker_query(
    BrokerRequest(consumer, ServiceRequirements(categories=[GENERATED_CATEGORY]), social), registry, graph
)
for p in response.providers:
    values = ", ".join(f"{c}={v:.4g}" if v is not None else f"{c}=unreachable" for c, v in p.scores)
    print(f"#{p.rank} {p.provider.name}: {values}")
print("excluded:", response.excluded_count)
