"""
Finding a report writer through partners
========================================

Organization A needs a performance report written for an advertisement
campaign. Three registered organizations (F, H, J) offer that service. A only
wants providers it, or one of its direct partners, has worked with, and it
prefers closer collaborators.
"""

from socialbroker import BrokerRequest, ServiceRequirements, broker_query, parse_social_requirement
from socialbroker import fixtures

registry, graph = fixtures.build()
ORG = fixtures.ORG
name = {key: letter for letter, key in ORG.items()}

# %%
# The partnership network. B, C, D and E have no recorded partners.
for edge in graph.edges():
    print(f"{name[edge.a]} -- {name[edge.b]}")

# %%
# Step one is a plain registry search: who files a service under the
# "performance-report" category?
service_req = ServiceRequirements(categories=[fixtures.PERFORMANCE_REPORT])
for match in registry.find_services(service_req):
    print(name[match.provider_key], match.service.name)

# %%
# "A or a direct partner of A has worked with them" is the two-hop
# neighbourhood of A. With no RANK BY clause, providers are ordered by hop
# distance from the consumer.
social = parse_social_requirement("within_hops(consumer, 2)")
response = broker_query(BrokerRequest(ORG["A"], service_req, social), registry, graph)

for p in response.providers:
    hops = p.scores[0][1]
    print(f"#{p.rank} {p.provider.name} ({hops} hops) at {p.bindings[0].access_point}")
print("excluded:", response.excluded_count)

# %%
# H is A's direct partner, F is reached through G, and J sits three hops
# away, so it is filtered out.
assert [p.provider.business_key for p in response.providers] == [ORG["H"], ORG["F"]]
