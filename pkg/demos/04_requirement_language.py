"""
The social requirement language
===============================

Requirements are conjunctions of graph constraints followed by an optional
lexicographic ranking. Text and structure convert both ways.
"""

from socialbroker import RequirementSyntaxError, parse_social_requirement, serialize_social_requirement
from socialbroker.requirements import requirement_to_json

text = "min_degree(3) and Connected_To(consumer)  rank by degree desc, hops(consumer)"
req = parse_social_requirement(text)
print(req)

# %%
# Serialization is canonical: uppercase keywords, explicit directions.
canonical = serialize_social_requirement(req)
print(canonical)
assert parse_social_requirement(canonical) == req

# %%
# Anchors other than the consumer are quoted actor keys.
print(serialize_social_requirement(parse_social_requirement(
    "collaborated_with('a0000000-0000-4000-8000-000000000007')")))

# %%
# The JSON form used by programmatic API clients.
print(requirement_to_json(req))

# %%
# Errors point at the offending position.
for bad in ["within_hops(consumer 2)", "min_degree(-1)", "RANK BY popularity"]:
    try:
        parse_social_requirement(bad)
    except RequirementSyntaxError as exc:
        print(f"{bad!r}: {exc}")
        print(" " * (exc.position + 1) + "^")
