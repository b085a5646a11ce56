"""The ten-organization partnership network used throughout the tests.

Organization A looks for someone to write a product performance report.
F, H and J publish such a service. A has worked with H and G directly; G has
worked with F. J is only reachable through H and I, three hops away. B, C, D
and E are registered but have no known partnerships.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .graph import CollaborationEdge, SocialGraph
from .registry import (
    BindingTemplate,
    BusinessEntity,
    BusinessService,
    Contact,
    KeyedReference,
    Registry,
    TModel,
    load_records,
)

LETTERS = "ABCDEFGHIJ"

#: business key (and actor id) of each organization, by letter
ORG = {letter: f"a0000000-0000-4000-8000-{i:012d}" for i, letter in enumerate(LETTERS, start=1)}

REPORTS_TMODEL = "7e000000-0000-4000-8000-000000000001"
PERFORMANCE_REPORT = KeyedReference(REPORTS_TMODEL, "report type", "performance-report")

PROVIDERS = ("F", "H", "J")
EDGES = (("A", "H"), ("A", "G"), ("G", "F"), ("H", "I"), ("I", "J"))


def service_key(letter: str) -> str:
    return f"5e000000-0000-4000-8000-{LETTERS.index(letter) + 1:012d}"


def binding_key(letter: str) -> str:
    return f"b1000000-0000-4000-8000-{LETTERS.index(letter) + 1:012d}"


def records() -> list:
    out: list = [
        TModel(
            tmodel_key=REPORTS_TMODEL,
            name="reports",
            description="Taxonomy and interface for commissioned business reports",
            overview_url="https://reports.example/spec/v1",
        )
    ]
    for letter in LETTERS:
        slug = letter.lower()
        out.append(
            BusinessEntity(
                business_key=ORG[letter],
                name=f"Organization {letter}",
                description=f"Partner organization {letter}",
                contacts=[Contact(name=f"Office {letter}", email=f"office@{slug}.example")],
            )
        )
    for letter in PROVIDERS:
        slug = letter.lower()
        out.append(
            BusinessService(
                service_key=service_key(letter),
                business_key=ORG[letter],
                name="Performance report writing",
                description="Product performance reports highlighting new features for advertisement campaigns",
                categories=[PERFORMANCE_REPORT],
            )
        )
        out.append(
            BindingTemplate(
                binding_key=binding_key(letter),
                service_key=service_key(letter),
                access_point=f"https://{slug}.example/reports",
                tmodel_keys=[REPORTS_TMODEL],
            )
        )
    return out


def build() -> tuple[Registry, SocialGraph]:
    registry = Registry()
    load_records(registry, records())
    graph = SocialGraph()
    for letter in LETTERS:
        graph.add_actor(ORG[letter])
    for a, b in EDGES:
        graph.add_collaboration(CollaborationEdge(ORG[a], ORG[b]))
    return registry, graph


def fixture_path() -> Path:
    """Path of the shipped snapshot file holding this network."""
    return Path(str(resources.files("socialbroker") / "data" / "organization_a.jsonl"))
