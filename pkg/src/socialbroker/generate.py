"""Seeded synthetic networks for load and property testing."""

from __future__ import annotations

import math
import random
import uuid
from dataclasses import dataclass

from .errors import ValidationError
from .graph import CollaborationEdge, SocialGraph
from .registry import (
    BindingTemplate,
    BusinessEntity,
    BusinessService,
    KeyedReference,
    Registry,
    TModel,
)

#: taxonomy every generated provider's service is filed under
GENERATED_TMODEL = "9e000000-0000-4000-8000-000000000001"
GENERATED_CATEGORY = KeyedReference(GENERATED_TMODEL, "generated", "test-service")


@dataclass(frozen=True)
class GenSpec:
    n_actors: int
    n_edges: int
    n_providers: int
    seed: int

    def validate(self) -> None:
        n = self.n_actors
        for name in ("n_actors", "n_edges", "n_providers", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValidationError(f"{name} must be an integer")
        if n < 1:
            raise ValidationError("n_actors must be positive")
        if not 0 <= self.n_edges <= n * (n - 1) // 2:
            raise ValidationError(f"n_edges must lie in [0, {n * (n - 1) // 2}]")
        if not 1 <= self.n_providers <= n:
            raise ValidationError(f"n_providers must lie in [1, {n}]")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")


def _key(rng: random.Random) -> str:
    return str(uuid.UUID(int=rng.getrandbits(128), version=4))


def _pair(index: int, n: int) -> tuple[int, int]:
    """Inverse of the row-major enumeration of pairs ``i < j`` over ``n`` items."""
    # row i starts at i*n - i*(i+1)/2
    i = int(n - 2 - math.floor(math.sqrt(-8 * index + 4 * n * (n - 1) - 7) / 2.0 - 0.5))
    start = i * n - i * (i + 1) // 2
    # guard against floating-point rounding at row boundaries
    while start > index:
        i -= 1
        start = i * n - i * (i + 1) // 2
    while index >= start + (n - i - 1):
        start += n - i - 1
        i += 1
    return i, i + 1 + (index - start)


def generate(spec: GenSpec) -> tuple[Registry, SocialGraph]:
    """Build stores that depend only on ``spec``."""
    spec.validate()
    rng = random.Random(spec.seed)
    n = spec.n_actors
    keys = [_key(rng) for _ in range(n)]

    registry = Registry()
    graph = SocialGraph()
    registry.register_tmodel(TModel(GENERATED_TMODEL, "generated-test-service"))
    for i, key in enumerate(keys):
        registry.register_business(BusinessEntity(key, f"Actor {i:05d}"))
        graph.add_actor(key)

    total = n * (n - 1) // 2
    for index in rng.sample(range(total), spec.n_edges):
        i, j = _pair(index, n)
        graph.add_collaboration(CollaborationEdge(keys[i], keys[j]))

    for i in sorted(rng.sample(range(n), spec.n_providers)):
        service = _key(rng)
        registry.publish_service(
            BusinessService(service, keys[i], f"Test service of actor {i:05d}", categories=[GENERATED_CATEGORY])
        )
        registry.publish_binding(
            BindingTemplate(_key(rng), service, f"https://actor{i:05d}.example/service", [GENERATED_TMODEL])
        )
    return registry, graph
