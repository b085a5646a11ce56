"""Line-delimited JSON snapshots of both stores.

One object per line, discriminated by ``"kind"``. Loading applies records in
dependency order (tModels, businesses and actors; then services and edges;
then bindings) so a file need not be topologically ordered. Dumps are canonical: records are
grouped by kind and sorted by key, JSON keys are sorted.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable

from .errors import BrokerError, SnapshotCorrupt
from .graph import CollaborationEdge, SocialGraph
from .registry import (
    Registry,
    binding_from_json,
    business_from_json,
    record_to_json,
    service_from_json,
    tmodel_from_json,
)

KINDS = ("business", "service", "binding", "tmodel", "actor", "edge")
_PHASE = {"tmodel": 0, "business": 0, "actor": 0, "service": 1, "edge": 1, "binding": 2}


def dump_lines(registry: Registry, graph: SocialGraph) -> list[str]:
    def line(kind: str, body: dict[str, Any]) -> str:
        return json.dumps({"kind": kind, **body}, sort_keys=True, separators=(",", ":"))

    out = [line("tmodel", record_to_json(t)) for t in registry.tmodels()]
    out += [line("business", record_to_json(b)) for b in registry.businesses()]
    out += [line("service", record_to_json(s)) for s in registry.services()]
    out += [line("binding", record_to_json(b)) for b in registry.bindings()]
    out += [line("actor", {"id": a}) for a in graph.actors()]
    out += [line("edge", {"a": e.a, "b": e.b, "weight": e.weight}) for e in graph.edges()]
    return out


def dumps(registry: Registry, graph: SocialGraph) -> str:
    return "".join(line + "\n" for line in dump_lines(registry, graph))


def write_snapshot(path: str | os.PathLike, registry: Registry, graph: SocialGraph) -> None:
    """Write atomically: temp file in the same directory, then rename."""
    path = Path(path)
    text = dumps(registry.snapshot(), graph.snapshot())
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_lines(lines: Iterable[str]) -> list[tuple[int, str, dict[str, Any]]]:
    """Decode lines into ``(line_number, kind, body)``; blank lines are skipped."""
    records = []
    for number, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SnapshotCorrupt(number, f"invalid JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise SnapshotCorrupt(number, "record is not a JSON object")
        kind = obj.pop("kind", None)
        if kind not in KINDS:
            raise SnapshotCorrupt(number, f"unknown record kind {kind!r}")
        records.append((number, kind, obj))
    return records


def apply_records(
    records: list[tuple[int, str, dict[str, Any]]],
    registry: Registry,
    graph: SocialGraph,
) -> dict[str, int]:
    """Insert decoded records into the stores, returning per-kind counts.

    Domain errors propagate with a ``line`` attribute and a line-prefixed
    message. The caller is responsible for rollback.
    """
    counts = dict.fromkeys(KINDS, 0)
    # stable sort keeps file order within a phase
    for number, kind, body in sorted(records, key=lambda r: _PHASE[r[1]]):
        try:
            _apply(kind, body, registry, graph)
        except BrokerError as exc:
            exc.line = number
            exc.message = f"line {number}: {exc.message}"
            exc.args = (exc.message,)
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise SnapshotCorrupt(number, f"malformed {kind} record: {exc!r}") from None
        counts[kind] += 1
    return counts


def _apply(kind: str, body: dict[str, Any], registry: Registry, graph: SocialGraph) -> None:
    if kind == "tmodel":
        registry.register_tmodel(tmodel_from_json(body))
    elif kind == "business":
        registry.register_business(business_from_json(body))
    elif kind == "service":
        registry.publish_service(service_from_json(body))
    elif kind == "binding":
        registry.publish_binding(binding_from_json(body))
    elif kind == "actor":
        graph.add_actor(body["id"])
    else:
        graph.add_collaboration(CollaborationEdge(body["a"], body["b"], body.get("weight", 1.0)))


def load_snapshot(path: str | os.PathLike) -> tuple[Registry, SocialGraph]:
    """Rebuild both stores from a snapshot file.

    Any problem, syntactic or referential, is reported as ``SnapshotCorrupt``
    with the offending line number.
    """
    registry, graph = Registry(), SocialGraph()
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        apply_records(parse_lines(text.splitlines()), registry, graph)
    except SnapshotCorrupt:
        raise
    except BrokerError as exc:
        line = getattr(exc, "line", 0)
        raise SnapshotCorrupt(line, exc.message.removeprefix(f"line {line}: ")) from None
    return registry, graph
