import json
import random

import pytest

from socialbroker import fixtures
from socialbroker.errors import SnapshotCorrupt
from socialbroker.snapshot import dumps, load_snapshot, write_snapshot

from helpers import random_triple


def test_empty_file(tmp_path):
    path = tmp_path / "s.jsonl"
    path.write_text("")
    registry, graph = load_snapshot(path)
    assert registry.counts() == {"business": 0, "service": 0, "binding": 0, "tmodel": 0}
    assert len(graph) == 0


def test_shipped_fixture_matches_builder():
    registry, graph = load_snapshot(fixtures.fixture_path())
    assert dumps(registry, graph) == dumps(*fixtures.build())


def test_round_trip_is_canonical(tmp_path, org_a):
    path = tmp_path / "s.jsonl"
    write_snapshot(path, *org_a)
    first = path.read_text()
    write_snapshot(path, *load_snapshot(path))
    assert path.read_text() == first
    assert first == dumps(*org_a)


@pytest.mark.parametrize("seed", range(10))
def test_line_order_does_not_matter(tmp_path, seed):
    registry, graph, *_ = random_triple(seed)
    lines = dumps(registry, graph).splitlines()
    random.Random(seed).shuffle(lines)
    path = tmp_path / "shuffled.jsonl"
    path.write_text("\n".join(lines) + "\n")
    assert dumps(*load_snapshot(path)) == dumps(registry, graph)


def test_service_before_business(tmp_path, org_a):
    lines = dumps(*org_a).splitlines()
    services = [l for l in lines if '"kind":"service"' in l]
    rest = [l for l in lines if l not in services]
    path = tmp_path / "s.jsonl"
    path.write_text("\n".join(services + rest))
    assert dumps(*load_snapshot(path)) == dumps(*org_a)


def test_truncated_last_line(tmp_path, org_a):
    text = dumps(*org_a)
    path = tmp_path / "s.jsonl"
    path.write_text(text[: len(text) - 20])
    with pytest.raises(SnapshotCorrupt) as info:
        load_snapshot(path)
    assert info.value.line == len(text.splitlines())


@pytest.mark.parametrize(
    "line, reason",
    [
        ('{"kind":"spaceship"}', "unknown record kind"),
        ("[1, 2]", "not a JSON object"),
        ('{"kind":"actor"}', "malformed actor"),
        ('{"kind":"edge","a":"a0000000-0000-4000-8000-000000000001","b":"a0000000-0000-4000-8000-000000000001"}', "self-loop"),
        ('{"kind":"service","service_key":"5e000000-0000-4000-8000-000000000099","business_key":"a0000000-0000-4000-8000-000000000099","name":"x"}', "no business"),
        ('{"kind":"business","business_key":"a0000000-0000-4000-8000-000000000001","name":"dup"}', "already registered"),
    ],
)
def test_corrupt_lines_are_located(tmp_path, org_a, line, reason):
    lines = dumps(*org_a).splitlines()
    lines.insert(3, line)
    path = tmp_path / "s.jsonl"
    path.write_text("\n".join(lines))
    with pytest.raises(SnapshotCorrupt) as info:
        load_snapshot(path)
    assert info.value.line == 4
    assert reason in info.value.reason


def test_atomic_write_leaves_no_temp_files(tmp_path, org_a):
    path = tmp_path / "s.jsonl"
    for _ in range(3):
        write_snapshot(path, *org_a)
    assert [p.name for p in tmp_path.iterdir()] == ["s.jsonl"]


def test_failed_write_keeps_previous_file(tmp_path, org_a, monkeypatch):
    path = tmp_path / "s.jsonl"
    write_snapshot(path, *org_a)
    before = path.read_text()

    def boom(*args):
        raise OSError("disk full")

    monkeypatch.setattr("socialbroker.snapshot.os.replace", boom)
    with pytest.raises(OSError):
        write_snapshot(path, *fixtures.build())
    assert path.read_text() == before
    assert [p.name for p in tmp_path.iterdir()] == ["s.jsonl"]


def test_field_names_are_snake_case(org_a):
    kinds = {}
    for line in dumps(*org_a).splitlines():
        obj = json.loads(line)
        kinds.setdefault(obj["kind"], set(obj))
    assert kinds["business"] == {"kind", "business_key", "name", "description", "contacts", "identifiers", "categories"}
    assert kinds["service"] == {"kind", "service_key", "business_key", "name", "description", "categories"}
    assert kinds["binding"] == {"kind", "binding_key", "service_key", "access_point", "tmodel_keys"}
    assert kinds["tmodel"] == {"kind", "tmodel_key", "name", "description", "overview_url"}
    assert kinds["actor"] == {"kind", "id"}
    assert kinds["edge"] == {"kind", "a", "b", "weight"}
