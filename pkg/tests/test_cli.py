import json
import os
import signal
import socket
import subprocess
import sys
import time
import urllib.request

import pytest

from socialbroker import fixtures
from socialbroker.cli import main
from socialbroker.generate import GENERATED_TMODEL
from socialbroker.server import BrokerApp
from socialbroker.snapshot import dumps, load_snapshot

ORG = fixtures.ORG
FIXTURE = str(fixtures.fixture_path())


@pytest.fixture
def loaded(tmp_path, capsys):
    snap = tmp_path / "snap.jsonl"
    assert main(["load", str(snap), FIXTURE]) == 0
    capsys.readouterr()
    return snap


def run_query(snap, capsys, *extra):
    code = main(["query", str(snap), "--consumer", ORG["A"], "--category", "reports:performance-report", *extra])
    return code, capsys.readouterr()


def test_load_counts(tmp_path, capsys):
    assert main(["load", str(tmp_path / "s.jsonl"), FIXTURE]) == 0
    assert capsys.readouterr().out.strip() == "business:10 service:3 binding:3 tmodel:1 actor:10 edge:5"


def test_load_empty_file(tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    assert main(["load", str(tmp_path / "s.jsonl"), str(empty)]) == 0
    assert capsys.readouterr().out.strip() == "business:0 service:0 binding:0 tmodel:0 actor:0 edge:0"


def test_load_twice_is_rejected(loaded, capsys):
    before = loaded.read_text()
    assert main(["load", str(loaded), FIXTURE]) == 2
    err = capsys.readouterr().err
    assert "duplicate_key" in err and "line 1:" in err  # the tModel line comes first
    assert loaded.read_text() == before


def test_load_reports_bad_line(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"kind":"actor","id":"a0000000-0000-4000-8000-000000000001"}\n{"kind":"business","business_key":"a0000000-0000-4000-8000-000000000001","name":""}\n')
    assert main(["load", str(tmp_path / "s.jsonl"), str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert not (tmp_path / "s.jsonl").exists()


def test_query_table(loaded, capsys):
    code, out = run_query(loaded, capsys, "--social", "within_hops(consumer,2)")
    assert code == 0
    rows = out.out.splitlines()
    assert rows[0].split() == ["RANK", "PROVIDER", "SERVICES", "SCORES"]
    assert rows[1].startswith("1") and "Organization H" in rows[1] and "hops(consumer) asc=1" in rows[1]
    assert rows[2].startswith("2") and "Organization F" in rows[2] and "hops(consumer) asc=2" in rows[2]
    assert "1 excluded" in rows[3]


def test_query_empty_exit_code(loaded, capsys):
    code, out = run_query(loaded, capsys, "--social", "min_degree(999)")
    assert code == 1
    assert len(out.out.splitlines()) == 2


def test_query_syntax_error(loaded, capsys):
    code, out = run_query(loaded, capsys, "--social", "within_hops(consumer 2)")
    assert code == 2
    assert "position 21" in out.err


def test_query_unknown_consumer(loaded, capsys):
    code = main(["query", str(loaded), "--consumer", "a0000000-0000-4000-8000-000000000099"])
    assert code == 2
    assert "unknown_consumer" in capsys.readouterr().err


def test_query_json_equals_api(loaded, capsys):
    code, out = run_query(loaded, capsys, "--social", "within_hops(consumer,2)", "--format=json")
    assert code == 0
    api = BrokerApp(*load_snapshot(loaded)).handle(
        "POST",
        "/broker/query",
        json.dumps(
            {
                "consumer": ORG["A"],
                "service": {"categories": [{"tmodel_key": fixtures.REPORTS_TMODEL, "key_value": "performance-report"}]},
                "social": "within_hops(consumer,2)",
            }
        ).encode(),
    )
    assert out.out.strip().encode() == api.encode()


def test_generate_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for out in (a, b):
        assert main(["generate", "--actors", "10", "--edges", "0", "--providers", "3", "--seed", "7", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out.splitlines()[0] == "business:10 service:3 binding:3 tmodel:1 actor:10 edge:0"


def test_generate_bounds(tmp_path, capsys):
    assert main(["generate", "--actors", "3", "--edges", "4", "--providers", "1", "--seed", "1", str(tmp_path / "x")]) == 2
    assert "n_edges" in capsys.readouterr().err


def _free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def _wait_healthy(url, proc, timeout=10.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        if proc.poll() is not None:
            raise AssertionError(proc.stderr.read())
        try:
            with urllib.request.urlopen(url + "/healthz", timeout=1) as resp:
                return resp.read()
        except OSError:
            time.sleep(0.05)
    raise AssertionError("server did not come up")


def test_serve_matches_query(tmp_path, capsys):
    snap = tmp_path / "gen.jsonl"
    assert main(["generate", "--actors", "30", "--edges", "45", "--providers", "10", "--seed", "3", str(snap)]) == 0
    registry, graph = load_snapshot(snap)
    consumer = graph.actors()[0]
    category = f"{GENERATED_TMODEL}:test-service"
    social = "connected_to(consumer) RANK BY degree, hops(consumer)"
    capsys.readouterr()
    code = main(["query", str(snap), "--consumer", consumer, "--category", category, "--social", social, "--format=json"])
    cli_body = capsys.readouterr().out.strip()
    assert code in (0, 1)

    port = _free_port()
    cfg = tmp_path / "broker.conf"
    cfg.write_text(f"listen_address=127.0.0.1:{port}\nsnapshot_path={snap}\n")
    env = {**os.environ, "PYTHONPATH": os.pathsep.join(sys.path)}
    proc = subprocess.Popen(
        [sys.executable, "-m", "socialbroker", "serve", "--config", str(cfg)],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True, env=env,
    )
    try:
        url = f"http://127.0.0.1:{port}"
        assert _wait_healthy(url, proc) == b"ok"
        body = json.dumps(
            {"consumer": consumer, "service": {"categories": [{"tmodel_key": GENERATED_TMODEL, "key_value": "test-service"}]}, "social": social}
        ).encode()
        with urllib.request.urlopen(urllib.request.Request(url + "/broker/query", body, method="POST")) as resp:
            assert resp.read().decode() == cli_body
    finally:
        proc.send_signal(signal.SIGTERM)
        assert proc.wait(timeout=10) == 0
    assert dumps(*load_snapshot(snap)) == dumps(registry, graph)


def test_serve_bad_listen_address(tmp_path, capsys):
    cfg = tmp_path / "broker.conf"
    cfg.write_text(f"listen_address=999.1.1.1:8000\nsnapshot_path={tmp_path / 's.jsonl'}\n")
    assert main(["serve", "--config", str(cfg)]) == 2
    assert "bind_error" in capsys.readouterr().err


def test_serve_port_in_use(tmp_path, capsys):
    with socket.socket() as blocker:
        blocker.bind(("127.0.0.1", 0))
        blocker.listen()
        cfg = tmp_path / "broker.conf"
        cfg.write_text(f"listen_address=127.0.0.1:{blocker.getsockname()[1]}\nsnapshot_path={tmp_path / 's.jsonl'}\n")
        assert main(["serve", "--config", str(cfg)]) == 2
    assert "bind_error" in capsys.readouterr().err
