"""
Running the broker over HTTP
============================

Start a server on a free port, publish the partner network through the API,
query it, and read the snapshot it persisted.
"""

import json
import tempfile
import urllib.request
from pathlib import Path

from socialbroker import fixtures
from socialbroker.registry import record_to_json
from socialbroker.server import BrokerApp, BrokerServer


def post(url, body):
    req = urllib.request.Request(url, json.dumps(body).encode(), method="POST")
    with urllib.request.urlopen(req) as resp:
        return resp.status, json.loads(resp.read())


workdir = Path(tempfile.mkdtemp())
app = BrokerApp(snapshot_path=workdir / "broker.jsonl")

with BrokerServer(app) as server:
    base = server.url
    print(urllib.request.urlopen(base + "/healthz").read())

    # %%
    # Publish records; services and bindings are posted under their owners.
    for record in fixtures.records():
        body = record_to_json(record)
        kind = type(record).__name__
        if kind == "TModel":
            post(base + "/registry/tmodels", body)
        elif kind == "BusinessEntity":
            post(base + "/registry/businesses", body)
            post(base + "/graph/actors", {"id": body["business_key"]})
        elif kind == "BusinessService":
            post(f"{base}/registry/businesses/{body['business_key']}/services", body)
        else:
            post(f"{base}/registry/services/{body['service_key']}/bindings", body)
    for a, b in fixtures.EDGES:
        post(base + "/graph/edges", {"a": fixtures.ORG[a], "b": fixtures.ORG[b]})

    # %%
    # One broker query.
    status, answer = post(base + "/broker/query", {
        "consumer": fixtures.ORG["A"],
        "service": {"categories": [{"tmodel_key": fixtures.REPORTS_TMODEL, "key_value": "performance-report"}]},
        "social": "within_hops(consumer, 2)",
    })
    for p in answer["providers"]:
        print(p["rank"], p["business"]["name"], p["scores"])

    # %%
    # Graph metrics for G, the go-between of A and F.
    with urllib.request.urlopen(f"{base}/graph/metrics/{fixtures.ORG['G']}") as resp:
        print(json.loads(resp.read()))

# %%
# Every mutation was persisted as one JSON object per line.
print((workdir / "broker.jsonl").read_text().splitlines()[-1])
