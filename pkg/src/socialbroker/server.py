"""HTTP/JSON front end over the registry, the social graph and the broker.

``BrokerApp`` does the routing and owns persistence; it is a plain object so
tests can drive it without sockets. ``BrokerServer`` puts it behind a
threaded ``http.server``.
"""

from __future__ import annotations

import json
import logging
import os
import signal
import threading
from dataclasses import dataclass
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any, Callable, Mapping
from urllib.parse import parse_qs, unquote, urlsplit

from .broker import BrokerRequest, broker_query, response_to_json
from .errors import BindError, BrokerError, NotFound, ValidationError
from .graph import CollaborationEdge, SocialGraph
from .registry import (
    Registry,
    ServiceRequirements,
    binding_from_json,
    business_from_json,
    canonical_key,
    parse_category,
    record_to_json,
    service_from_json,
    service_requirements_from_json,
    tmodel_from_json,
)
from .requirements import parse_social_requirement, requirement_from_json
from .snapshot import dumps, load_snapshot, write_snapshot

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ServerConfig:
    listen_address: str
    snapshot_path: str
    snapshot_on_mutation: bool = True

    def host_port(self) -> tuple[str, int]:
        host, sep, port = self.listen_address.rpartition(":")
        if not sep or not port.isdigit() or int(port) > 65535:
            raise ValidationError(f"listen_address must be host:port, got {self.listen_address!r}")
        return host.strip("[]") or "0.0.0.0", int(port)

    def validate(self) -> None:
        self.host_port()
        parent = Path(self.snapshot_path).parent
        if not parent.is_dir():
            raise ValidationError(f"snapshot directory {parent} does not exist")


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _flag(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValidationError(f"not a boolean: {value!r}")


def load_config(path: str | os.PathLike | None = None, environ: Mapping[str, str] | None = None) -> ServerConfig:
    """Read ``key=value`` lines, then apply ``BROKER_<FIELD>`` overrides."""
    values: dict[str, str] = {}
    if path is not None:
        for number, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValidationError(f"config line {number}: expected key=value")
            values[key.strip()] = value.strip()
    env = os.environ if environ is None else environ
    for name in ("listen_address", "snapshot_path", "snapshot_on_mutation"):
        override = env.get(f"BROKER_{name.upper()}")
        if override is not None:
            values[name] = override
    unknown = set(values) - {"listen_address", "snapshot_path", "snapshot_on_mutation"}
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for name in ("listen_address", "snapshot_path"):
        if name not in values:
            raise ValidationError(f"config is missing {name}")
    config = ServerConfig(
        listen_address=values["listen_address"],
        snapshot_path=values["snapshot_path"],
        snapshot_on_mutation=_flag(values.get("snapshot_on_mutation", "true")),
    )
    config.validate()
    return config


@dataclass
class Response:
    status: int
    body: Any
    content_type: str = "application/json"

    def encode(self) -> bytes:
        if self.content_type == "application/json":
            return json.dumps(self.body, sort_keys=True, separators=(",", ":")).encode()
        return str(self.body).encode()


def _json_object(body: Any) -> dict[str, Any]:
    if not isinstance(body, dict):
        raise ValidationError("request body must be a JSON object")
    return body


class BrokerApp:
    """Routes requests to the stores; every mutation is atomic.

    A mutation runs under the app's write lock. If it or the follow-up
    snapshot write fails, both stores are put back to their prior state.
    """

    def __init__(
        self,
        registry: Registry | None = None,
        graph: SocialGraph | None = None,
        snapshot_path: str | os.PathLike | None = None,
        snapshot_on_mutation: bool = True,
    ):
        self.registry = Registry() if registry is None else registry
        self.graph = SocialGraph() if graph is None else graph
        self.snapshot_path = snapshot_path
        self.snapshot_on_mutation = snapshot_on_mutation
        self._lock = threading.Lock()

    @classmethod
    def from_config(cls, config: ServerConfig) -> BrokerApp:
        registry, graph = None, None
        if Path(config.snapshot_path).exists():
            registry, graph = load_snapshot(config.snapshot_path)
        return cls(registry, graph, config.snapshot_path, config.snapshot_on_mutation)

    def flush(self) -> None:
        if self.snapshot_path is not None:
            with self._lock:
                write_snapshot(self.snapshot_path, self.registry, self.graph)

    def dump(self) -> str:
        return dumps(self.registry.snapshot(), self.graph.snapshot())

    def _mutate(self, action: Callable[[], Any]) -> Any:
        with self._lock:
            saved = (self.registry.state, self.graph.state)
            try:
                result = action()
                if self.snapshot_on_mutation and self.snapshot_path is not None:
                    write_snapshot(self.snapshot_path, self.registry, self.graph)
            except BaseException:
                self.registry.restore(saved[0])
                self.graph.restore(saved[1])
                raise
            return result

    # routing ------------------------------------------------------------------

    def handle(self, method: str, target: str, body: bytes = b"") -> Response:
        try:
            return self._route(method, target, body)
        except BrokerError as exc:
            return Response(exc.status, exc.to_json())
        except Exception:
            log.exception("unhandled error for %s %s", method, target)
            return Response(500, {"code": "internal", "message": "internal server error"})

    def _route(self, method: str, target: str, raw: bytes) -> Response:
        url = urlsplit(target)
        parts = [unquote(p) for p in url.path.split("/") if p]
        query = parse_qs(url.query, keep_blank_values=True)
        body: Any = None
        if method == "POST":
            try:
                body = json.loads(raw or b"null")
            except (json.JSONDecodeError, UnicodeDecodeError) as exc:
                raise ValidationError(f"request body is not valid JSON: {exc}") from None

        match (method, parts):
            case ("GET", ["healthz"]):
                return Response(200, "ok", "text/plain")
            case ("GET", ["snapshot"]):
                return Response(200, self.dump(), "application/x-ndjson")
            case ("POST", ["registry", "tmodels"]):
                record = tmodel_from_json(_json_object(body))
                return Response(201, {"key": self._mutate(lambda: self.registry.register_tmodel(record))})
            case ("POST", ["registry", "businesses"]):
                record = business_from_json(_json_object(body))
                return Response(201, {"key": self._mutate(lambda: self.registry.register_business(record))})
            case ("POST", ["registry", "businesses", owner, "services"]):
                data = {**_json_object(body)}
                if data.setdefault("business_key", owner) != owner:
                    raise ValidationError("business_key in body does not match the URL")
                record = service_from_json(data)
                return Response(201, {"key": self._mutate(lambda: self.registry.publish_service(record))})
            case ("POST", ["registry", "services", service, "bindings"]):
                data = {**_json_object(body)}
                if data.setdefault("service_key", service) != service:
                    raise ValidationError("service_key in body does not match the URL")
                record = binding_from_json(data)
                return Response(201, {"key": self._mutate(lambda: self.registry.publish_binding(record))})
            case ("GET", ["registry", "businesses", key]):
                return Response(200, record_to_json(self.registry.get_business_detail(key)))
            case ("GET", ["registry", "search"]):
                req = ServiceRequirements(
                    categories=[parse_category(c, self.registry) for c in query.get("category", [])],
                    keywords=query.get("keyword", []),
                    required_tmodels=[canonical_key(t) for t in query.get("tmodel", [])],
                )
                matches = self.registry.find_services(req)
                return Response(
                    200,
                    [{"provider_key": m.provider_key, "service": record_to_json(m.service)} for m in matches],
                )
            case ("POST", ["graph", "actors"]):
                actor = _json_object(body).get("id")
                self._mutate(lambda: self.graph.add_actor(actor))
                return Response(201, {"id": actor})
            case ("POST", ["graph", "edges"]):
                data = _json_object(body)
                try:
                    edge = CollaborationEdge(data["a"], data["b"], data.get("weight", 1.0))
                except KeyError as exc:
                    raise ValidationError(f"missing field {exc}") from None
                self._mutate(lambda: self.graph.add_collaboration(edge))
                return Response(201, {"a": edge.a, "b": edge.b, "weight": float(edge.weight)})
            case ("GET", ["graph", "metrics", actor]):
                return Response(200, self.graph.snapshot().metrics(actor))
            case ("POST", ["broker", "query"]):
                return Response(200, response_to_json(self.query(_json_object(body))))
        if parts and parts[0] in ("healthz", "snapshot", "registry", "graph", "broker"):
            raise NotFound(f"no route for {method} {url.path}")
        raise NotFound(f"unknown path {url.path}")

    def query(self, body: Mapping[str, Any]):
        """Decode a ``/broker/query`` body and run it."""
        consumer = body.get("consumer")
        if not isinstance(consumer, str):
            raise ValidationError("consumer must be an actor key")
        service = body.get("service") or {}
        if not isinstance(service, dict):
            raise ValidationError("service must be a JSON object")
        social = body.get("social", "")
        if isinstance(social, str):
            social_req = parse_social_requirement(social)
        elif isinstance(social, dict):
            social_req = requirement_from_json(social)
        else:
            raise ValidationError("social must be requirement text or a JSON object")
        request = BrokerRequest(consumer, service_requirements_from_json(service), social_req)
        return broker_query(request, self.registry, self.graph)


class _Handler(BaseHTTPRequestHandler):
    app: BrokerApp
    protocol_version = "HTTP/1.1"

    def _respond(self, method: str) -> None:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        response = self.server.app.handle(method, self.path, raw)  # type: ignore[attr-defined]
        payload = response.encode()
        self.send_response(response.status, HTTPStatus(response.status).phrase)
        self.send_header("Content-Type", response.content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self) -> None:
        self._respond("GET")

    def do_POST(self) -> None:
        self._respond("POST")

    def log_message(self, format: str, *args: Any) -> None:
        log.debug("%s - %s", self.address_string(), format % args)


class BrokerServer:
    """A ``BrokerApp`` listening on a socket, served from a background thread."""

    def __init__(self, app: BrokerApp, host: str = "127.0.0.1", port: int = 0):
        try:
            self.httpd = ThreadingHTTPServer((host, port), _Handler)
        except (OSError, OverflowError) as exc:
            raise BindError(f"cannot listen on {host}:{port}: {exc}") from None
        self.httpd.daemon_threads = True
        self.httpd.app = app  # type: ignore[attr-defined]
        self.app = app
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        host, port = self.httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> BrokerServer:
        self._thread = threading.Thread(target=self.httpd.serve_forever, kwargs={"poll_interval": 0.05}, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        """Stop accepting requests and flush a final snapshot."""
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread is not None:
            self._thread.join()
        self.app.flush()

    def __enter__(self) -> BrokerServer:
        return self.start()

    def __exit__(self, *exc: Any) -> None:
        self.stop()


def serve(config: ServerConfig) -> None:
    """Serve until SIGINT or SIGTERM, then flush a final snapshot."""
    config.validate()
    app = BrokerApp.from_config(config)
    server = BrokerServer(app, *config.host_port())
    stop = threading.Event()

    def on_signal(signum: int, frame: Any) -> None:
        stop.set()

    previous = {sig: signal.signal(sig, on_signal) for sig in (signal.SIGINT, signal.SIGTERM)}
    server.start()
    log.info("listening on %s", server.url)
    try:
        stop.wait()
    finally:
        server.stop()
        for sig, handler in previous.items():
            signal.signal(sig, handler)
