"""Exception hierarchy shared by every layer.

Each class carries a machine-readable ``code`` and the HTTP status the API
maps it to, so the server never needs its own translation table.
"""

from __future__ import annotations

from typing import Any


class BrokerError(Exception):
    code = "internal"
    status = 500

    def __init__(self, message: str, detail: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_json(self) -> dict[str, Any]:
        body: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.detail is not None:
            body["detail"] = self.detail
        return body


class ValidationError(BrokerError):
    code = "validation_error"
    status = 400


class DuplicateKey(BrokerError):
    code = "duplicate_key"
    status = 409


class UnknownKey(BrokerError):
    code = "unknown_key"
    status = 404


class UnknownBusiness(UnknownKey):
    code = "unknown_business"


class UnknownService(UnknownKey):
    code = "unknown_service"


class UnknownTModel(UnknownKey):
    code = "unknown_tmodel"


class UnknownActor(UnknownKey):
    code = "unknown_actor"


class UnknownConsumer(UnknownActor):
    code = "unknown_consumer"


class SelfLoop(ValidationError):
    code = "self_loop"


class RequirementSyntaxError(ValidationError):
    """Malformed social-requirement text; ``position`` is a 0-based offset."""

    code = "syntax_error"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}", {"position": position})
        self.position = position


class RangeError(RequirementSyntaxError):
    code = "range_error"


class SnapshotCorrupt(BrokerError):
    code = "snapshot_corrupt"

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}", {"line": line})
        self.line = line
        self.reason = reason


class BindError(BrokerError):
    code = "bind_error"


class NotFound(BrokerError):
    """No route for the requested path."""

    code = "not_found"
    status = 404


ERROR_CODES = frozenset(
    cls.code
    for cls in (
        BrokerError, ValidationError, DuplicateKey, UnknownKey, UnknownBusiness,
        UnknownService, UnknownTModel, UnknownActor, UnknownConsumer, SelfLoop,
        RequirementSyntaxError, RangeError, SnapshotCorrupt, BindError, NotFound,
    )
)
