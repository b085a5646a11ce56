"""UDDI-style registry: white, yellow and green pages.

Records are immutable dataclasses. The store keeps its indexes in a single
state object that is replaced wholesale on every mutation, so readers always
see a consistent snapshot without taking a lock.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field, fields
from typing import Any, Iterable, Mapping

from .errors import (
    DuplicateKey,
    UnknownBusiness,
    UnknownService,
    UnknownTModel,
    ValidationError,
)

_KEY_RE = re.compile(r"^[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}$")


def is_key(text: object) -> bool:
    return isinstance(text, str) and _KEY_RE.match(text) is not None


def canonical_key(text: str) -> str:
    """Lowercase ``text`` and check it has the 8-4-4-4-12 hex UUID shape."""
    if not isinstance(text, str):
        raise ValidationError(f"key must be a string, got {type(text).__name__}")
    key = text.strip().lower()
    if not is_key(key):
        raise ValidationError(f"malformed key {text!r}")
    return key


def _check_key(value: str, what: str) -> None:
    if not is_key(value):
        raise ValidationError(f"{what}: malformed key {value!r}")


def _check_text(obj: Any, *names: str, optional: tuple[str, ...] = ()) -> None:
    for name in (*names, *optional):
        value = getattr(obj, name)
        if name in optional and value is None:
            continue
        if not isinstance(value, str):
            raise ValidationError(f"{type(obj).__name__}.{name} must be a string")


def _tuple(obj: Any, name: str) -> None:
    object.__setattr__(obj, name, tuple(getattr(obj, name)))


@dataclass(frozen=True)
class Contact:
    name: str
    phone: str | None = None
    email: str | None = None
    address: str | None = None

    def validate(self) -> None:
        _check_text(self, "name", optional=("phone", "email", "address"))
        if not self.name:
            raise ValidationError("contact name must be non-empty")


@dataclass(frozen=True)
class KeyedReference:
    """A classification entry: ``key_value`` within the taxonomy ``tmodel_key``."""

    tmodel_key: str
    key_name: str
    key_value: str

    def validate(self) -> None:
        _check_key(self.tmodel_key, "keyed reference tmodel_key")
        _check_text(self, "key_name", "key_value")
        if not self.key_value:
            raise ValidationError("keyed reference key_value must be non-empty")

    def matches(self, other: KeyedReference) -> bool:
        # key_name is documentation only
        return self.tmodel_key == other.tmodel_key and self.key_value == other.key_value


@dataclass(frozen=True)
class BusinessEntity:
    business_key: str
    name: str
    description: str = ""
    contacts: tuple[Contact, ...] = ()
    identifiers: tuple[KeyedReference, ...] = ()
    categories: tuple[KeyedReference, ...] = ()

    def __post_init__(self) -> None:
        for name in ("contacts", "identifiers", "categories"):
            _tuple(self, name)

    def validate(self) -> None:
        _check_key(self.business_key, "business_key")
        _check_text(self, "name", "description")
        if not self.name:
            raise ValidationError("business name must be non-empty")
        for item in (*self.contacts, *self.identifiers, *self.categories):
            item.validate()


@dataclass(frozen=True)
class BusinessService:
    service_key: str
    business_key: str
    name: str
    description: str = ""
    categories: tuple[KeyedReference, ...] = ()

    def __post_init__(self) -> None:
        _tuple(self, "categories")

    def validate(self) -> None:
        _check_key(self.service_key, "service_key")
        _check_key(self.business_key, "business_key")
        _check_text(self, "name", "description")
        for ref in self.categories:
            ref.validate()


@dataclass(frozen=True)
class BindingTemplate:
    binding_key: str
    service_key: str
    access_point: str
    tmodel_keys: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        _tuple(self, "tmodel_keys")

    def validate(self) -> None:
        _check_key(self.binding_key, "binding_key")
        _check_key(self.service_key, "service_key")
        _check_text(self, "access_point")
        for key in self.tmodel_keys:
            _check_key(key, "binding tmodel key")


@dataclass(frozen=True)
class TModel:
    tmodel_key: str
    name: str
    description: str = ""
    overview_url: str | None = None

    def validate(self) -> None:
        _check_key(self.tmodel_key, "tmodel_key")
        _check_text(self, "name", "description", optional=("overview_url",))
        if not self.name:
            raise ValidationError("tModel name must be non-empty")


@dataclass(frozen=True)
class ServiceRequirements:
    """Functional requirements: all three lists are conjunctive, empty means any."""

    categories: tuple[KeyedReference, ...] = ()
    keywords: tuple[str, ...] = ()
    required_tmodels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in ("categories", "keywords", "required_tmodels"):
            _tuple(self, name)


@dataclass(frozen=True)
class ServiceMatch:
    service: BusinessService
    provider_key: str


# --- JSON encoding -----------------------------------------------------------

def _ref_from_json(data: Mapping[str, Any]) -> KeyedReference:
    return KeyedReference(
        tmodel_key=data["tmodel_key"],
        key_name=data.get("key_name", ""),
        key_value=data["key_value"],
    )


def record_to_json(record: Any) -> dict[str, Any]:
    """Field-for-field dict of a registry record (tuples become lists)."""

    def convert(value: Any) -> Any:
        if isinstance(value, tuple):
            return [convert(v) for v in value]
        if hasattr(value, "__dataclass_fields__"):
            return {f.name: convert(getattr(value, f.name)) for f in fields(value)}
        return value

    return convert(record)


def _require(data: Mapping[str, Any], name: str) -> Any:
    try:
        return data[name]
    except KeyError:
        raise ValidationError(f"missing field {name!r}") from None
    except TypeError:
        raise ValidationError("record must be a JSON object") from None


def business_from_json(data: Mapping[str, Any]) -> BusinessEntity:
    try:
        return BusinessEntity(
            business_key=_require(data, "business_key"),
            name=_require(data, "name"),
            description=data.get("description", ""),
            contacts=[Contact(**c) for c in data.get("contacts", [])],
            identifiers=[_ref_from_json(r) for r in data.get("identifiers", [])],
            categories=[_ref_from_json(r) for r in data.get("categories", [])],
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed business record: {exc}") from None


def service_from_json(data: Mapping[str, Any]) -> BusinessService:
    try:
        return BusinessService(
            service_key=_require(data, "service_key"),
            business_key=_require(data, "business_key"),
            name=data.get("name", ""),
            description=data.get("description", ""),
            categories=[_ref_from_json(r) for r in data.get("categories", [])],
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed service record: {exc}") from None


def binding_from_json(data: Mapping[str, Any]) -> BindingTemplate:
    try:
        return BindingTemplate(
            binding_key=_require(data, "binding_key"),
            service_key=_require(data, "service_key"),
            access_point=_require(data, "access_point"),
            tmodel_keys=list(data.get("tmodel_keys", [])),
        )
    except TypeError as exc:
        raise ValidationError(f"malformed binding record: {exc}") from None


def tmodel_from_json(data: Mapping[str, Any]) -> TModel:
    return TModel(
        tmodel_key=_require(data, "tmodel_key"),
        name=_require(data, "name"),
        description=data.get("description", ""),
        overview_url=data.get("overview_url"),
    )


def service_requirements_from_json(data: Mapping[str, Any]) -> ServiceRequirements:
    try:
        return ServiceRequirements(
            categories=[_ref_from_json(r) for r in data.get("categories", [])],
            keywords=list(data.get("keywords", [])),
            required_tmodels=list(data.get("required_tmodels", [])),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"malformed service requirements: {exc}") from None


# --- store -------------------------------------------------------------------

@dataclass(frozen=True)
class _State:
    businesses: Mapping[str, BusinessEntity] = field(default_factory=dict)
    services: Mapping[str, BusinessService] = field(default_factory=dict)
    bindings: Mapping[str, BindingTemplate] = field(default_factory=dict)
    tmodels: Mapping[str, TModel] = field(default_factory=dict)
    services_by_owner: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    bindings_by_service: Mapping[str, tuple[str, ...]] = field(default_factory=dict)


class Registry:
    """In-memory registry store.

    Mutations are serialized by a lock and publish a fresh state object;
    queries read whichever state was current when they started.
    """

    def __init__(self) -> None:
        self._state = _State()
        self._write_lock = threading.Lock()

    # snapshots ----------------------------------------------------------------

    def snapshot(self) -> Registry:
        """A read-only view frozen at the current state."""
        view = Registry.__new__(Registry)
        view._state = self._state
        view._write_lock = threading.Lock()
        return view

    @property
    def state(self) -> _State:
        return self._state

    def restore(self, state: _State) -> None:
        with self._write_lock:
            self._state = state

    # mutations ----------------------------------------------------------------

    @staticmethod
    def _check_unused(table: Mapping[str, Any], key: str) -> None:
        if key in table:
            raise DuplicateKey(f"key {key} already registered")

    def register_business(self, entity: BusinessEntity) -> str:
        entity.validate()
        with self._write_lock:
            state = self._state
            self._check_unused(state.businesses, entity.business_key)
            self._state = _replace(
                state,
                businesses={**state.businesses, entity.business_key: entity},
            )
        return entity.business_key

    def register_tmodel(self, tmodel: TModel) -> str:
        tmodel.validate()
        with self._write_lock:
            state = self._state
            self._check_unused(state.tmodels, tmodel.tmodel_key)
            self._state = _replace(state, tmodels={**state.tmodels, tmodel.tmodel_key: tmodel})
        return tmodel.tmodel_key

    def publish_service(self, service: BusinessService) -> str:
        service.validate()
        with self._write_lock:
            state = self._state
            if service.business_key not in state.businesses:
                raise UnknownBusiness(f"no business {service.business_key}")
            self._check_unused(state.services, service.service_key)
            owned = state.services_by_owner.get(service.business_key, ())
            self._state = _replace(
                state,
                services={**state.services, service.service_key: service},
                services_by_owner={
                    **state.services_by_owner,
                    service.business_key: (*owned, service.service_key),
                },
            )
        return service.service_key

    def publish_binding(self, binding: BindingTemplate) -> str:
        binding.validate()
        with self._write_lock:
            state = self._state
            if binding.service_key not in state.services:
                raise UnknownService(f"no service {binding.service_key}")
            for key in binding.tmodel_keys:
                if key not in state.tmodels:
                    raise UnknownTModel(f"no tModel {key}")
            self._check_unused(state.bindings, binding.binding_key)
            held = state.bindings_by_service.get(binding.service_key, ())
            self._state = _replace(
                state,
                bindings={**state.bindings, binding.binding_key: binding},
                bindings_by_service={
                    **state.bindings_by_service,
                    binding.service_key: (*held, binding.binding_key),
                },
            )
        return binding.binding_key

    # white pages --------------------------------------------------------------

    def get_business_detail(self, key: str) -> BusinessEntity:
        try:
            return self._state.businesses[key]
        except KeyError:
            raise UnknownBusiness(f"no business {key}") from None

    def get_service(self, key: str) -> BusinessService:
        try:
            return self._state.services[key]
        except KeyError:
            raise UnknownService(f"no service {key}") from None

    def get_tmodel(self, key: str) -> TModel:
        try:
            return self._state.tmodels[key]
        except KeyError:
            raise UnknownTModel(f"no tModel {key}") from None

    def services_of(self, business_key: str) -> list[BusinessService]:
        state = self._state
        keys = state.services_by_owner.get(business_key, ())
        return [state.services[k] for k in sorted(keys)]

    def bindings_of(self, service_key: str) -> list[BindingTemplate]:
        state = self._state
        keys = state.bindings_by_service.get(service_key, ())
        return [state.bindings[k] for k in sorted(keys)]

    def businesses(self) -> list[BusinessEntity]:
        return [v for _, v in sorted(self._state.businesses.items())]

    def services(self) -> list[BusinessService]:
        return [v for _, v in sorted(self._state.services.items())]

    def bindings(self) -> list[BindingTemplate]:
        return [v for _, v in sorted(self._state.bindings.items())]

    def tmodels(self) -> list[TModel]:
        return [v for _, v in sorted(self._state.tmodels.items())]

    def find_tmodels_by_name(self, name: str) -> list[TModel]:
        return [t for t in self.tmodels() if t.name == name]

    # yellow + green pages -----------------------------------------------------

    def find_services(self, req: ServiceRequirements) -> list[ServiceMatch]:
        """Every service meeting the category, keyword and tModel conditions.

        A requested category may be carried by the service or by its owning
        business. Keywords are case-insensitive substrings of the service name
        or description. Each required tModel must appear on at least one of
        the service's bindings.
        """
        state = self._state
        keywords = [k.lower() for k in req.keywords]
        required = set(req.required_tmodels)
        matches = []
        for service in state.services.values():
            owner = state.businesses[service.business_key]
            offered = (*service.categories, *owner.categories)
            if not all(any(want.matches(have) for have in offered) for want in req.categories):
                continue
            text = (service.name.lower(), service.description.lower())
            if not all(k in text[0] or k in text[1] for k in keywords):
                continue
            if required:
                bound: set[str] = set()
                for bkey in state.bindings_by_service.get(service.service_key, ()):
                    bound.update(state.bindings[bkey].tmodel_keys)
                if not required <= bound:
                    continue
            matches.append(ServiceMatch(service=service, provider_key=service.business_key))
        matches.sort(key=lambda m: (m.provider_key, m.service.service_key))
        return matches

    def counts(self) -> dict[str, int]:
        state = self._state
        return {
            "business": len(state.businesses),
            "service": len(state.services),
            "binding": len(state.bindings),
            "tmodel": len(state.tmodels),
        }


def _replace(state: _State, **changes: Any) -> _State:
    values = {f.name: getattr(state, f.name) for f in fields(state)}
    values.update(changes)
    return _State(**values)


def load_records(registry: Registry, records: Iterable[Any]) -> None:
    """Insert records in dependency order (tModels, businesses, services, bindings)."""
    order = {TModel: 0, BusinessEntity: 1, BusinessService: 2, BindingTemplate: 3}
    publish = {
        TModel: registry.register_tmodel,
        BusinessEntity: registry.register_business,
        BusinessService: registry.publish_service,
        BindingTemplate: registry.publish_binding,
    }
    for record in sorted(records, key=lambda r: order[type(r)]):
        publish[type(record)](record)


def parse_category(text: str, registry: Registry | None = None) -> KeyedReference:
    """Parse ``TMODEL:VALUE`` into a category reference.

    ``TMODEL`` is a tModel key, or, when a registry is given, the name of
    exactly one registered tModel.
    """
    taxonomy, sep, value = text.partition(":")
    if not sep or not value:
        raise ValidationError(f"category must look like TMODEL:VALUE, got {text!r}")
    if is_key(taxonomy.strip().lower()):
        return KeyedReference(taxonomy.strip().lower(), "", value)
    if registry is not None:
        named = registry.find_tmodels_by_name(taxonomy)
        if len(named) == 1:
            return KeyedReference(named[0].tmodel_key, "", value)
        if len(named) > 1:
            raise ValidationError(f"tModel name {taxonomy!r} is ambiguous")
    raise UnknownTModel(f"no tModel named {taxonomy!r}")
