"""Social service brokerage: registry search ranked by a collaboration graph."""

from .broker import (
    BrokerRequest,
    BrokerResponse,
    RankedProvider,
    broker_query,
    evaluate_constraint,
    response_to_json,
)
from .errors import (
    BindError,
    BrokerError,
    DuplicateKey,
    RangeError,
    RequirementSyntaxError,
    SelfLoop,
    SnapshotCorrupt,
    UnknownActor,
    UnknownBusiness,
    UnknownConsumer,
    UnknownService,
    UnknownTModel,
    ValidationError,
)
from .graph import UNREACHABLE, CollaborationEdge, SocialGraph
from .registry import (
    BindingTemplate,
    BusinessEntity,
    BusinessService,
    Contact,
    KeyedReference,
    Registry,
    ServiceMatch,
    ServiceRequirements,
    TModel,
)
from .requirements import (
    CONSUMER,
    SocialRequirement,
    parse_social_requirement,
    serialize_social_requirement,
)
from .snapshot import load_snapshot, write_snapshot

__version__ = "0.1.0"
