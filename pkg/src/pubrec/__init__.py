"""Profile-adaptive publicity recommendation service over a social graph."""

from .adaptation import AdaptedPayload, PayloadItem, Variant, adapt_payload
from .diffusion import (
    DiffusionReport,
    Notification,
    RecState,
    Recommendation,
    TransitionError,
    nominate_service_to_user,
    snowball,
    transition,
)
from .graph import Arc, ArcKind, GraphError, Node, SocialGraph
from .profiles import (
    ContextEvent,
    DeviceProfile,
    EventKind,
    GroupOrigin,
    GroupProfile,
    ScreenClass,
    SocialProfile,
    TYPE_LABELS,
    UserProfile,
    type_label,
    validate_profile,
)
from .rules import (
    AssociationRule,
    AgeRange,
    RuleSet,
    default_rules,
    match_rules,
    rank_candidates,
)
from .service import ServiceConfig, create_app, load_config
from .store import IntegrityError, Store, StoreError

__version__ = "0.1.0"

__all__ = [
    "AdaptedPayload",
    "AgeRange",
    "Arc",
    "ArcKind",
    "AssociationRule",
    "ContextEvent",
    "DeviceProfile",
    "DiffusionReport",
    "EventKind",
    "GraphError",
    "GroupOrigin",
    "GroupProfile",
    "IntegrityError",
    "Node",
    "Notification",
    "PayloadItem",
    "RecState",
    "Recommendation",
    "RuleSet",
    "ScreenClass",
    "ServiceConfig",
    "SocialGraph",
    "SocialProfile",
    "Store",
    "StoreError",
    "TransitionError",
    "TYPE_LABELS",
    "UserProfile",
    "Variant",
    "adapt_payload",
    "create_app",
    "default_rules",
    "load_config",
    "match_rules",
    "nominate_service_to_user",
    "rank_candidates",
    "snowball",
    "transition",
    "type_label",
    "validate_profile",
]
