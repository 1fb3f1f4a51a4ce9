"""Profile vocabulary shared by every other module.

Five profile families describe who is being served and how: the user's
basic data and preferences, the stream of context events produced by
watching and using the system, the capabilities of the access device,
the user's interaction footprint in the social network, and groups of
users. A fixed 27-entry taxonomy labels every publicity recommendation
type.

All types here are immutable values; mutation goes through the store.
Each type has a canonical record form (plain dict, field-named, order
insensitive) used by the store WAL, seed files and the HTTP API.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class GroupOrigin(str, Enum):
    SYSTEM_GENERATED = "system"
    USER_CREATED = "user"


class ScreenClass(str, Enum):
    TV = "tv"
    MOBILE = "mobile"
    DESKTOP = "desktop"


class EventKind(str, Enum):
    PROGRAM_WATCHED = "program_watched"
    SERVICE_USED = "service_used"
    RECOMMENDATION_VIEWED = "recommendation_viewed"


#: Publicity recommendation taxonomy: code -> display label. Codes run 1..27
#: and the mapping is a bijection.
TYPE_LABELS: dict[int, str] = {
    1: "Academic-elementary",
    2: "Academic-high school",
    3: "Academic-undergraduate",
    4: "Academic-Postgraduate",
    5: "Sport",
    6: "Esthetics",
    7: "Movies",
    8: "News",
    9: "Information",
    10: "Food",
    11: "Music",
    12: "Religion",
    13: "Adults",
    14: "Health",
    15: "Home",
    16: "Technology",
    17: "Child games",
    18: "Teenage games",
    19: "Culture",
    20: "Events",
    21: "General academic",
    22: "Babies clothing",
    23: "Boys clothing",
    24: "Girls clothing",
    25: "Teenagers clothing",
    26: "Men clothing",
    27: "Women clothing",
}

MIN_TYPE_CODE = 1
MAX_TYPE_CODE = 27


def type_label(code: int) -> str:
    """Display label for a recommendation type code.

    Raises ValueError for codes outside 1..27.
    """
    try:
        return TYPE_LABELS[code]
    except KeyError:
        raise ValueError(f"recommendation type code out of range: {code}") from None


def is_valid_type_code(code: Any) -> bool:
    return isinstance(code, int) and not isinstance(code, bool) and code in TYPE_LABELS


@dataclass(frozen=True)
class UserProfile:
    """Basic data and preferences of one user.

    gender_code is 0 (male) or 1 (female); activity preference codes are
    opaque integers. photo_ref is an opaque resource reference, never a
    blob.
    """

    user_id: str
    name: str
    gender_code: int
    age: int
    activity_prefs: frozenset[int] = frozenset()
    photo_ref: str | None = None


@dataclass(frozen=True)
class GroupProfile:
    """Management data about a group of users.

    Groups are either generated by the system or created by a user; the
    origin never changes after creation. User-created groups must have at
    least one member.
    """

    group_id: str
    topic: str
    member_ids: frozenset[str]
    origin: GroupOrigin
    preference_codes: frozenset[int] = frozenset()


@dataclass(frozen=True)
class DeviceProfile:
    """Capabilities of one access device.

    A fixed five-field capability vocabulary: screen class, whether the
    device can render images, how many list entries fit on screen, and
    the largest payload it accepts.
    """

    device_id: str
    screen_class: ScreenClass
    image_support: bool
    max_list_items: int
    max_payload_bytes: int


@dataclass(frozen=True)
class ContextEvent:
    """One user/system interaction event.

    Events form an append-only stream; timestamps are non-decreasing per
    user in the store.
    """

    user_id: str
    kind: EventKind
    genre: str | None = None
    timestamp: float = 0.0


@dataclass(frozen=True)
class SocialProfile:
    """Interaction footprint of a user inside the network.

    Counters are derived data: they must equal a recount of the arcs and
    events stored for the user.
    """

    user_id: str
    interaction_counters: dict[str, int] = field(default_factory=dict)
    last_active: float = 0.0


def validate_profile(p: UserProfile) -> list[str]:
    """Return every violated invariant of a user profile; empty means ok."""
    errors = []
    if not p.user_id:
        errors.append("user_id empty")
    if p.gender_code not in (0, 1):
        errors.append(f"gender_code out of range: {p.gender_code}")
    if p.age < 0:
        errors.append(f"age negative: {p.age}")
    if not all(isinstance(c, int) for c in p.activity_prefs):
        errors.append("activity_prefs contains non-integer codes")
    return errors


def validate_group(g: GroupProfile) -> list[str]:
    errors = []
    if not g.group_id:
        errors.append("group_id empty")
    if g.origin is GroupOrigin.USER_CREATED and not g.member_ids:
        errors.append("user-created group has no members")
    return errors


def validate_device(d: DeviceProfile) -> list[str]:
    errors = []
    # bounded id keeps even an empty adapted payload under the smallest
    # permitted byte cap
    if not 1 <= len(d.device_id) <= 64:
        errors.append(f"device_id length outside 1..64: {len(d.device_id)}")
    if d.max_list_items < 1:
        errors.append(f"max_list_items below 1: {d.max_list_items}")
    if d.max_payload_bytes < 256:
        errors.append(f"max_payload_bytes below 256: {d.max_payload_bytes}")
    return errors


# --- canonical record form -------------------------------------------------

def to_record(obj: Any) -> dict[str, Any]:
    """Canonical dict form of any profile-family value.

    Records are field-named and order-insensitive; sets appear as sorted
    lists so equal values always produce equal records.
    """
    if isinstance(obj, UserProfile):
        return {
            "kind": "user",
            "user_id": obj.user_id,
            "name": obj.name,
            "gender_code": obj.gender_code,
            "age": obj.age,
            "activity_prefs": sorted(obj.activity_prefs),
            "photo_ref": obj.photo_ref,
        }
    if isinstance(obj, GroupProfile):
        return {
            "kind": "group",
            "group_id": obj.group_id,
            "topic": obj.topic,
            "member_ids": sorted(obj.member_ids),
            "origin": obj.origin.value,
            "preference_codes": sorted(obj.preference_codes),
        }
    if isinstance(obj, DeviceProfile):
        return {
            "kind": "device",
            "device_id": obj.device_id,
            "screen_class": obj.screen_class.value,
            "image_support": obj.image_support,
            "max_list_items": obj.max_list_items,
            "max_payload_bytes": obj.max_payload_bytes,
        }
    if isinstance(obj, ContextEvent):
        return {
            "kind": "event",
            "user_id": obj.user_id,
            "event_kind": obj.kind.value,
            "genre": obj.genre,
            "timestamp": obj.timestamp,
        }
    if isinstance(obj, SocialProfile):
        return {
            "kind": "social_profile",
            "user_id": obj.user_id,
            "interaction_counters": dict(sorted(obj.interaction_counters.items())),
            "last_active": obj.last_active,
        }
    raise TypeError(f"no canonical record form for {type(obj).__name__}")


def from_record(record: dict[str, Any]) -> Any:
    """Rebuild a profile-family value from its canonical record."""
    kind = record.get("kind")
    if kind == "user":
        return UserProfile(
            user_id=record["user_id"],
            name=record["name"],
            gender_code=record["gender_code"],
            age=record["age"],
            activity_prefs=frozenset(record.get("activity_prefs", ())),
            photo_ref=record.get("photo_ref"),
        )
    if kind == "group":
        return GroupProfile(
            group_id=record["group_id"],
            topic=record["topic"],
            member_ids=frozenset(record.get("member_ids", ())),
            origin=GroupOrigin(record["origin"]),
            preference_codes=frozenset(record.get("preference_codes", ())),
        )
    if kind == "device":
        return DeviceProfile(
            device_id=record["device_id"],
            screen_class=ScreenClass(record["screen_class"]),
            image_support=record["image_support"],
            max_list_items=record["max_list_items"],
            max_payload_bytes=record["max_payload_bytes"],
        )
    if kind == "event":
        return ContextEvent(
            user_id=record["user_id"],
            kind=EventKind(record["event_kind"]),
            genre=record.get("genre"),
            timestamp=record.get("timestamp", 0.0),
        )
    if kind == "social_profile":
        return SocialProfile(
            user_id=record["user_id"],
            interaction_counters=dict(record.get("interaction_counters", {})),
            last_active=record.get("last_active", 0.0),
        )
    raise ValueError(f"unknown record kind: {kind!r}")


def canonical_json(record: dict[str, Any]) -> str:
    """Single-line canonical text form of a record (stable bytes)."""
    return json.dumps(record, sort_keys=True, separators=(",", ":"))
