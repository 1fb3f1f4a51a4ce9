"""Recommendation lifecycle and snowball distribution.

A recommendation moves through a fixed state machine::

    created -> sent -> delivered -> viewed -> accepted
                                           -> rejected

Every accepted transition emits exactly one notification addressed to the
recommendation's original sender; accepted/rejected are terminal.

Snowball distribution rides the user-user arcs: starting from the user who
holds a recommendation, each hop nominates the holder's neighbors, but a
neighbor only receives the nomination when the rule engine lists the
recommendation's type among the neighbor's own candidates. A user holds a
recommendation at the smallest hop that reaches them and is never
nominated twice; ineligible neighbors stop the spread through themselves.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Callable, Mapping

from .graph import GraphError, SocialGraph
from .profiles import UserProfile, is_valid_type_code, type_label
from .rules import RuleSet, match_rules


class RecState(str, Enum):
    CREATED = "created"
    SENT = "sent"
    DELIVERED = "delivered"
    VIEWED = "viewed"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


LEGAL_TRANSITIONS: dict[RecState, frozenset[RecState]] = {
    RecState.CREATED: frozenset({RecState.SENT}),
    RecState.SENT: frozenset({RecState.DELIVERED}),
    RecState.DELIVERED: frozenset({RecState.VIEWED}),
    RecState.VIEWED: frozenset({RecState.ACCEPTED, RecState.REJECTED}),
    RecState.ACCEPTED: frozenset(),
    RecState.REJECTED: frozenset(),
}

TERMINAL_STATES = frozenset({RecState.ACCEPTED, RecState.REJECTED})


class TransitionError(ValueError):
    """Raised for a transition outside the machine; names both states."""

    def __init__(self, old: RecState, new: RecState):
        self.old = old
        self.new = new
        super().__init__(f"illegal transition: {old.value} -> {new.value}")


@dataclass(frozen=True)
class Recommendation:
    """A typed publicity item travelling from one user to another.

    hop 0 is a direct send; children carry their parent's id and hop + 1.
    """

    rec_id: str
    type_code: int
    title: str
    content: str
    sender_id: str
    recipient_id: str
    state: RecState = RecState.CREATED
    hop: int = 0
    parent_rec_id: str | None = None

    def __post_init__(self) -> None:
        if not is_valid_type_code(self.type_code):
            raise ValueError(f"recommendation type code out of range: {self.type_code}")
        if self.hop < 0:
            raise ValueError(f"hop negative: {self.hop}")


@dataclass(frozen=True)
class Notification:
    """State-change notice addressed to the recommendation's sender."""

    notif_id: str
    rec_id: str
    recipient: str
    old_state: RecState
    new_state: RecState
    at: float


def transition(
    rec: Recommendation,
    new_state: RecState,
    notif_id: str | None = None,
    now: Callable[[], float] = time.time,
) -> tuple[Recommendation, Notification]:
    """Move a recommendation along a legal edge of the state machine.

    Returns the updated recommendation plus the single notification the
    transition emits. Raises TransitionError for any illegal edge,
    including every move out of a terminal state.
    """
    if new_state not in LEGAL_TRANSITIONS[rec.state]:
        raise TransitionError(rec.state, new_state)
    updated = replace(rec, state=new_state)
    notif = Notification(
        notif_id=notif_id or f"{rec.rec_id}:{new_state.value}",
        rec_id=rec.rec_id,
        recipient=rec.sender_id,
        old_state=rec.state,
        new_state=new_state,
        at=now(),
    )
    return updated, notif


@dataclass(frozen=True)
class DiffusionReport:
    """Outcome of one snowball run.

    reached maps user id to the hop that nominated them (1..max_hops; the
    seed user is never in it); eligible_filtered counts the distinct users
    a holder tried to nominate but the rule filter skipped.
    """

    seed: str
    reached: dict[str, int]
    eligible_filtered: int
    max_hops: int
    children: tuple[Recommendation, ...] = ()

    def per_hop_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for hop in self.reached.values():
            counts[hop] = counts.get(hop, 0) + 1
        return dict(sorted(counts.items()))

    def to_csv(self) -> str:
        """Flat per-user form: header then one ``user,hop`` row per user."""
        rows = ["user,hop"]
        rows += [f"{u},{h}" for u, h in sorted(self.reached.items())]
        return "\n".join(rows) + "\n"

    def to_record(self) -> dict[str, Any]:
        return {
            "kind": "diffusion_report",
            "seed": self.seed,
            "reached": dict(sorted(self.reached.items())),
            "eligible_filtered": self.eligible_filtered,
            "max_hops": self.max_hops,
            "children": [r.rec_id for r in self.children],
        }


def report_from_csv(text: str) -> dict[str, int]:
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or lines[0] != "user,hop":
        raise ValueError("missing user,hop header")
    out = {}
    for line in lines[1:]:
        user, hop = line.rsplit(",", 1)
        out[user] = int(hop)
    return out


def snowball(
    g: SocialGraph,
    seed_rec: Recommendation,
    max_hops: int,
    eligibility: RuleSet,
    profiles: Mapping[str, UserProfile],
) -> DiffusionReport:
    """Spread a recommendation from its recipient across user-user arcs.

    Breadth-first: at each hop every current holder nominates its
    not-yet-visited neighbors; a neighbor is reached only when the rule
    engine lists the recommendation's type for them, and then receives a
    child recommendation (state sent, hop = parent's + 1). Filtered
    neighbors are counted once and never re-examined (eligibility cannot
    change mid-run).
    """
    if max_hops < 0:
        raise ValueError(f"max_hops negative: {max_hops}")
    entry = g.node_for_user(seed_rec.recipient_id)

    eligible_cache: dict[str, bool] = {}

    def eligible(user_id: str) -> bool:
        if user_id not in eligible_cache:
            profile = profiles.get(user_id)
            eligible_cache[user_id] = (
                profile is not None
                and seed_rec.type_code in match_rules(profile, eligibility)
            )
        return eligible_cache[user_id]

    visited = {entry.node_id}
    filtered: set[str] = set()
    reached: dict[str, int] = {}
    children: list[Recommendation] = []
    frontier: list[tuple[str, Recommendation]] = [(entry.node_id, seed_rec)]
    hop = 0
    serial = 0
    while frontier and hop < max_hops:
        hop += 1
        next_frontier: list[tuple[str, Recommendation]] = []
        for node_id, held in frontier:
            for nb in g.user_neighbors(node_id):
                if nb in visited or nb in filtered:
                    continue
                nb_user = g.nodes[nb].user_id
                if not eligible(nb_user):
                    filtered.add(nb)
                    continue
                visited.add(nb)
                serial += 1
                child = Recommendation(
                    rec_id=f"{seed_rec.rec_id}.{serial}",
                    type_code=seed_rec.type_code,
                    title=seed_rec.title,
                    content=seed_rec.content,
                    sender_id=held.recipient_id,
                    recipient_id=nb_user,
                    state=RecState.SENT,
                    hop=held.hop + 1,
                    parent_rec_id=held.rec_id,
                )
                children.append(child)
                reached[nb_user] = hop
                next_frontier.append((nb, child))
        frontier = next_frontier
    return DiffusionReport(
        seed=seed_rec.recipient_id,
        reached=reached,
        eligible_filtered=len(filtered),
        max_hops=max_hops,
        children=tuple(children),
    )


def nominate_service_to_user(
    g: SocialGraph,
    service_type: int,
    entry: str,
    max_hops: int,
    eligibility: RuleSet,
    profiles: Mapping[str, UserProfile],
) -> DiffusionReport:
    """Nominate a service across the network starting at one user.

    Same traversal as snowball, seeded with a synthetic recommendation of
    the given type. Group entry points are rejected; nominate to a user.
    """
    if entry in g.known_groups:
        raise GraphError(f"group entry not supported: {entry}")
    synthetic = Recommendation(
        rec_id=f"svc:{service_type}:{entry}",
        type_code=service_type,
        title=type_label(service_type),
        content="",
        sender_id="",
        recipient_id=entry,
        state=RecState.SENT,
    )
    return snowball(g, synthetic, max_hops, eligibility, profiles)


# --- canonical record forms -------------------------------------------------

def recommendation_to_record(rec: Recommendation) -> dict[str, Any]:
    return {
        "kind": "recommendation",
        "rec_id": rec.rec_id,
        "type_code": rec.type_code,
        "title": rec.title,
        "content": rec.content,
        "sender_id": rec.sender_id,
        "recipient_id": rec.recipient_id,
        "state": rec.state.value,
        "hop": rec.hop,
        "parent_rec_id": rec.parent_rec_id,
    }


def recommendation_from_record(record: Mapping[str, Any]) -> Recommendation:
    return Recommendation(
        rec_id=record["rec_id"],
        type_code=record["type_code"],
        title=record["title"],
        content=record["content"],
        sender_id=record["sender_id"],
        recipient_id=record["recipient_id"],
        state=RecState(record["state"]),
        hop=record.get("hop", 0),
        parent_rec_id=record.get("parent_rec_id"),
    )


def notification_to_record(n: Notification) -> dict[str, Any]:
    return {
        "kind": "notification",
        "notif_id": n.notif_id,
        "rec_id": n.rec_id,
        "recipient": n.recipient,
        "old_state": n.old_state.value,
        "new_state": n.new_state.value,
        "at": n.at,
    }


def notification_from_record(record: Mapping[str, Any]) -> Notification:
    return Notification(
        notif_id=record["notif_id"],
        rec_id=record["rec_id"],
        recipient=record["recipient"],
        old_state=RecState(record["old_state"]),
        new_state=RecState(record["new_state"]),
        at=record["at"],
    )
