"""Embedded single-file store for profiles, graph, recommendations and events.

One JSON record per line, written ahead of every acknowledged mutation and
fsynced, so a killed process loses nothing it committed. ``compact()``
rewrites the file as a minimal snapshot. A store opened without a path
lives purely in memory.

The store owns all mutation (single writer, coarse lock) and guarantees
referential integrity: loading a dataset with dangling references fails,
naming the offending ids. Deleting a user cascades: their node and arcs
disappear, their group memberships are dropped, their events are removed,
and their recommendations are kept but marked orphaned so notification
history survives.
"""

from __future__ import annotations

import json
import os
import re
import threading
from collections import Counter
from typing import Any, Iterable

from .diffusion import (
    Notification,
    Recommendation,
    notification_from_record,
    notification_to_record,
    recommendation_from_record,
    recommendation_to_record,
)
from .graph import Arc, ArcKind, GraphError, Node, SocialGraph, arc_key
from .profiles import (
    ContextEvent,
    DeviceProfile,
    GroupProfile,
    SocialProfile,
    UserProfile,
    canonical_json,
    from_record,
    to_record,
    validate_device,
    validate_group,
    validate_profile,
)

SCHEMA_VERSION = 1

_ID_SUFFIX = re.compile(r"^(.*?)(\d+)$")


class StoreError(Exception):
    pass


class IntegrityError(StoreError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


def _node_record(n: Node) -> dict[str, Any]:
    return {"kind": "node", "node_id": n.node_id, "user_id": n.user_id,
            "device_id": n.device_id}


def _arc_record(a: Arc) -> dict[str, Any]:
    return {"kind": "arc", "arc_id": a.arc_id, "arc_kind": a.kind.value,
            "a": a.a, "b": a.b, "created_at": a.created_at}


class Store:
    """Open with ``Store.open(path)`` or ``Store.open()`` for in-memory."""

    def __init__(self) -> None:
        self.users: dict[str, UserProfile] = {}
        self.credentials: dict[str, str] = {}
        self.groups: dict[str, GroupProfile] = {}
        self.devices: dict[str, DeviceProfile] = {}
        self.services: set[str] = set()
        self.graph = SocialGraph()
        self.events: dict[str, list[ContextEvent]] = {}
        self.recommendations: dict[str, Recommendation] = {}
        self.notifications: list[Notification] = []
        self.orphaned_recs: set[str] = set()
        self._counters: dict[str, Counter[str]] = {}
        self._seq: dict[str, int] = {}
        self._lock = threading.RLock()
        self._fh = None
        self.path: str | None = None

    # --- lifecycle ------------------------------------------------------

    @classmethod
    def open(cls, path: str | os.PathLike | None = None) -> "Store":
        """Load an existing dataset or initialize an empty one.

        Integrity is verified on load; a corrupt dataset raises
        IntegrityError listing every dangling reference.
        """
        store = cls()
        if path is None:
            return store
        store.path = os.fspath(path)
        if os.path.exists(store.path):
            with open(store.path, encoding="utf-8") as f:
                store._replay(f)
            violations = store.validate()
            if violations:
                raise IntegrityError(violations)
            store._fh = open(store.path, "a", encoding="utf-8")
        else:
            store._fh = open(store.path, "a", encoding="utf-8")
            store._append({"op": "schema", "version": SCHEMA_VERSION})
        return store

    def close(self) -> None:
        with self._lock:
            if self._fh is not None:
                self._fh.close()
                self._fh = None

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # --- write-ahead log --------------------------------------------------

    def _append(self, op: dict[str, Any]) -> None:
        if self._fh is None:
            return
        self._fh.write(canonical_json(op) + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def _replay(self, lines: Iterable[str]) -> None:
        for lineno, raw in enumerate(lines, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                op = json.loads(raw)
            except json.JSONDecodeError as e:
                raise StoreError(f"unreadable record at line {lineno}: {e}") from None
            try:
                self._apply(op)
            except (StoreError, GraphError, ValueError) as e:
                raise IntegrityError([f"line {lineno}: {e}"]) from None

    def _apply(self, op: dict[str, Any]) -> None:
        name = op.get("op")
        if name == "schema":
            if op.get("version") != SCHEMA_VERSION:
                raise StoreError(f"unsupported schema version: {op.get('version')}")
        elif name == "put":
            self._apply_put(op["record"])
        elif name == "del":
            self._apply_del(op["entity"], op["id"])
        elif name == "del_arc":
            self._drop_arc(ArcKind(op["arc_kind"]), op["a"], op["b"])
        elif name == "orphan":
            self.orphaned_recs.add(op["rec_id"])
        else:
            raise StoreError(f"unknown op: {name!r}")

    def _apply_put(self, record: dict[str, Any]) -> None:
        kind = record.get("kind")
        if kind == "user":
            self._put_user_state(from_record(record))
        elif kind == "credential":
            self._require_user(record["user_id"])
            self.credentials[record["user_id"]] = record["secret"]
        elif kind == "group":
            self._put_group_state(from_record(record))
        elif kind == "device":
            self._put_device_state(from_record(record))
        elif kind == "service":
            self.services.add(record["service_id"])
            self.graph.known_services.add(record["service_id"])
        elif kind == "node":
            self._add_node_state(Node(record["node_id"], record["user_id"],
                                      record["device_id"]))
        elif kind == "arc":
            self._add_arc_state(ArcKind(record["arc_kind"]), record["a"],
                                record["b"], record.get("created_at", 0.0))
        elif kind == "event":
            self._record_event_state(from_record(record))
        elif kind == "recommendation":
            self._put_recommendation_state(recommendation_from_record(record))
        elif kind == "notification":
            self.notifications.append(notification_from_record(record))
        else:
            raise StoreError(f"unknown record kind: {kind!r}")

    def _apply_del(self, entity: str, entity_id: str) -> None:
        if entity == "user":
            self._delete_user_state(entity_id)
        elif entity == "group":
            self._delete_group_state(entity_id)
        elif entity == "device":
            self.devices.pop(entity_id, None)
        elif entity == "recommendation":
            self._delete_recommendation_state(entity_id)
        else:
            raise StoreError(f"unknown delete entity: {entity!r}")

    # --- id generation ----------------------------------------------------

    def _note_id(self, entity_id: str) -> None:
        m = _ID_SUFFIX.match(entity_id)
        if m:
            prefix, num = m.group(1), int(m.group(2))
            if num > self._seq.get(prefix, 0):
                self._seq[prefix] = num

    def new_id(self, prefix: str) -> str:
        with self._lock:
            n = self._seq.get(prefix, 0) + 1
            self._seq[prefix] = n
            return f"{prefix}{n}"

    # --- users --------------------------------------------------------

    def _require_user(self, user_id: str) -> UserProfile:
        user = self.users.get(user_id)
        if user is None:
            raise StoreError(f"unknown user: {user_id}")
        return user

    def _put_user_state(self, profile: UserProfile) -> None:
        errors = validate_profile(profile)
        if errors:
            raise StoreError(f"invalid user profile: {'; '.join(errors)}")
        self.users[profile.user_id] = profile
        self._counters.setdefault(profile.user_id, Counter())
        self._note_id(profile.user_id)

    def put_user(self, profile: UserProfile, secret: str | None = None) -> None:
        with self._lock:
            self._put_user_state(profile)
            self._append({"op": "put", "record": to_record(profile)})
            if secret is not None:
                self.credentials[profile.user_id] = secret
                self._append({"op": "put", "record": {
                    "kind": "credential", "user_id": profile.user_id,
                    "secret": secret}})

    def get_user(self, user_id: str) -> UserProfile:
        with self._lock:
            return self._require_user(user_id)

    def search_users(self, name_substring: str) -> list[UserProfile]:
        """Case-insensitive substring match on name, ordered by user id."""
        needle = name_substring.lower()
        with self._lock:
            hits = [u for u in self.users.values() if needle in u.name.lower()]
            return sorted(hits, key=lambda u: u.user_id)

    def user_by_name(self, name: str) -> UserProfile | None:
        with self._lock:
            hits = [u for u in self.users.values() if u.name == name]
            return hits[0] if len(hits) == 1 else None

    def _delete_user_state(self, user_id: str) -> None:
        self._require_user(user_id)
        try:
            node = self.graph.node_for_user(user_id)
        except GraphError:
            node = None
        if node is not None:
            for arc in self.graph.remove_node(node.node_id):
                self._count_arc(arc, -1)
        for group_id in list(self.groups):
            g = self.groups[group_id]
            if user_id not in g.member_ids:
                continue
            remaining = g.member_ids - {user_id}
            if not remaining:
                self._delete_group_state(group_id)
            else:
                self.groups[group_id] = GroupProfile(
                    g.group_id, g.topic, remaining, g.origin, g.preference_codes)
        for rec in self.recommendations.values():
            if user_id in (rec.sender_id, rec.recipient_id):
                self.orphaned_recs.add(rec.rec_id)
        self.events.pop(user_id, None)
        self._counters.pop(user_id, None)
        self.credentials.pop(user_id, None)
        del self.users[user_id]

    def delete_user(self, user_id: str) -> None:
        """Cascade: drop node+arcs, memberships and events; orphan the
        user's recommendations but keep them for notification history."""
        with self._lock:
            before_orphans = set(self.orphaned_recs)
            self._delete_user_state(user_id)
            self._append({"op": "del", "entity": "user", "id": user_id})
            for rec_id in sorted(self.orphaned_recs - before_orphans):
                self._append({"op": "orphan", "rec_id": rec_id})

    # --- groups -------------------------------------------------------

    def _put_group_state(self, group: GroupProfile) -> None:
        errors = validate_group(group)
        if errors:
            raise StoreError(f"invalid group: {'; '.join(errors)}")
        existing = self.groups.get(group.group_id)
        if existing is not None and existing.origin is not group.origin:
            raise StoreError(f"group origin is immutable: {group.group_id}")
        for member in group.member_ids:
            self._require_user(member)
        self.groups[group.group_id] = group
        self.graph.known_groups.add(group.group_id)
        self._note_id(group.group_id)

    def put_group(self, group: GroupProfile, sync_member_arcs: bool = False,
                  created_at: float = 0.0) -> None:
        with self._lock:
            self._put_group_state(group)
            self._append({"op": "put", "record": to_record(group)})
            if sync_member_arcs:
                for member in sorted(group.member_ids):
                    try:
                        node = self.graph.node_for_user(member)
                    except GraphError:
                        continue
                    self.add_interaction(ArcKind.USER_GROUP, node.node_id,
                                         group.group_id, created_at)

    def get_group(self, group_id: str) -> GroupProfile:
        with self._lock:
            group = self.groups.get(group_id)
            if group is None:
                raise StoreError(f"unknown group: {group_id}")
            return group

    def search_groups(self, text: str) -> list[GroupProfile]:
        """Case-insensitive substring match on group id or topic.

        Groups carry no separate display name; the id stands in for it.
        """
        needle = text.lower()
        with self._lock:
            hits = [g for g in self.groups.values()
                    if needle in g.group_id.lower() or needle in g.topic.lower()]
            return sorted(hits, key=lambda g: g.group_id)

    def _delete_group_state(self, group_id: str) -> None:
        if group_id not in self.groups:
            raise StoreError(f"unknown group: {group_id}")
        for key in [k for k, a in self.graph.arcs.items() if group_id in (a.a, a.b)]:
            self._count_arc(self.graph.arcs[key], -1)
            del self.graph.arcs[key]
        self.graph.known_groups.discard(group_id)
        del self.groups[group_id]

    def delete_group(self, group_id: str) -> None:
        with self._lock:
            self._delete_group_state(group_id)
            self._append({"op": "del", "entity": "group", "id": group_id})

    # --- devices and services ------------------------------------------

    def _put_device_state(self, device: DeviceProfile) -> None:
        errors = validate_device(device)
        if errors:
            raise StoreError(f"invalid device: {'; '.join(errors)}")
        self.devices[device.device_id] = device

    def put_device(self, device: DeviceProfile) -> None:
        with self._lock:
            self._put_device_state(device)
            self._append({"op": "put", "record": to_record(device)})

    def get_device(self, device_id: str) -> DeviceProfile:
        with self._lock:
            device = self.devices.get(device_id)
            if device is None:
                raise StoreError(f"unknown device: {device_id}")
            return device

    def delete_device(self, device_id: str) -> None:
        with self._lock:
            if device_id not in self.devices:
                raise StoreError(f"unknown device: {device_id}")
            users = [n.user_id for n in self.graph.nodes.values()
                     if n.device_id == device_id]
            if users:
                raise StoreError(
                    f"device in use by nodes of: {', '.join(sorted(users))}")
            del self.devices[device_id]
            self._append({"op": "del", "entity": "device", "id": device_id})

    def put_service(self, service_id: str) -> None:
        with self._lock:
            self.services.add(service_id)
            self.graph.known_services.add(service_id)
            self._append({"op": "put", "record": {"kind": "service",
                                                  "service_id": service_id}})

    # --- graph ----------------------------------------------------------

    def _add_node_state(self, node: Node) -> None:
        self._require_user(node.user_id)
        if node.device_id not in self.devices:
            raise StoreError(f"unknown device: {node.device_id}")
        self.graph.add_node(node)
        self._note_id(node.node_id)

    def add_node(self, node: Node) -> None:
        with self._lock:
            self._add_node_state(node)
            self._append({"op": "put", "record": _node_record(node)})

    def _count_arc(self, arc: Arc, delta: int) -> None:
        for end in (arc.a, arc.b):
            node = self.graph.nodes.get(end)
            if node is not None and node.user_id in self._counters:
                self._counters[node.user_id][arc.kind.value] += delta

    def _add_arc_state(self, kind: ArcKind, a: str, b: str,
                       created_at: float) -> Arc | None:
        if self.graph.has_arc(kind, a, b):
            return None
        arc = self.graph.add_interaction(kind, a, b, created_at)
        self._count_arc(arc, +1)
        return arc

    def add_interaction(self, kind: ArcKind, a: str, b: str,
                        created_at: float = 0.0) -> Arc:
        """Record an interaction arc; duplicate pairs are a no-op."""
        with self._lock:
            arc = self._add_arc_state(kind, a, b, created_at)
            if arc is None:
                return self.graph.arcs[arc_key(kind, a, b)]
            self._append({"op": "put", "record": _arc_record(arc)})
            return arc

    def graph_snapshot(self) -> SocialGraph:
        """Consistent copy of the graph taken under the store lock; safe
        input for a diffusion run while writers keep going."""
        with self._lock:
            return self.graph.copy()

    def _drop_arc(self, kind: ArcKind, a: str, b: str) -> bool:
        arc = self.graph.arcs.get(arc_key(kind, a, b))
        if arc is None:
            return False
        self._count_arc(arc, -1)
        self.graph.remove_interaction(kind, a, b)
        return True

    def remove_interaction(self, kind: ArcKind, a: str, b: str) -> bool:
        with self._lock:
            dropped = self._drop_arc(kind, a, b)
            if dropped:
                self._append({"op": "del_arc", "arc_kind": kind.value,
                              "a": a, "b": b})
            return dropped

    # --- events ---------------------------------------------------------

    def _record_event_state(self, e: ContextEvent) -> None:
        self._require_user(e.user_id)
        stream = self.events.setdefault(e.user_id, [])
        if stream and e.timestamp < stream[-1].timestamp:
            raise StoreError(
                f"event timestamp regression for {e.user_id}: "
                f"{e.timestamp} < {stream[-1].timestamp}")
        stream.append(e)
        self._counters[e.user_id][e.kind.value] += 1

    def record_event(self, e: ContextEvent) -> None:
        """Append to the user's event stream; timestamps must not go
        backwards per user (equal instants keep arrival order)."""
        with self._lock:
            self._record_event_state(e)
            self._append({"op": "put", "record": to_record(e)})

    def events_for(self, user_id: str) -> list[ContextEvent]:
        with self._lock:
            return list(self.events.get(user_id, ()))

    def social_profile(self, user_id: str) -> SocialProfile:
        """Materialized interaction counters for a user."""
        with self._lock:
            self._require_user(user_id)
            counters = {k: v for k, v in
                        sorted(self._counters.get(user_id, Counter()).items()) if v}
            events = self.events.get(user_id, ())
            last = events[-1].timestamp if events else 0.0
            return SocialProfile(user_id, counters, last)

    def recompute_social_profile(self, user_id: str) -> SocialProfile:
        """Recount counters from the arc and event stores (oracle for the
        materialized ones)."""
        with self._lock:
            self._require_user(user_id)
            counters: Counter[str] = Counter()
            try:
                node_id = self.graph.node_for_user(user_id).node_id
            except GraphError:
                node_id = None
            if node_id is not None:
                for arc in self.graph.arcs.values():
                    if node_id in (arc.a, arc.b):
                        counters[arc.kind.value] += 1
            events = self.events.get(user_id, ())
            for e in events:
                counters[e.kind.value] += 1
            last = events[-1].timestamp if events else 0.0
            return SocialProfile(user_id, {k: v for k, v in sorted(counters.items())},
                                 last)

    # --- recommendations and notifications -------------------------------

    def _put_recommendation_state(self, rec: Recommendation) -> None:
        if rec.rec_id not in self.orphaned_recs:
            self._require_user(rec.sender_id)
            self._require_user(rec.recipient_id)
        if rec.parent_rec_id is not None and rec.parent_rec_id not in self.recommendations:
            raise StoreError(f"unknown parent recommendation: {rec.parent_rec_id}")
        self.recommendations[rec.rec_id] = rec
        self._note_id(rec.rec_id)

    def put_recommendation(self, rec: Recommendation) -> None:
        with self._lock:
            self._put_recommendation_state(rec)
            self._append({"op": "put", "record": recommendation_to_record(rec)})

    def get_recommendation(self, rec_id: str) -> Recommendation:
        with self._lock:
            rec = self.recommendations.get(rec_id)
            if rec is None:
                raise StoreError(f"unknown recommendation: {rec_id}")
            return rec

    def recommendations_for(self, recipient_id: str) -> list[Recommendation]:
        with self._lock:
            return sorted(
                (r for r in self.recommendations.values()
                 if r.recipient_id == recipient_id),
                key=lambda r: r.rec_id)

    def _delete_recommendation_state(self, rec_id: str) -> None:
        if rec_id not in self.recommendations:
            raise StoreError(f"unknown recommendation: {rec_id}")
        kids = [r.rec_id for r in self.recommendations.values()
                if r.parent_rec_id == rec_id]
        if kids:
            raise StoreError(
                f"recommendation has children: {', '.join(sorted(kids))}")
        self.notifications = [n for n in self.notifications if n.rec_id != rec_id]
        self.orphaned_recs.discard(rec_id)
        del self.recommendations[rec_id]

    def delete_recommendation(self, rec_id: str) -> None:
        with self._lock:
            self._delete_recommendation_state(rec_id)
            self._append({"op": "del", "entity": "recommendation", "id": rec_id})

    def put_notification(self, notif: Notification) -> None:
        with self._lock:
            self.notifications.append(notif)
            self._append({"op": "put", "record": notification_to_record(notif)})

    def notifications_for(self, recipient: str) -> list[Notification]:
        with self._lock:
            return [n for n in self.notifications if n.recipient == recipient]

    # --- integrity --------------------------------------------------------

    def validate(self) -> list[str]:
        """Full-scan referential check; returns violations, empty when clean."""
        with self._lock:
            bad = []
            for node in self.graph.nodes.values():
                if node.user_id not in self.users:
                    bad.append(f"node {node.node_id}: dangling user {node.user_id}")
                if node.device_id not in self.devices:
                    bad.append(f"node {node.node_id}: dangling device {node.device_id}")
            for arc in self.graph.arcs.values():
                ends = (arc.a, arc.b)
                if arc.kind in (ArcKind.USER_USER, ArcKind.RESOURCE):
                    for end in ends:
                        if end not in self.graph.nodes:
                            bad.append(f"arc {arc.arc_id}: dangling node {end}")
                elif arc.kind is ArcKind.USER_GROUP:
                    if not any(e in self.graph.nodes for e in ends):
                        bad.append(f"arc {arc.arc_id}: no node endpoint")
                    if not any(e in self.groups for e in ends):
                        bad.append(f"arc {arc.arc_id}: dangling group endpoint")
                elif arc.kind is ArcKind.USER_SERVICE:
                    if not any(e in self.services for e in ends):
                        bad.append(f"arc {arc.arc_id}: dangling service endpoint")
            for group in self.groups.values():
                for member in sorted(group.member_ids):
                    if member not in self.users:
                        bad.append(f"group {group.group_id}: dangling member {member}")
            for user_id in self.events:
                if user_id not in self.users:
                    bad.append(f"events: dangling user {user_id}")
            for user_id in self.credentials:
                if user_id not in self.users:
                    bad.append(f"credential: dangling user {user_id}")
            for rec in self.recommendations.values():
                if rec.rec_id in self.orphaned_recs:
                    continue
                for ref in (rec.sender_id, rec.recipient_id):
                    if ref not in self.users:
                        bad.append(f"recommendation {rec.rec_id}: dangling user {ref}")
            rec_ids = set(self.recommendations)
            for notif in self.notifications:
                if notif.rec_id not in rec_ids:
                    bad.append(f"notification {notif.notif_id}: dangling "
                               f"recommendation {notif.rec_id}")
                elif (notif.rec_id not in self.orphaned_recs
                      and notif.recipient not in self.users):
                    bad.append(f"notification {notif.notif_id}: dangling "
                               f"user {notif.recipient}")
            return bad

    # --- snapshot / seed files --------------------------------------------

    def _snapshot_ops(self) -> list[dict[str, Any]]:
        ops: list[dict[str, Any]] = [{"op": "schema", "version": SCHEMA_VERSION}]
        for user_id in sorted(self.users):
            ops.append({"op": "put", "record": to_record(self.users[user_id])})
        for user_id in sorted(self.credentials):
            ops.append({"op": "put", "record": {
                "kind": "credential", "user_id": user_id,
                "secret": self.credentials[user_id]}})
        for device_id in sorted(self.devices):
            ops.append({"op": "put", "record": to_record(self.devices[device_id])})
        for service_id in sorted(self.services):
            ops.append({"op": "put", "record": {"kind": "service",
                                                "service_id": service_id}})
        for group_id in sorted(self.groups):
            ops.append({"op": "put", "record": to_record(self.groups[group_id])})
        for node_id in sorted(self.graph.nodes):
            ops.append({"op": "put", "record": _node_record(self.graph.nodes[node_id])})
        for key in sorted(self.graph.arcs, key=lambda k: (k[0].value, k[1], k[2])):
            ops.append({"op": "put", "record": _arc_record(self.graph.arcs[key])})
        for user_id in sorted(self.events):
            for e in self.events[user_id]:
                ops.append({"op": "put", "record": to_record(e)})
        # orphan markers precede the recommendations they excuse, so replay
        # never applies user checks to records of deleted users
        for rec_id in sorted(self.orphaned_recs):
            ops.append({"op": "orphan", "rec_id": rec_id})
        seen: set[str] = set()

        def emit_rec(rec_id: str) -> None:
            # parents first so replay resolves parent references
            if rec_id in seen:
                return
            rec = self.recommendations[rec_id]
            if rec.parent_rec_id is not None:
                emit_rec(rec.parent_rec_id)
            seen.add(rec_id)
            ops.append({"op": "put", "record": recommendation_to_record(rec)})

        for rec_id in sorted(self.recommendations):
            emit_rec(rec_id)
        for notif in self.notifications:
            ops.append({"op": "put", "record": notification_to_record(notif)})
        return ops

    def compact(self) -> None:
        """Rewrite the file as a snapshot (atomic replace)."""
        with self._lock:
            if self.path is None:
                return
            tmp = self.path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as f:
                for op in self._snapshot_ops():
                    f.write(canonical_json(op) + "\n")
                f.flush()
                os.fsync(f.fileno())
            if self._fh is not None:
                self._fh.close()
            os.replace(tmp, self.path)
            self._fh = open(self.path, "a", encoding="utf-8")

    def export_seed(self, path: str | os.PathLike) -> None:
        """Write the dataset as a seed file (same line format as the WAL
        snapshot, minus the schema header)."""
        with self._lock:
            with open(path, "w", encoding="utf-8") as f:
                for op in self._snapshot_ops():
                    if op.get("op") == "schema":
                        continue
                    f.write(canonical_json(op["record"] if op["op"] == "put" else op)
                            + "\n")

    def import_seed(self, path: str | os.PathLike) -> int:
        """Load canonical records from a seed file; returns records applied.

        Nothing reaches the log until every record applied cleanly and the
        full dataset validated, so a failed import never dirties the file.
        """
        applied: list[dict[str, Any]] = []
        with self._lock:
            with open(path, encoding="utf-8") as f:
                for lineno, raw in enumerate(f, start=1):
                    raw = raw.strip()
                    if not raw or raw.startswith("#"):
                        continue
                    record = json.loads(raw)
                    try:
                        if record.get("op") == "orphan":
                            self.orphaned_recs.add(record["rec_id"])
                            applied.append(record)
                        else:
                            self._apply_put(record)
                            applied.append({"op": "put", "record": record})
                    except (StoreError, GraphError, ValueError) as e:
                        raise IntegrityError([f"seed line {lineno}: {e}"]) from None
            violations = self.validate()
            if violations:
                raise IntegrityError(violations)
            for op in applied:
                self._append(op)
        return len(applied)
