"""Typed interaction graph: nodes are user+device pairs, arcs are interactions.

Arcs are undirected, unweighted and deduplicated by their (kind, endpoints)
unordered pair. Two arc classes exist: use interactions (user-user,
user-group, user-service) and resource interactions (device-capability
pairings between nodes). Central points are simply the nodes of highest
degree.

Dump/load uses a line-oriented edge-list format::

    node <node-id> <user-id> <device-id>
    arc <kind> <endpoint-a> <endpoint-b>

Ids must not contain whitespace in this format.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .profiles import DeviceProfile, GroupOrigin, GroupProfile, UserProfile, type_label
from .rules import RuleSet, match_rules


class GraphError(ValueError):
    pass


class ArcKind(str, Enum):
    USER_USER = "user_user"
    USER_GROUP = "user_group"
    USER_SERVICE = "user_service"
    RESOURCE = "resource"


#: Arc kinds whose endpoints are both graph nodes.
NODE_NODE_KINDS = frozenset({ArcKind.USER_USER, ArcKind.RESOURCE})


@dataclass(frozen=True)
class Node:
    node_id: str
    user_id: str
    device_id: str


@dataclass(frozen=True)
class Arc:
    arc_id: str
    kind: ArcKind
    a: str
    b: str
    created_at: float = 0.0

    @property
    def key(self) -> tuple[ArcKind, str, str]:
        lo, hi = sorted((self.a, self.b))
        return (self.kind, lo, hi)


def arc_key(kind: ArcKind, a: str, b: str) -> tuple[ArcKind, str, str]:
    lo, hi = sorted((a, b))
    return (kind, lo, hi)


def make_arc(kind: ArcKind, a: str, b: str, created_at: float = 0.0) -> Arc:
    lo, hi = sorted((a, b))
    return Arc(f"arc:{kind.value}:{lo}:{hi}", kind, lo, hi, created_at)


class SocialGraph:
    """Mutable graph container; the store serializes all mutation.

    Group and service ids are registered so arc endpoints can be checked
    without reaching back into the store.
    """

    def __init__(self) -> None:
        self.nodes: dict[str, Node] = {}
        self.arcs: dict[tuple[ArcKind, str, str], Arc] = {}
        self.known_groups: set[str] = set()
        self.known_services: set[str] = set()
        self._by_user: dict[str, str] = {}

    def copy(self) -> "SocialGraph":
        """Consistent snapshot: independent containers, shared frozen values."""
        g = SocialGraph()
        g.nodes = dict(self.nodes)
        g.arcs = dict(self.arcs)
        g.known_groups = set(self.known_groups)
        g.known_services = set(self.known_services)
        g._by_user = dict(self._by_user)
        return g

    # --- nodes --------------------------------------------------------

    def add_node(self, node: Node) -> None:
        if node.node_id in self.nodes:
            existing = self.nodes[node.node_id]
            if existing != node:
                raise GraphError(f"node id already taken: {node.node_id}")
            return
        self.nodes[node.node_id] = node
        self._by_user[node.user_id] = node.node_id

    def remove_node(self, node_id: str) -> list[Arc]:
        """Drop a node and every arc touching it; returns the dropped arcs."""
        node = self.nodes.pop(node_id, None)
        if node is None:
            return []
        self._by_user.pop(node.user_id, None)
        dropped = [a for a in self.arcs.values() if node_id in (a.a, a.b)]
        for a in dropped:
            del self.arcs[a.key]
        return dropped

    def node_for_user(self, user_id: str) -> Node:
        node_id = self._by_user.get(user_id)
        if node_id is None:
            raise GraphError(f"no node for user: {user_id}")
        return self.nodes[node_id]

    # --- arcs ---------------------------------------------------------

    def add_interaction(
        self, kind: ArcKind, a: str, b: str, created_at: float = 0.0
    ) -> Arc:
        """Record an interaction arc; idempotent on duplicates."""
        if kind in NODE_NODE_KINDS:
            for end in (a, b):
                if end not in self.nodes:
                    raise GraphError(f"unknown node: {end}")
            if kind is ArcKind.USER_USER and a == b:
                raise GraphError(f"self arc forbidden: {a}")
        else:
            # endpoints are unordered: one must be a node, the other a
            # registered group/service
            node_end, other = (a, b) if a in self.nodes else (b, a)
            if node_end not in self.nodes:
                raise GraphError(f"unknown node: {a}")
            registry = (self.known_groups if kind is ArcKind.USER_GROUP
                        else self.known_services)
            if other not in registry:
                noun = "group" if kind is ArcKind.USER_GROUP else "service"
                raise GraphError(f"unknown {noun}: {other}")
        key = arc_key(kind, a, b)
        existing = self.arcs.get(key)
        if existing is not None:
            return existing
        arc = make_arc(kind, a, b, created_at)
        self.arcs[key] = arc
        return arc

    def remove_interaction(self, kind: ArcKind, a: str, b: str) -> bool:
        return self.arcs.pop(arc_key(kind, a, b), None) is not None

    def has_arc(self, kind: ArcKind, a: str, b: str) -> bool:
        return arc_key(kind, a, b) in self.arcs

    # --- analysis -----------------------------------------------------

    def degree(self, node_id: str) -> int:
        """Count of arcs of any kind incident to the node."""
        if node_id not in self.nodes:
            raise GraphError(f"unknown node: {node_id}")
        return sum(1 for a in self.arcs.values() if node_id in (a.a, a.b))

    def central_points(self, k: int) -> list[str]:
        """The k node ids of highest degree, descending; ties break by
        ascending node id. Returns fewer when the graph is smaller."""
        if k < 1:
            raise GraphError(f"k must be positive: {k}")
        ranked = sorted(self.nodes, key=lambda n: (-self.degree(n), n))
        return ranked[:k]

    def user_neighbors(self, node_id: str) -> list[str]:
        """Node ids linked to node_id by a user-user arc, sorted."""
        out = []
        for a in self.arcs.values():
            if a.kind is not ArcKind.USER_USER:
                continue
            if a.a == node_id:
                out.append(a.b)
            elif a.b == node_id:
                out.append(a.a)
        return sorted(out)

    def friend_user_ids(self, user_id: str) -> list[str]:
        node = self.node_for_user(user_id)
        return sorted(
            self.nodes[n].user_id for n in self.user_neighbors(node.node_id)
        )

    def group_ids_of_node(self, node_id: str) -> list[str]:
        out = []
        for a in self.arcs.values():
            if a.kind is not ArcKind.USER_GROUP:
                continue
            if a.a == node_id:
                out.append(a.b)
            elif a.b == node_id:
                out.append(a.a)
        return sorted(out)

    def compute_resource_arcs(
        self, requirements: DeviceProfile, devices: Mapping[str, DeviceProfile]
    ) -> set[Arc]:
        """Resource arcs between every pair of nodes whose devices satisfy
        the given minimums (image support required only when the
        requirement profile asks for it). The arcs are returned, not added.
        """

        def satisfies(dev: DeviceProfile) -> bool:
            if requirements.image_support and not dev.image_support:
                return False
            return (
                dev.max_list_items >= requirements.max_list_items
                and dev.max_payload_bytes >= requirements.max_payload_bytes
            )

        ok = sorted(
            n.node_id
            for n in self.nodes.values()
            if n.device_id in devices and satisfies(devices[n.device_id])
        )
        return {
            make_arc(ArcKind.RESOURCE, ok[i], ok[j])
            for i in range(len(ok))
            for j in range(i + 1, len(ok))
        }

    def generate_system_group(
        self,
        seed_node_id: str,
        profiles: Mapping[str, UserProfile],
        ruleset: RuleSet,
        group_id: str | None = None,
    ) -> GroupProfile:
        """System-generated group around a seed node.

        Members are the seed user plus every user-user neighbor sharing at
        least one candidate recommendation type with the seed. The topic is
        the label of the most common shared type (ties break by ascending
        code); a seed with no sharing neighbors gets its own lowest
        candidate as topic, or an empty topic if it matches no rule.
        """
        seed = self.nodes.get(seed_node_id)
        if seed is None:
            raise GraphError(f"unknown node: {seed_node_id}")
        seed_cands = match_rules(profiles[seed.user_id], ruleset)
        members = {seed.user_id}
        shared_counts: Counter[int] = Counter()
        for nb in self.user_neighbors(seed_node_id):
            user_id = self.nodes[nb].user_id
            shared = seed_cands & match_rules(profiles[user_id], ruleset)
            if shared:
                members.add(user_id)
                shared_counts.update(shared)
        if shared_counts:
            top = min(shared_counts, key=lambda c: (-shared_counts[c], c))
            topic = type_label(top)
            prefs = frozenset(shared_counts)
        elif seed_cands:
            topic = type_label(min(seed_cands))
            prefs = frozenset()
        else:
            topic = ""
            prefs = frozenset()
        return GroupProfile(
            group_id=group_id or f"sg-{seed_node_id}",
            topic=topic,
            member_ids=frozenset(members),
            origin=GroupOrigin.SYSTEM_GENERATED,
            preference_codes=prefs,
        )

    # --- dump / load ----------------------------------------------------

    def dump_lines(self) -> str:
        lines = []
        for node_id in sorted(self.nodes):
            n = self.nodes[node_id]
            lines.append(f"node {n.node_id} {n.user_id} {n.device_id}")
        for key in sorted(self.arcs, key=lambda k: (k[0].value, k[1], k[2])):
            a = self.arcs[key]
            lines.append(f"arc {a.kind.value} {a.a} {a.b}")
        return "\n".join(lines) + ("\n" if lines else "")


def load_lines(
    text: str,
    known_groups: Iterable[str] = (),
    known_services: Iterable[str] = (),
) -> SocialGraph:
    g = SocialGraph()
    g.known_groups = set(known_groups)
    g.known_services = set(known_services)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "node" and len(parts) == 4:
            g.add_node(Node(parts[1], parts[2], parts[3]))
        elif parts[0] == "arc" and len(parts) == 4:
            g.add_interaction(ArcKind(parts[1]), parts[2], parts[3])
        else:
            raise GraphError(f"unparseable graph line {lineno}: {raw!r}")
    return g
