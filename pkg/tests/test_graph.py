import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import degree_sort_oracle
from pubrec.graph import (
    ArcKind,
    GraphError,
    Node,
    SocialGraph,
    load_lines,
    make_arc,
)
from pubrec.profiles import DeviceProfile, ScreenClass, UserProfile
from pubrec.rules import default_rules


def graph_with_nodes(n, prefix="n"):
    g = SocialGraph()
    for i in range(1, n + 1):
        g.add_node(Node(f"{prefix}{i}", f"u{i}", f"d{i}"))
    return g


def star(leaves=4):
    # hub n1, leaves n2..n{leaves+1}
    g = graph_with_nodes(leaves + 1)
    for i in range(2, leaves + 2):
        g.add_interaction(ArcKind.USER_USER, "n1", f"n{i}")
    return g


def test_add_interaction_idempotent():
    g = graph_with_nodes(2)
    a1 = g.add_interaction(ArcKind.USER_USER, "n1", "n2")
    a2 = g.add_interaction(ArcKind.USER_USER, "n2", "n1")
    assert a1 == a2
    assert len(g.arcs) == 1


def test_self_arc_forbidden():
    g = graph_with_nodes(1)
    with pytest.raises(GraphError):
        g.add_interaction(ArcKind.USER_USER, "n1", "n1")


def test_unknown_endpoint_rejected():
    g = graph_with_nodes(1)
    with pytest.raises(GraphError):
        g.add_interaction(ArcKind.USER_USER, "n1", "n9")
    with pytest.raises(GraphError):
        g.add_interaction(ArcKind.USER_GROUP, "n1", "g1")


def test_group_arc_increments_degree():
    g = graph_with_nodes(1)
    g.known_groups.add("g1")
    assert g.degree("n1") == 0
    g.add_interaction(ArcKind.USER_GROUP, "n1", "g1")
    assert g.has_arc(ArcKind.USER_GROUP, "n1", "g1")
    assert g.degree("n1") == 1


def test_degree_counts_all_kinds():
    g = graph_with_nodes(3)
    g.known_groups.add("g1")
    g.add_interaction(ArcKind.USER_USER, "n1", "n2")
    g.add_interaction(ArcKind.USER_USER, "n1", "n3")
    g.add_interaction(ArcKind.USER_GROUP, "n1", "g1")
    assert g.degree("n1") == 3
    assert g.degree("n2") == 1


def test_degree_isolated_and_star():
    g = star(4)
    assert g.degree("n1") == 4
    lonely = graph_with_nodes(1, prefix="x")
    assert lonely.degree("x1") == 0
    with pytest.raises(GraphError):
        g.degree("missing")


def test_central_points_empty_graph():
    assert SocialGraph().central_points(3) == []


def test_central_points_star():
    assert star(4).central_points(1) == ["n1"]


def test_central_points_tie_break():
    # n1-n2, n2-n3, n3-n1: all degree 2; smallest id first
    g = graph_with_nodes(3)
    g.add_interaction(ArcKind.USER_USER, "n1", "n2")
    g.add_interaction(ArcKind.USER_USER, "n2", "n3")
    g.add_interaction(ArcKind.USER_USER, "n3", "n1")
    assert g.central_points(1) == ["n1"]
    assert g.central_points(10) == ["n1", "n2", "n3"]


def test_central_points_matches_oracle_on_random_graphs():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(1, 20)
        g = graph_with_nodes(n)
        ids = sorted(g.nodes)
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.3:
                    g.add_interaction(ArcKind.USER_USER, ids[i], ids[j])
        k = rng.randint(1, n)
        pairs = [(a.a, a.b) for a in g.arcs.values()]
        assert g.central_points(k) == degree_sort_oracle(ids, pairs, k)


def test_resource_arcs_counts():
    req = DeviceProfile("req", ScreenClass.TV, True, 4, 1024)
    weak = DeviceProfile("weak", ScreenClass.MOBILE, False, 2, 512)
    strong = DeviceProfile("strong", ScreenClass.DESKTOP, True, 8, 4096)

    g = graph_with_nodes(3)
    devices = {"d1": weak, "d2": weak, "d3": weak}
    assert g.compute_resource_arcs(req, devices) == set()

    devices = {"d1": strong, "d2": strong, "d3": weak}
    arcs = g.compute_resource_arcs(req, devices)
    assert arcs == {make_arc(ArcKind.RESOURCE, "n1", "n2")}

    g4 = graph_with_nodes(4)
    devices4 = {f"d{i}": strong for i in range(1, 5)}
    assert len(g4.compute_resource_arcs(req, devices4)) == 6  # C(4,2)


def test_resource_arc_count_is_choose_two():
    req = DeviceProfile("req", ScreenClass.TV, False, 1, 256)
    strong = DeviceProfile("s", ScreenClass.TV, True, 9, 9999)
    for s in range(6):
        g = graph_with_nodes(s)
        devices = {f"d{i}": strong for i in range(1, s + 1)}
        assert len(g.compute_resource_arcs(req, devices)) == s * (s - 1) // 2


def test_system_group_singleton_when_no_neighbors():
    g = graph_with_nodes(1)
    profiles = {"u1": UserProfile("u1", "a", 1, 25)}
    group = g.generate_system_group("n1", profiles, default_rules())
    assert group.member_ids == frozenset({"u1"})
    assert group.origin.value == "system"
    assert group.topic  # seed candidates exist for a 25-year-old


def test_system_group_includes_sharing_neighbor():
    g = graph_with_nodes(2)
    g.add_interaction(ArcKind.USER_USER, "n1", "n2")
    profiles = {
        "u1": UserProfile("u1", "a", 1, 25),
        "u2": UserProfile("u2", "b", 1, 30),
    }
    group = g.generate_system_group("n1", profiles, default_rules())
    assert group.member_ids == frozenset({"u1", "u2"})
    assert group.preference_codes  # shared candidate types recorded


def test_system_group_excludes_disjoint_neighbor():
    g = graph_with_nodes(2)
    g.add_interaction(ArcKind.USER_USER, "n1", "n2")
    profiles = {
        "u1": UserProfile("u1", "a", 0, 2),   # {17, 22}
        "u2": UserProfile("u2", "b", 0, 70),  # {26, 8, 9}
    }
    group = g.generate_system_group("n1", profiles, default_rules())
    assert group.member_ids == frozenset({"u1"})


def test_system_group_unknown_seed():
    with pytest.raises(GraphError):
        SocialGraph().generate_system_group("nope", {}, default_rules())


@settings(max_examples=40)
@given(st.integers(2, 12), st.sets(st.tuples(st.integers(1, 12), st.integers(1, 12))))
def test_degree_sum_invariant(n, raw_pairs):
    g = graph_with_nodes(n)
    g.known_groups.add("g1")
    node_node = 0
    for i, j in raw_pairs:
        if i == j or i > n or j > n:
            continue
        before = len(g.arcs)
        g.add_interaction(ArcKind.USER_USER, f"n{i}", f"n{j}")
        node_node += int(len(g.arcs) > before)
    g.add_interaction(ArcKind.USER_GROUP, "n1", "g1")
    total = sum(g.degree(node) for node in g.nodes)
    assert total == 2 * node_node + 1


def test_remove_restores_degree_vector():
    g = star(3)
    before = {n: g.degree(n) for n in g.nodes}
    g.add_interaction(ArcKind.USER_USER, "n2", "n3")
    g.remove_interaction(ArcKind.USER_USER, "n2", "n3")
    assert {n: g.degree(n) for n in g.nodes} == before


def test_dump_load_round_trip():
    g = star(3)
    g.known_groups.add("g1")
    g.add_interaction(ArcKind.USER_GROUP, "n2", "g1")
    text = g.dump_lines()
    g2 = load_lines(text, known_groups={"g1"})
    assert set(g2.nodes) == set(g.nodes)
    assert set(g2.arcs) == set(g.arcs)
    assert g2.dump_lines() == text


def test_load_rejects_garbage():
    with pytest.raises(GraphError):
        load_lines("node n1 u1\n")
