import pytest
from fastapi.testclient import TestClient

from conftest import add_person, befriend
from oracles import filtered_bfs_oracle
from pubrec.profiles import DeviceProfile, ScreenClass
from pubrec.service import ServiceConfig, create_app
from pubrec.store import Store


class Clock:
    def __init__(self, t=1_000.0):
        self.t = t

    def __call__(self):
        return self.t

    def advance(self, dt):
        self.t += dt


@pytest.fixture
def clock():
    return Clock()


@pytest.fixture
def backend(clock):
    """Three women (ages make everyone eligible for type 27), chain A-B-C."""
    store = Store.open()
    add_person(store, 1, gender=1, age=25, name="Ana", secret="s1",
               photo="photo://u1")
    add_person(store, 2, gender=1, age=30, name="Bella", secret="s2")
    add_person(store, 3, gender=1, age=28, name="Carla", secret="s3")
    befriend(store, 1, 2)
    befriend(store, 2, 3)
    app = create_app(store, ServiceConfig(), now=clock)
    return store, TestClient(app)


def login(client, name, secret):
    r = client.post("/session", json={"name": name, "secret": secret})
    assert r.status_code == 200, r.text
    return r.json()["token"]


def auth(token):
    return {"Authorization": f"Bearer {token}"}


# --- sessions ------------------------------------------------------------

def test_login_returns_profile_and_photo(backend):
    _, client = backend
    r = client.post("/session", json={"name": "Ana", "secret": "s1"})
    body = r.json()
    assert body["user"]["user_id"] == "u1"
    assert body["photo_ref"] == "photo://u1"
    assert len(body["token"]) >= 32  # >= 128 bits of entropy


def test_login_rejects_unknown_user_and_bad_secret(backend):
    _, client = backend
    for payload in ({"name": "Nobody", "secret": "x"},
                    {"name": "Ana", "secret": "wrong"}):
        r = client.post("/session", json=payload)
        assert r.status_code == 401
        assert "token" not in r.json()


def test_two_logins_two_distinct_tokens(backend):
    _, client = backend
    t1 = login(client, "Ana", "s1")
    t2 = login(client, "Ana", "s1")
    assert t1 != t2


def test_expired_sessions_rejected_uniformly(backend, clock):
    _, client = backend
    token = login(client, "Ana", "s1")
    clock.advance(3601)
    shapes = set()
    bodies = {"/recommendations": {"target_user": "u2", "type_code": 27,
                                   "title": "", "content": ""},
              "/recommendations/r1/response": {"accept": True}}
    for method, path in [("GET", "/friends"), ("GET", "/groups"),
                         ("GET", "/users?q=a"), ("GET", "/groups/search?q=a"),
                         ("GET", "/types"), ("GET", "/recommendations"),
                         ("GET", "/recommendations/r1"), ("GET", "/notifications"),
                         ("POST", "/recommendations"),
                         ("POST", "/recommendations/r1/response")]:
        r = client.request(method, path, headers=auth(token),
                           json=bodies.get(path) if method == "POST" else None)
        assert r.status_code == 401, path
        body = r.json()
        assert body["error"] == "session_expired"
        shapes.add(tuple(sorted(body)))
    assert len(shapes) == 1  # one error shape everywhere


def test_missing_token_rejected(backend):
    _, client = backend
    assert client.get("/friends").status_code == 401


# --- social surface -------------------------------------------------------

def test_friends_lists_user_user_neighbors(backend):
    store, client = backend
    token_a = login(client, "Ana", "s1")
    friends = client.get("/friends", headers=auth(token_a)).json()["friends"]
    assert [f["user_id"] for f in friends] == ["u2"]

    token_b = login(client, "Bella", "s2")
    friends_b = client.get("/friends", headers=auth(token_b)).json()["friends"]
    assert [f["user_id"] for f in friends_b] == ["u1", "u3"]
    # matches a direct neighbor scan of the graph
    assert [f["user_id"] for f in friends_b] == store.graph.friend_user_ids("u2")


def test_friends_empty_for_isolated_user(backend):
    store, client = backend
    add_person(store, 4, name="Dora", secret="s4")
    token = login(client, "Dora", "s4")
    assert client.get("/friends", headers=auth(token)).json()["friends"] == []


def test_groups_via_membership_arcs(backend):
    store, client = backend
    from pubrec.profiles import GroupOrigin, GroupProfile
    store.put_group(GroupProfile("g1", "Sport", frozenset({"u1", "u2"}),
                                 GroupOrigin.USER_CREATED), sync_member_arcs=True)
    token = login(client, "Ana", "s1")
    groups = client.get("/groups", headers=auth(token)).json()["groups"]
    assert [g["group_id"] for g in groups] == ["g1"]
    token_c = login(client, "Carla", "s3")
    assert client.get("/groups", headers=auth(token_c)).json()["groups"] == []


def test_search_endpoints(backend):
    _, client = backend
    token = login(client, "Ana", "s1")
    users = client.get("/users", params={"q": "lla"}, headers=auth(token)).json()
    assert [u["user_id"] for u in users["users"]] == ["u2"]
    groups = client.get("/groups/search", params={"q": "zzz"},
                        headers=auth(token)).json()
    assert groups["groups"] == []


def test_taxonomy_endpoint(backend):
    _, client = backend
    token = login(client, "Ana", "s1")
    types = client.get("/types", headers=auth(token)).json()["types"]
    assert len(types) == 27
    assert {"code": 27, "label": "Women clothing"} in types


# --- recommendations -------------------------------------------------------

def send(client, token, target, type_code=27, title="Sale", content="...",
         headers=None):
    h = auth(token) | (headers or {})
    return client.post("/recommendations", headers=h,
                       json={"target_user": target, "type_code": type_code,
                             "title": title, "content": content})


def test_send_to_friend_records_sent_and_notifies(backend):
    store, client = backend
    token = login(client, "Ana", "s1")
    r = send(client, token, "u2")
    assert r.status_code == 201
    rec = r.json()["recommendation"]
    assert rec["state"] == "sent"
    assert rec["sender_id"] == "u1" and rec["recipient_id"] == "u2"
    notifs = client.get("/notifications", headers=auth(token)).json()["notifications"]
    assert len(notifs) == 1
    assert notifs[0]["new_state"] == "sent"


def test_send_to_non_friend_distinct_error(backend):
    _, client = backend
    token = login(client, "Ana", "s1")
    r = send(client, token, "u3")  # Carla is Bella's friend, not Ana's
    assert r.status_code == 403
    assert r.json()["error"] == "not_a_friend"


def test_send_bad_type_code(backend):
    _, client = backend
    token = login(client, "Ana", "s1")
    r = send(client, token, "u2", type_code=28)
    assert r.status_code == 400
    assert r.json()["error"] == "invalid_type_code"


def test_send_unknown_target(backend):
    _, client = backend
    token = login(client, "Ana", "s1")
    r = send(client, token, "ghost")
    assert r.status_code == 404
    assert r.json()["error"] == "unknown_user"


def test_empty_inbox_gives_empty_payload(backend):
    _, client = backend
    token = login(client, "Ana", "s1")
    payload = client.get("/recommendations", headers=auth(token)).json()["payload"]
    assert payload["items"] == []


def test_listing_delivers_sent_recommendations(backend):
    store, client = backend
    token_a = login(client, "Ana", "s1")
    rec_id = send(client, token_a, "u2").json()["recommendation"]["rec_id"]
    token_b = login(client, "Bella", "s2")
    payload = client.get("/recommendations", headers=auth(token_b)).json()["payload"]
    assert [i["rec_id"] for i in payload["items"]] == [rec_id]
    assert store.get_recommendation(rec_id).state.value == "delivered"


def test_payload_respects_device_caps(backend, clock):
    store, client = backend
    tiny = DeviceProfile("tiny", ScreenClass.MOBILE, False, 2, 512)
    add_person(store, 5, gender=1, age=40, name="Eva", secret="s5",
               device=tiny)
    befriend(store, 1, 5)
    token_a = login(client, "Ana", "s1")
    for i in range(5):
        assert send(client, token_a, "u5", title=f"t{i}",
                    content="x" * 300).status_code == 201
    token_e = login(client, "Eva", "s5")
    payload = client.get("/recommendations", headers=auth(token_e)).json()["payload"]
    assert len(payload["items"]) <= 2
    assert all(not i["image_included"] for i in payload["items"])
    import json as _json
    canonical = _json.dumps(payload, sort_keys=True, separators=(",", ":"))
    assert len(canonical.encode()) <= 512


def test_view_marks_viewed_and_notifies_sender(backend):
    _, client = backend
    token_a = login(client, "Ana", "s1")
    rec_id = send(client, token_a, "u2").json()["recommendation"]["rec_id"]
    token_b = login(client, "Bella", "s2")
    client.get("/recommendations", headers=auth(token_b))  # deliver
    before = len(client.get("/notifications",
                            headers=auth(token_a)).json()["notifications"])
    r = client.get(f"/recommendations/{rec_id}", headers=auth(token_b))
    assert r.json()["recommendation"]["state"] == "viewed"
    after = len(client.get("/notifications",
                           headers=auth(token_a)).json()["notifications"])
    assert after == before + 1


def test_view_rejected_for_stranger(backend):
    _, client = backend
    token_a = login(client, "Ana", "s1")
    rec_id = send(client, token_a, "u2").json()["recommendation"]["rec_id"]
    token_c = login(client, "Carla", "s3")
    r = client.get(f"/recommendations/{rec_id}", headers=auth(token_c))
    assert r.status_code == 403
    assert r.json()["error"] == "not_recipient"


def test_view_of_unknown_rec(backend):
    _, client = backend
    token = login(client, "Ana", "s1")
    assert client.get("/recommendations/nope",
                      headers=auth(token)).status_code == 404


def test_accept_from_viewed(backend):
    _, client = backend
    token_a = login(client, "Ana", "s1")
    rec_id = send(client, token_a, "u2").json()["recommendation"]["rec_id"]
    token_b = login(client, "Bella", "s2")
    client.get(f"/recommendations/{rec_id}", headers=auth(token_b))  # deliver+view
    r = client.post(f"/recommendations/{rec_id}/response",
                    headers=auth(token_b), json={"accept": True})
    assert r.status_code == 200
    assert r.json()["recommendation"]["state"] == "accepted"
    assert r.json()["diffusion"] is None


def test_accept_from_sent_is_state_error(backend):
    _, client = backend
    token_a = login(client, "Ana", "s1")
    rec_id = send(client, token_a, "u2").json()["recommendation"]["rec_id"]
    token_b = login(client, "Bella", "s2")
    r = client.post(f"/recommendations/{rec_id}/response",
                    headers=auth(token_b), json={"accept": False})
    assert r.status_code == 409
    assert r.json()["error"] == "illegal_transition"


def test_accept_with_snowball_matches_oracle(clock):
    store = Store.open()
    add_person(store, 1, gender=1, age=25, name="Ana", secret="s1")
    add_person(store, 2, gender=1, age=30, name="Bella", secret="s2")
    add_person(store, 3, gender=1, age=28, name="Carla", secret="s3")
    befriend(store, 1, 2)
    befriend(store, 2, 3)
    app = create_app(store, ServiceConfig(snowball_on_accept=True, max_hops=2),
                     now=clock)
    client = TestClient(app)

    token_a = login(client, "Ana", "s1")
    rec_id = send(client, token_a, "u2").json()["recommendation"]["rec_id"]
    token_b = login(client, "Bella", "s2")
    client.get(f"/recommendations/{rec_id}", headers=auth(token_b))
    r = client.post(f"/recommendations/{rec_id}/response",
                    headers=auth(token_b), json={"accept": True})
    report = r.json()["diffusion"]

    adj = {"u1": {"u2"}, "u2": {"u1", "u3"}, "u3": {"u2"}}
    reached, filtered = filtered_bfs_oracle(adj, "u2", {"u1", "u2", "u3"}, 2)
    assert report["reached"] == reached
    assert report["eligible_filtered"] == filtered
    # children were persisted and are visible to their recipients
    token_c = login(client, "Carla", "s3")
    payload = client.get("/recommendations", headers=auth(token_c)).json()["payload"]
    assert len(payload["items"]) == 1


def test_listing_orders_by_watched_genre_boost(backend):
    store, client = backend
    token_a = login(client, "Ana", "s1")
    # Bella (age 30, gender 1) has both 6 and 27 among her candidates
    rec6 = send(client, token_a, "u2", type_code=6).json()["recommendation"]
    rec27 = send(client, token_a, "u2", type_code=27).json()["recommendation"]
    token_b = login(client, "Bella", "s2")
    first = client.get("/recommendations", headers=auth(token_b)).json()["payload"]
    assert [i["rec_id"] for i in first["items"]] == [rec6["rec_id"], rec27["rec_id"]]

    from pubrec.profiles import ContextEvent, EventKind
    store.record_event(ContextEvent("u2", EventKind.PROGRAM_WATCHED,
                                    "Women clothing", 1.0))
    boosted = client.get("/recommendations", headers=auth(token_b)).json()["payload"]
    assert [i["rec_id"] for i in boosted["items"]] == [rec27["rec_id"], rec6["rec_id"]]


def test_rejected_items_leave_the_inbox(backend):
    _, client = backend
    token_a = login(client, "Ana", "s1")
    rec_id = send(client, token_a, "u2").json()["recommendation"]["rec_id"]
    token_b = login(client, "Bella", "s2")
    client.get(f"/recommendations/{rec_id}", headers=auth(token_b))
    client.post(f"/recommendations/{rec_id}/response",
                headers=auth(token_b), json={"accept": False})
    payload = client.get("/recommendations", headers=auth(token_b)).json()["payload"]
    assert payload["items"] == []


# --- idempotency and light-client shape --------------------------------------

def test_repeated_listing_delivers_only_once(backend):
    _, client = backend
    token_a = login(client, "Ana", "s1")
    send(client, token_a, "u2")
    token_b = login(client, "Bella", "s2")
    first = client.get("/recommendations", headers=auth(token_b)).json()
    second = client.get("/recommendations", headers=auth(token_b)).json()
    assert first == second
    states = [n["new_state"] for n in client.get(
        "/notifications", headers=auth(token_a)).json()["notifications"]]
    assert states.count("delivered") == 1


def test_repeated_view_is_naturally_idempotent(backend):
    _, client = backend
    token_a = login(client, "Ana", "s1")
    rec_id = send(client, token_a, "u2").json()["recommendation"]["rec_id"]
    token_b = login(client, "Bella", "s2")
    first = client.get(f"/recommendations/{rec_id}", headers=auth(token_b)).json()
    second = client.get(f"/recommendations/{rec_id}", headers=auth(token_b)).json()
    assert first == second
    states = [n["new_state"] for n in client.get(
        "/notifications", headers=auth(token_a)).json()["notifications"]]
    assert states.count("viewed") == 1


def test_idempotent_send_with_key(backend):
    store, client = backend
    token = login(client, "Ana", "s1")
    h = {"Idempotency-Key": "k-1"}
    r1 = send(client, token, "u2", headers=h)
    r2 = send(client, token, "u2", headers=h)
    assert r1.json() == r2.json()
    assert len(store.recommendations) == 1
    r3 = send(client, token, "u2", headers={"Idempotency-Key": "k-2"})
    assert r3.json()["recommendation"]["rec_id"] != r1.json()["recommendation"]["rec_id"]
    assert len(store.recommendations) == 2


def test_idempotent_response_with_key(backend):
    _, client = backend
    token_a = login(client, "Ana", "s1")
    rec_id = send(client, token_a, "u2").json()["recommendation"]["rec_id"]
    token_b = login(client, "Bella", "s2")
    client.get(f"/recommendations/{rec_id}", headers=auth(token_b))
    h = auth(token_b) | {"Idempotency-Key": "resp-1"}
    r1 = client.post(f"/recommendations/{rec_id}/response", headers=h,
                     json={"accept": True})
    r2 = client.post(f"/recommendations/{rec_id}/response", headers=h,
                     json={"accept": True})
    assert r1.status_code == r2.status_code == 200
    assert r1.json() == r2.json()


FORBIDDEN_KEYS = {"rules", "rule", "ruleset", "arcs", "graph", "adjacency",
                  "conditions", "age_range", "consequent"}


def _collect_keys(value, bag):
    if isinstance(value, dict):
        for k, v in value.items():
            bag.add(k)
            _collect_keys(v, bag)
    elif isinstance(value, list):
        for v in value:
            _collect_keys(v, bag)


def test_responses_are_display_ready_only(backend):
    _, client = backend
    token_a = login(client, "Ana", "s1")
    rec_id = send(client, token_a, "u2").json()["recommendation"]["rec_id"]
    token_b = login(client, "Bella", "s2")
    seen = set()
    for method, path, body in [
        ("GET", "/friends", None),
        ("GET", "/groups", None),
        ("GET", "/users?q=a", None),
        ("GET", "/types", None),
        ("GET", "/recommendations", None),
        ("GET", f"/recommendations/{rec_id}", None),
        ("POST", f"/recommendations/{rec_id}/response", {"accept": True}),
        ("GET", "/notifications", None),
    ]:
        r = client.request(method, path, headers=auth(token_b), json=body)
        assert r.status_code in (200, 201), (path, r.text)
        _collect_keys(r.json(), seen)
    assert seen & FORBIDDEN_KEYS == set()
