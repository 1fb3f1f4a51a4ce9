"""HTTP boundary: session-managed endpoints over the store.

Every computation stays server-side; responses carry only display-ready
data (profiles, adapted payloads, notification records), never rules or
raw graph structure, so any client can stay light. Endpoints::

    POST /session                          log in, returns token + profile
    GET  /friends                          user-user neighbors of the caller
    GET  /groups                           the caller's groups
    GET  /users?q=                         search people by name
    GET  /groups/search?q=                 search groups by id or topic
    GET  /types                            the recommendation taxonomy
    POST /recommendations                  send to a friend
    GET  /recommendations                  ranked, device-adapted inbox
    GET  /recommendations/{id}             full item (recipient only)
    POST /recommendations/{id}/response    accept or reject
    GET  /notifications                    state changes of items you sent

All endpoints but POST /session expect ``Authorization: Bearer <token>``
and reject missing/expired sessions with one error shape. State-changing
requests may carry an ``Idempotency-Key`` header; retries with the same
key replay the stored response instead of re-executing.

Configuration comes from a ``key = value`` file overridable by
``PUBREC_*`` environment variables.
"""

from __future__ import annotations

import os
import secrets
import time
from dataclasses import dataclass, replace as dc_replace
from typing import Any, Callable, Mapping

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .adaptation import adapt_payload
from .diffusion import (
    RecState,
    Recommendation,
    TransitionError,
    notification_to_record,
    recommendation_to_record,
    snowball,
    transition,
)
from .graph import GraphError
from .profiles import (
    DeviceProfile,
    GroupProfile,
    ScreenClass,
    TYPE_LABELS,
    UserProfile,
    is_valid_type_code,
    to_record,
)
from .rules import RuleSet, default_rules, load_rules, match_rules, rank_candidates
from .store import Store, StoreError

#: Context window consulted when ranking: the newest events of the caller.
RECENT_EVENT_WINDOW = 20

_ENV_PREFIX = "PUBREC_"


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8990
    store_path: str | None = None
    snowball_on_accept: bool = False
    max_hops: int = 2
    session_ttl_seconds: float = 3600.0
    rules_path: str | None = None


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in _BOOL_TRUE:
        return True
    if low in _BOOL_FALSE:
        return False
    raise ValueError(f"not a boolean: {text!r}")


def load_config(path: str | None = None,
                env: Mapping[str, str] | None = None) -> ServiceConfig:
    """Read ``key = value`` config, then apply PUBREC_* env overrides.

    Keys: listen (host:port), store, snowball_on_accept, max_hops,
    session_ttl_seconds, rules.
    """
    values: dict[str, str] = {}
    if path is not None:
        with open(path, encoding="utf-8") as f:
            for lineno, raw in enumerate(f, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"bad config line {lineno}: {raw!r}")
                key, _, value = line.partition("=")
                values[key.strip()] = value.strip()
    env = os.environ if env is None else env
    for key in ("listen", "store", "snowball_on_accept", "max_hops",
                "session_ttl_seconds", "rules"):
        env_key = _ENV_PREFIX + key.upper()
        if env_key in env:
            values[key] = env[env_key]
    cfg = ServiceConfig()
    if "listen" in values:
        host, _, port = values["listen"].rpartition(":")
        cfg = dc_replace(cfg, host=host or cfg.host, port=int(port))
    if "store" in values:
        cfg = dc_replace(cfg, store_path=values["store"] or None)
    if "snowball_on_accept" in values:
        cfg = dc_replace(cfg, snowball_on_accept=_parse_bool(values["snowball_on_accept"]))
    if "max_hops" in values:
        cfg = dc_replace(cfg, max_hops=int(values["max_hops"]))
    if "session_ttl_seconds" in values:
        cfg = dc_replace(cfg, session_ttl_seconds=float(values["session_ttl_seconds"]))
    if "rules" in values:
        cfg = dc_replace(cfg, rules_path=values["rules"] or None)
    return cfg


# --- sessions ---------------------------------------------------------------

class SessionError(Exception):
    def __init__(self, code: str):
        self.code = code
        super().__init__(code)


@dataclass(frozen=True)
class Session:
    token: str
    user_id: str
    expires_at: float


class SessionManager:
    """Tokens carry 256 bits of entropy; expired sessions are rejected
    everywhere and swept opportunistically."""

    def __init__(self, ttl_seconds: float, now: Callable[[], float] = time.time):
        self._ttl = ttl_seconds
        self._now = now
        self._sessions: dict[str, Session] = {}

    def create(self, user_id: str) -> Session:
        self.sweep()
        session = Session(secrets.token_hex(32), user_id, self._now() + self._ttl)
        self._sessions[session.token] = session
        return session

    def resolve(self, token: str) -> str:
        session = self._sessions.get(token)
        if session is None:
            raise SessionError("invalid_session")
        if session.expires_at <= self._now():
            # left in place for sweep() so retries keep seeing "expired"
            raise SessionError("session_expired")
        return session.user_id

    def sweep(self) -> None:
        now = self._now()
        for token in [t for t, s in self._sessions.items() if s.expires_at <= now]:
            del self._sessions[token]

    def expire(self, token: str) -> None:
        self._sessions.pop(token, None)


# --- app ---------------------------------------------------------------

class ApiError(Exception):
    def __init__(self, status_code: int, code: str, message: str):
        self.status_code = status_code
        self.code = code
        self.message = message
        super().__init__(message)


class LoginBody(BaseModel):
    name: str
    secret: str


class RecommendBody(BaseModel):
    target_user: str
    type_code: int
    title: str = ""
    content: str = ""


class ResponseBody(BaseModel):
    accept: bool


#: Capabilities assumed for a caller whose user has no node/device yet.
_FALLBACK_DEVICE_ID = "unregistered"


def _user_summary(u: UserProfile) -> dict[str, Any]:
    return {
        "user_id": u.user_id,
        "name": u.name,
        "gender_code": u.gender_code,
        "age": u.age,
        "photo_ref": u.photo_ref,
    }


def _group_summary(g: GroupProfile) -> dict[str, Any]:
    return {
        "group_id": g.group_id,
        "topic": g.topic,
        "origin": g.origin.value,
        "member_ids": sorted(g.member_ids),
        "preference_codes": sorted(g.preference_codes),
    }


def create_app(store: Store, config: ServiceConfig | None = None,
               now: Callable[[], float] = time.time) -> FastAPI:
    config = config or ServiceConfig()
    ruleset: RuleSet = (load_rules(config.rules_path) if config.rules_path
                        else default_rules())
    sessions = SessionManager(config.session_ttl_seconds, now)
    idempotency_cache: dict[tuple[str, str, str, str], tuple[int, Any]] = {}

    app = FastAPI(title="pubrec", openapi_url=None)
    app.state.store = store
    app.state.sessions = sessions
    app.state.config = config

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status_code,
                            content={"error": exc.code, "message": exc.message})

    def current_user(authorization: str | None = Header(default=None)) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise ApiError(401, "invalid_session", "missing bearer token")
        try:
            return sessions.resolve(authorization.removeprefix("Bearer "))
        except SessionError as e:
            raise ApiError(401, e.code, "session rejected") from None

    def idempotency_key(request: Request) -> str | None:
        return request.headers.get("Idempotency-Key")

    def run_idempotent(user_id: str, slot: str, key: str | None,
                       producer: Callable[[], tuple[int, Any]]) -> JSONResponse:
        if key is not None:
            cached = idempotency_cache.get((user_id, slot, key, ""))
            if cached is not None:
                return JSONResponse(status_code=cached[0], content=cached[1])
        status, body = producer()
        if key is not None:
            idempotency_cache[(user_id, slot, key, "")] = (status, body)
        return JSONResponse(status_code=status, content=body)

    def friend_ids(user_id: str) -> list[str]:
        try:
            return store.graph.friend_user_ids(user_id)
        except GraphError:
            return []

    def caller_device(user_id: str) -> DeviceProfile:
        try:
            node = store.graph.node_for_user(user_id)
            return store.get_device(node.device_id)
        except (GraphError, StoreError):
            return DeviceProfile(_FALLBACK_DEVICE_ID, ScreenClass.DESKTOP,
                                 True, 10, 65536)

    def record_transition(rec: Recommendation, state: RecState) -> Recommendation:
        updated, notif = transition(rec, state, notif_id=store.new_id("n"), now=now)
        store.put_recommendation(updated)
        store.put_notification(notif)
        return updated

    # --- endpoints ----------------------------------------------------

    @app.post("/session")
    def principal(body: LoginBody):
        user = store.user_by_name(body.name)
        if user is None or store.credentials.get(user.user_id) != body.secret:
            raise ApiError(401, "auth_failed", "unknown user or bad secret")
        session = sessions.create(user.user_id)
        return {
            "token": session.token,
            "expires_at": session.expires_at,
            "user": to_record(user),
            "photo_ref": user.photo_ref,
        }

    @app.get("/friends")
    def see_friends(user_id: str = Depends(current_user)):
        return {"friends": [_user_summary(store.get_user(f))
                            for f in friend_ids(user_id)]}

    @app.get("/groups")
    def see_groups(user_id: str = Depends(current_user)):
        try:
            node = store.graph.node_for_user(user_id)
            group_ids = store.graph.group_ids_of_node(node.node_id)
        except GraphError:
            group_ids = []
        return {"groups": [_group_summary(store.get_group(g)) for g in group_ids]}

    @app.get("/users")
    def search_person(q: str = Query(default=""),
                      user_id: str = Depends(current_user)):
        return {"users": [_user_summary(u) for u in store.search_users(q)]}

    @app.get("/groups/search")
    def search_group(q: str = Query(default=""),
                     user_id: str = Depends(current_user)):
        return {"groups": [_group_summary(g) for g in store.search_groups(q)]}

    @app.get("/types")
    def taxonomy(user_id: str = Depends(current_user)):
        return {"types": [{"code": c, "label": l}
                          for c, l in sorted(TYPE_LABELS.items())]}

    @app.post("/recommendations")
    def do_recommendation(body: RecommendBody, request: Request,
                          user_id: str = Depends(current_user)):
        def produce() -> tuple[int, Any]:
            if not is_valid_type_code(body.type_code):
                raise ApiError(400, "invalid_type_code",
                               f"type code out of range: {body.type_code}")
            try:
                store.get_user(body.target_user)
            except StoreError:
                raise ApiError(404, "unknown_user",
                               f"no such user: {body.target_user}") from None
            if body.target_user not in friend_ids(user_id):
                raise ApiError(403, "not_a_friend",
                               "recommendations go to friends only")
            rec = Recommendation(
                rec_id=store.new_id("r"),
                type_code=body.type_code,
                title=body.title,
                content=body.content,
                sender_id=user_id,
                recipient_id=body.target_user,
            )
            store.put_recommendation(rec)
            rec = record_transition(rec, RecState.SENT)
            return 201, {"recommendation": recommendation_to_record(rec)}

        return run_idempotent(user_id, "POST /recommendations",
                              idempotency_key(request), produce)

    @app.get("/recommendations")
    def list_recommendations(user_id: str = Depends(current_user)):
        profile = store.get_user(user_id)
        incoming = []
        for rec in store.recommendations_for(user_id):
            if rec.state is RecState.SENT:
                rec = record_transition(rec, RecState.DELIVERED)
            if rec.state is not RecState.REJECTED:
                incoming.append(rec)
        ranked = rank_candidates(match_rules(profile, ruleset),
                                 store.events_for(user_id)[-RECENT_EVENT_WINDOW:])
        position = {code: i for i, code in enumerate(ranked)}
        incoming.sort(key=lambda r: (position.get(r.type_code, len(ranked)),
                                     r.type_code, r.rec_id))
        images = {}
        for rec in incoming:
            try:
                images[rec.rec_id] = store.get_user(rec.sender_id).photo_ref is not None
            except StoreError:
                images[rec.rec_id] = False
        payload = adapt_payload(incoming, caller_device(user_id), images)
        return {"payload": payload.to_record()}

    @app.get("/recommendations/{rec_id}")
    def view_recommendation(rec_id: str, user_id: str = Depends(current_user)):
        try:
            rec = store.get_recommendation(rec_id)
        except StoreError:
            raise ApiError(404, "unknown_recommendation",
                           f"no such recommendation: {rec_id}") from None
        if rec.recipient_id != user_id:
            raise ApiError(403, "not_recipient",
                           "only the recipient can view a recommendation")
        if rec.state is RecState.SENT:
            rec = record_transition(rec, RecState.DELIVERED)
        if rec.state is RecState.DELIVERED:
            rec = record_transition(rec, RecState.VIEWED)
        return {"recommendation": recommendation_to_record(rec)}

    @app.post("/recommendations/{rec_id}/response")
    def respond_recommendation(rec_id: str, body: ResponseBody, request: Request,
                               user_id: str = Depends(current_user)):
        def produce() -> tuple[int, Any]:
            try:
                rec = store.get_recommendation(rec_id)
            except StoreError:
                raise ApiError(404, "unknown_recommendation",
                               f"no such recommendation: {rec_id}") from None
            if rec.recipient_id != user_id:
                raise ApiError(403, "not_recipient",
                               "only the recipient can respond")
            target = RecState.ACCEPTED if body.accept else RecState.REJECTED
            try:
                rec = record_transition(rec, target)
            except TransitionError as e:
                raise ApiError(409, "illegal_transition", str(e)) from None
            diffusion = None
            if body.accept and config.snowball_on_accept:
                report = snowball(store.graph_snapshot(), rec, config.max_hops,
                                  ruleset, dict(store.users))
                for child in report.children:
                    store.put_recommendation(child)
                diffusion = report.to_record()
            return 200, {"recommendation": recommendation_to_record(rec),
                         "diffusion": diffusion}

        return run_idempotent(user_id, f"POST /recommendations/{rec_id}/response",
                              idempotency_key(request), produce)

    @app.get("/notifications")
    def list_notifications(user_id: str = Depends(current_user)):
        return {"notifications": [notification_to_record(n)
                                  for n in store.notifications_for(user_id)]}

    return app


def serve(config: ServiceConfig) -> None:
    """Boot the service against the configured store (blocking)."""
    import uvicorn

    store = Store.open(config.store_path)
    app = create_app(store, config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
