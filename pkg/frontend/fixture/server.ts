// Minimal stand-in for the recommendation service, used by the frontend
// tests: canned people, a real-enough session + recommendation lifecycle,
// and the same error shapes as the production API.

import * as http from "node:http";
import type { AddressInfo } from "node:net";

interface FixtureUser {
  user_id: string;
  name: string;
  secret: string;
  photo_ref: string | null;
  friends: string[];
}

const USERS: FixtureUser[] = [
  { user_id: "u1", name: "Ana", secret: "s1", photo_ref: "photo://u1", friends: ["u2", "u3"] },
  { user_id: "u2", name: "Bella", secret: "s2", photo_ref: null, friends: ["u1"] },
  { user_id: "u3", name: "Carla", secret: "s3", photo_ref: null, friends: ["u1"] },
  { user_id: "u9", name: "Dora", secret: "s9", photo_ref: null, friends: [] },
];

const TYPES = [
  { code: 5, label: "Sport" },
  { code: 7, label: "Movies" },
  { code: 8, label: "News" },
  { code: 16, label: "Technology" },
  { code: 27, label: "Women clothing" },
];

const GROUPS = [
  { group_id: "g1", topic: "Movies", member_ids: ["u1", "u2"] },
];

interface FixtureRec {
  rec_id: string;
  type_code: number;
  title: string;
  content: string;
  sender_id: string;
  recipient_id: string;
  state: string;
}

export interface Fixture {
  port: number;
  baseUrl: string;
  close(): Promise<void>;
  recs: Map<string, FixtureRec>;
}

export function startFixture(): Promise<Fixture> {
  const sessions = new Map<string, string>(); // token -> user_id
  const recs = new Map<string, FixtureRec>();
  const notifications: {
    notif_id: string;
    rec_id: string;
    recipient: string;
    old_state: string;
    new_state: string;
    at: number;
  }[] = [];
  let serial = 0;

  const summary = (user: FixtureUser) => ({
    user_id: user.user_id,
    name: user.name,
    photo_ref: user.photo_ref,
  });

  const notify = (rec: FixtureRec, oldState: string, newState: string) => {
    rec.state = newState;
    notifications.push({
      notif_id: `n${++serial}`,
      rec_id: rec.rec_id,
      recipient: rec.sender_id,
      old_state: oldState,
      new_state: newState,
      at: Date.now() / 1000,
    });
  };

  const server = http.createServer((request, response) => {
    const chunks: Buffer[] = [];
    request.on("data", (chunk) => chunks.push(chunk));
    request.on("end", () => {
      const url = new URL(request.url ?? "/", "http://fixture");
      const body = chunks.length
        ? JSON.parse(Buffer.concat(chunks).toString("utf-8"))
        : {};

      const reply = (status: number, payload: unknown) => {
        response.writeHead(status, {
          "Content-Type": "application/json",
          "Access-Control-Allow-Origin": "*",
        });
        response.end(JSON.stringify(payload));
      };

      if (request.method === "POST" && url.pathname === "/session") {
        const user = USERS.find(
          (u) => u.name === body.name && u.secret === body.secret,
        );
        if (!user) {
          reply(401, { error: "auth_failed", message: "unknown user or bad secret" });
          return;
        }
        const token = `tok-${++serial}`;
        sessions.set(token, user.user_id);
        reply(200, {
          token,
          expires_at: Date.now() / 1000 + 3600,
          user: { user_id: user.user_id, name: user.name },
          photo_ref: user.photo_ref,
        });
        return;
      }

      const token = (request.headers.authorization ?? "").replace("Bearer ", "");
      const callerId = sessions.get(token);
      if (!callerId) {
        reply(401, { error: "invalid_session", message: "session rejected" });
        return;
      }
      const caller = USERS.find((u) => u.user_id === callerId)!;

      if (request.method === "GET" && url.pathname === "/friends") {
        reply(200, {
          friends: caller.friends.map(
            (id) => summary(USERS.find((u) => u.user_id === id)!),
          ),
        });
      } else if (request.method === "GET" && url.pathname === "/groups") {
        reply(200, {
          groups: GROUPS.filter((g) => g.member_ids.includes(callerId)),
        });
      } else if (request.method === "GET" && url.pathname === "/users") {
        const q = (url.searchParams.get("q") ?? "").toLowerCase();
        reply(200, {
          users: USERS.filter((u) => u.name.toLowerCase().includes(q)).map(summary),
        });
      } else if (request.method === "GET" && url.pathname === "/groups/search") {
        const q = (url.searchParams.get("q") ?? "").toLowerCase();
        reply(200, {
          groups: GROUPS.filter(
            (g) =>
              g.group_id.toLowerCase().includes(q) ||
              g.topic.toLowerCase().includes(q),
          ),
        });
      } else if (request.method === "GET" && url.pathname === "/types") {
        reply(200, { types: TYPES });
      } else if (request.method === "POST" && url.pathname === "/recommendations") {
        if (!TYPES.some((t) => t.code === body.type_code)) {
          reply(400, { error: "invalid_type_code", message: `type code out of range: ${body.type_code}` });
          return;
        }
        if (!USERS.some((u) => u.user_id === body.target_user)) {
          reply(404, { error: "unknown_user", message: `no such user: ${body.target_user}` });
          return;
        }
        if (!caller.friends.includes(body.target_user)) {
          reply(403, { error: "not_a_friend", message: "recommendations go to friends only" });
          return;
        }
        const rec: FixtureRec = {
          rec_id: `r${++serial}`,
          type_code: body.type_code,
          title: body.title ?? "",
          content: body.content ?? "",
          sender_id: callerId,
          recipient_id: body.target_user,
          state: "created",
        };
        recs.set(rec.rec_id, rec);
        notify(rec, "created", "sent");
        reply(201, { recommendation: rec });
      } else if (request.method === "GET" && url.pathname === "/recommendations") {
        const mine = [...recs.values()].filter(
          (r) => r.recipient_id === callerId && r.state !== "rejected",
        );
        for (const rec of mine) {
          if (rec.state === "sent") notify(rec, "sent", "delivered");
        }
        reply(200, {
          payload: {
            device_id: "fixture",
            variant: "full",
            items: mine.map((r) => ({
              rec_id: r.rec_id,
              title: r.title,
              content_excerpt: r.content,
              image_included: false,
            })),
          },
        });
      } else if (url.pathname.startsWith("/recommendations/")) {
        const [, , recId, tail] = url.pathname.split("/");
        const rec = recs.get(recId);
        if (!rec) {
          reply(404, { error: "unknown_recommendation", message: `no such recommendation: ${recId}` });
          return;
        }
        if (rec.recipient_id !== callerId) {
          reply(403, { error: "not_recipient", message: "only the recipient can act here" });
          return;
        }
        if (request.method === "GET" && !tail) {
          if (rec.state === "sent") notify(rec, "sent", "delivered");
          if (rec.state === "delivered") notify(rec, "delivered", "viewed");
          reply(200, { recommendation: rec });
        } else if (request.method === "POST" && tail === "response") {
          if (rec.state !== "viewed") {
            reply(409, { error: "illegal_transition", message: `illegal transition: ${rec.state} -> ${body.accept ? "accepted" : "rejected"}` });
            return;
          }
          notify(rec, "viewed", body.accept ? "accepted" : "rejected");
          reply(200, { recommendation: rec, diffusion: null });
        } else {
          reply(404, { error: "not_found", message: "no such endpoint" });
        }
      } else if (request.method === "GET" && url.pathname === "/notifications") {
        reply(200, {
          notifications: notifications.filter((n) => n.recipient === callerId),
        });
      } else {
        reply(404, { error: "not_found", message: "no such endpoint" });
      }
    });
  });

  return new Promise((resolve) => {
    server.listen(0, "127.0.0.1", () => {
      const port = (server.address() as AddressInfo).port;
      resolve({
        port,
        baseUrl: `http://127.0.0.1:${port}`,
        recs,
        close: () =>
          new Promise<void>((done) => {
            server.close(() => done());
          }),
      });
    });
  });
}
