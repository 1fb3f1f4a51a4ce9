// Test plumbing: a canned Api implementation, remote-key driving and
// keyboard path computation. Tests interact with the app exclusively
// through remote keys, proving arrows+OK+back+colors operate everything.

import type {
  AdaptedPayload,
  Api,
  GroupSummary,
  LoginResult,
  NotificationRecord,
  RecommendationRecord,
  TypeEntry,
  UserSummary,
} from "../src/api.js";
import { ApiError } from "../src/api.js";
import { App } from "../src/app.js";
import type { RemoteKey } from "../src/keys.js";

export interface FakeOverrides {
  friends?: UserSummary[];
  groups?: GroupSummary[];
  types?: TypeEntry[];
  inboxItems?: AdaptedPayload["items"];
  notifications?: NotificationRecord[];
  nonFriendIds?: string[];
  failFriends?: boolean;
}

const DEFAULT_FRIENDS: UserSummary[] = [
  { user_id: "u2", name: "Bella", photo_ref: null },
  { user_id: "u3", name: "Carla", photo_ref: "photo://u3" },
  { user_id: "u4", name: "Dora", photo_ref: null },
];

const DEFAULT_GROUPS: GroupSummary[] = [
  { group_id: "g1", topic: "Topic One", member_ids: ["u1", "u2"] },
  { group_id: "g2", topic: "Topic Two", member_ids: ["u1"] },
];

// neutral labels on purpose; the real taxonomy lives server-side
const DEFAULT_TYPES: TypeEntry[] = Array.from({ length: 9 }, (_, i) => ({
  code: i + 1,
  label: `Type ${i + 1}`,
}));

export class FakeApi implements Api {
  calls: string[] = [];
  sent: { target: string; typeCode: number; title: string; content: string }[] = [];
  responded: { recId: string; accept: boolean }[] = [];

  constructor(private readonly overrides: FakeOverrides = {}) {}

  async login(name: string, secret: string): Promise<LoginResult> {
    this.calls.push(`login:${name}`);
    if (name !== "Ana" || secret !== "s1") {
      throw new ApiError(401, "auth_failed", "unknown user or bad secret");
    }
    return {
      token: "tok",
      user: { user_id: "u1", name: "Ana" },
      photo_ref: "photo://u1",
    };
  }

  async friends(): Promise<UserSummary[]> {
    this.calls.push("friends");
    if (this.overrides.failFriends) {
      throw new ApiError(500, "boom", "friends backend unavailable");
    }
    return this.overrides.friends ?? DEFAULT_FRIENDS;
  }

  async groups(): Promise<GroupSummary[]> {
    this.calls.push("groups");
    return this.overrides.groups ?? DEFAULT_GROUPS;
  }

  async searchUsers(q: string): Promise<UserSummary[]> {
    this.calls.push(`searchUsers:${q}`);
    const everyone = [
      ...DEFAULT_FRIENDS,
      { user_id: "u9", name: "Eve", photo_ref: null },
    ];
    return everyone.filter((u) =>
      u.name.toLowerCase().includes(q.toLowerCase()),
    );
  }

  async searchGroups(q: string): Promise<GroupSummary[]> {
    this.calls.push(`searchGroups:${q}`);
    return (this.overrides.groups ?? DEFAULT_GROUPS).filter(
      (g) =>
        g.group_id.toLowerCase().includes(q.toLowerCase()) ||
        g.topic.toLowerCase().includes(q.toLowerCase()),
    );
  }

  async types(): Promise<TypeEntry[]> {
    this.calls.push("types");
    return this.overrides.types ?? DEFAULT_TYPES;
  }

  async inbox(): Promise<AdaptedPayload> {
    this.calls.push("inbox");
    return {
      device_id: "dTest",
      variant: "full",
      items: this.overrides.inboxItems ?? [
        {
          rec_id: "r1",
          title: "First offer",
          content_excerpt: "first excerpt",
          image_included: false,
        },
        {
          rec_id: "r2",
          title: "Second offer",
          content_excerpt: "second excerpt",
          image_included: true,
        },
      ],
    };
  }

  async view(recId: string): Promise<RecommendationRecord> {
    this.calls.push(`view:${recId}`);
    return {
      rec_id: recId,
      type_code: 1,
      title: "First offer",
      content: "full content",
      sender_id: "u2",
      recipient_id: "u1",
      state: "viewed",
    };
  }

  async send(
    target: string,
    typeCode: number,
    title: string,
    content: string,
  ): Promise<RecommendationRecord> {
    this.calls.push(`send:${target}`);
    if ((this.overrides.nonFriendIds ?? []).includes(target)) {
      throw new ApiError(403, "not_a_friend", "recommendations go to friends only");
    }
    this.sent.push({ target, typeCode, title, content });
    return {
      rec_id: `r${this.sent.length}`,
      type_code: typeCode,
      title,
      content,
      sender_id: "u1",
      recipient_id: target,
      state: "sent",
    };
  }

  async respond(recId: string, accept: boolean): Promise<RecommendationRecord> {
    this.calls.push(`respond:${recId}:${accept}`);
    this.responded.push({ recId, accept });
    return {
      rec_id: recId,
      type_code: 1,
      title: "First offer",
      content: "full content",
      sender_id: "u2",
      recipient_id: "u1",
      state: accept ? "accepted" : "rejected",
    };
  }

  async notifications(): Promise<NotificationRecord[]> {
    this.calls.push("notifications");
    return (
      this.overrides.notifications ?? [
        { notif_id: "n1", rec_id: "r9", old_state: "created", new_state: "sent", at: 1 },
        { notif_id: "n2", rec_id: "r9", old_state: "sent", new_state: "delivered", at: 2 },
      ]
    );
  }
}

export function makeApp(api: Api): App {
  document.body.innerHTML = '<div id="app" class="screen"></div>';
  const root = document.getElementById("app")!;
  return new App(root, api);
}

export async function loggedInApp(api: Api): Promise<App> {
  const app = makeApp(api);
  app.session = {
    token: "tok",
    user: { user_id: "u1", name: "Ana" },
    photo_ref: null,
  };
  await app.show("home");
  return app;
}

export async function press(app: App, ...keys: RemoteKey[]): Promise<void> {
  for (const key of keys) {
    await app.handleKey(key);
  }
}

export function menuLabels(root: HTMLElement): string[] {
  const menu = root.querySelector(".menu-slot .menu");
  return Array.from(menu?.querySelectorAll(".menu-item") ?? []).map(
    (el) => el.textContent ?? "",
  );
}

export function selectedLabel(root: HTMLElement): string {
  return (
    root.querySelector(".menu-slot .menu .menu-item.selected")?.textContent ?? ""
  );
}

export async function okOn(app: App, label: string): Promise<void> {
  // walk the menu with arrow keys until the labelled item is highlighted
  const count = menuLabels(app.root).length;
  for (let i = 0; i < count; i += 1) {
    if (selectedLabel(app.root).startsWith(label)) {
      await press(app, "ok");
      return;
    }
    await press(app, "down");
  }
  throw new Error(`no menu item labelled ${label}`);
}

// --- virtual keyboard driving ------------------------------------------------

const VK_ROWS = ["ABCDEFGHIJ", "KLMNOPQRST", "UVWXYZ0123", "^456789 <!"];
// row 3 legend: ^ = shift, space = space cell, < = erase, ! = done

function locate(char: string): { row: number; col: number } {
  for (let row = 0; row < VK_ROWS.length; row += 1) {
    const col = VK_ROWS[row].indexOf(char);
    if (col >= 0) return { row, col };
  }
  throw new Error(`no keyboard cell for ${char}`);
}

export async function typeOnKeyboard(app: App, text: string): Promise<void> {
  // cursor always starts at A (0,0); caps mode starts on
  let row = 0;
  let col = 0;
  let caps = true;

  const moveTo = async (target: { row: number; col: number }) => {
    while (row !== target.row) {
      const dr = target.row > row ? 1 : -1;
      await press(app, dr > 0 ? "down" : "up");
      row += dr;
    }
    while (col !== target.col) {
      const dc = target.col > col ? 1 : -1;
      await press(app, dc > 0 ? "right" : "left");
      col += dc;
    }
  };

  const tap = async (char: string) => {
    await moveTo(locate(char));
    await press(app, "ok");
  };

  for (const char of text) {
    if (/[a-z]/.test(char) && caps) {
      await tap("^");
      caps = false;
    } else if (/[A-Z]/.test(char) && !caps) {
      await tap("^");
      caps = true;
    }
    await tap(char === " " ? " " : char.toUpperCase());
  }
  await tap("!"); // done
}
