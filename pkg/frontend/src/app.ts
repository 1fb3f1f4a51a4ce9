// Screen state machine for the TV client. Everything is operable from
// four arrows, OK, back and the four color keys; all data on screen comes
// from the service, already resolved and ranked.

import type {
  Api,
  GroupSummary,
  LoginResult,
  NotificationRecord,
  PayloadItem,
  RecommendationRecord,
  TypeEntry,
  UserSummary,
} from "./api.js";
import { renderColorBar, type ColorActions } from "./colorbar.js";
import type { RemoteKey } from "./keys.js";
import { MenuList, type MenuItem } from "./menu.js";
import { Dialog, Picker, type Overlay } from "./overlay.js";
import { VirtualKeyboard } from "./vkeyboard.js";

export type ScreenId =
  | "login"
  | "home"
  | "friends"
  | "groups"
  | "search_person"
  | "search_group"
  | "compose"
  | "recommendation_view"
  | "notifications";

export const SCREEN_IDS: ScreenId[] = [
  "login",
  "home",
  "friends",
  "groups",
  "search_person",
  "search_group",
  "compose",
  "recommendation_view",
  "notifications",
];

export type LocationMode =
  | "superposition"
  | "full_with_video"
  | "full_without_video";

// Superposition stays a small band that never covers the picture; a full
// screen with video reserves the top-left quarter for the broadcast.
export const SCREEN_MODES: Record<ScreenId, LocationMode> = {
  login: "full_without_video",
  home: "full_with_video",
  friends: "full_without_video",
  groups: "full_without_video",
  search_person: "full_without_video",
  search_group: "full_without_video",
  compose: "full_without_video",
  recommendation_view: "full_without_video",
  notifications: "superposition",
};

const SCREEN_TITLES: Record<ScreenId, string> = {
  login: "Sign in",
  home: "Main menu",
  friends: "Friends",
  groups: "Groups",
  search_person: "Search person",
  search_group: "Search group",
  compose: "Compose recommendation",
  recommendation_view: "Recommendations",
  notifications: "Notifications",
};

const KEY_HELP =
  "Arrows move - OK selects - Back returns - " +
  "Red exits - Green acts - Yellow notifications - Blue options";

const LIST_ROWS = 5;

interface ComposeDraft {
  targetId: string | null;
  targetName: string | null;
  typeCode: number | null;
  typeLabel: string | null;
  title: string;
  content: string;
}

function emptyDraft(): ComposeDraft {
  return {
    targetId: null,
    targetName: null,
    typeCode: null,
    typeLabel: null,
    title: "",
    content: "",
  };
}

export class App {
  screen: ScreenId = "login";
  session: LoginResult | null = null;

  private menu: MenuList | null = null;
  private colors: ColorActions | null = null;
  private overlays: Overlay[] = [];
  private overlayRoot!: HTMLElement;
  private previewEl!: HTMLElement;
  private statusEl!: HTMLElement;
  private menuSlot!: HTMLElement;

  private loginName = "";
  private loginSecret = "";
  private personQuery = "";
  private personResults: UserSummary[] = [];
  private groupQuery = "";
  private groupResults: GroupSummary[] = [];
  private draft: ComposeDraft = emptyDraft();
  private viewed: RecommendationRecord | null = null;

  constructor(
    readonly root: HTMLElement,
    readonly api: Api,
  ) {}

  async start(): Promise<void> {
    await this.show("login");
  }

  async handleKey(key: RemoteKey): Promise<void> {
    const top = this.overlays[this.overlays.length - 1];
    if (top) {
      await top.handleKey(key);
      return;
    }
    switch (key) {
      case "up":
        this.menu?.move(-1);
        break;
      case "down":
        this.menu?.move(1);
        break;
      case "ok":
        await this.menu?.activate();
        break;
      case "back":
        await this.goBack();
        break;
      case "red":
        await this.colors?.red.run();
        break;
      case "green":
        await this.colors?.green.run();
        break;
      case "yellow":
        await this.colors?.yellow.run();
        break;
      case "blue":
        await this.colors?.blue.run();
        break;
      default:
        break; // unmapped keys are ignored
    }
  }

  // --- overlays -------------------------------------------------------

  pushOverlay(overlay: Overlay): void {
    this.overlays.push(overlay);
    this.overlayRoot.appendChild(overlay.el);
  }

  popOverlay(): void {
    const overlay = this.overlays.pop();
    if (overlay) overlay.el.remove();
  }

  private dialog(message: string, choices: { label: string; run?: () => void | Promise<void> }[]): void {
    const dialog = new Dialog(
      message,
      choices.map((choice) => ({
        label: choice.label,
        run: async () => {
          this.popOverlay();
          if (choice.run) await choice.run();
        },
      })),
    );
    this.pushOverlay(dialog);
  }

  private keyboard(
    label: string,
    initial: string,
    apply: (value: string) => void | Promise<void>,
  ): void {
    const keyboard = new VirtualKeyboard(
      label,
      initial,
      async (value) => {
        this.popOverlay();
        await apply(value);
      },
      () => this.popOverlay(),
    );
    this.pushOverlay(keyboard);
  }

  // --- shared rendering -------------------------------------------------

  status(text: string): void {
    this.statusEl.textContent = text;
  }

  private renderShell(id: ScreenId): void {
    const mode = SCREEN_MODES[id];
    this.root.textContent = "";
    this.root.className = `screen mode-${mode}`;
    this.root.dataset.screen = id;

    if (mode === "full_with_video") {
      const video = document.createElement("div");
      video.className = "video-placeholder";
      video.textContent = "TV";
      this.root.appendChild(video);
    }

    const header = document.createElement("header");
    header.className = "screen-title";
    header.textContent = SCREEN_TITLES[id];
    this.root.appendChild(header);

    const content = document.createElement("div");
    content.className = "content";
    this.menuSlot = document.createElement("div");
    this.menuSlot.className = "menu-slot";
    this.previewEl = document.createElement("aside");
    this.previewEl.className = "preview";
    content.append(this.menuSlot, this.previewEl);
    this.root.appendChild(content);

    this.statusEl = document.createElement("div");
    this.statusEl.className = "status";
    this.root.appendChild(this.statusEl);

    this.colors = this.colorActions(id);
    this.root.appendChild(renderColorBar(this.colors));

    this.overlayRoot = document.createElement("div");
    this.overlayRoot.className = "overlay-root";
    this.root.appendChild(this.overlayRoot);
    this.overlays = [];
  }

  private setMenu(items: MenuItem[], keepId?: string): void {
    this.menu = new MenuList(items, this.previewEl);
    this.menuSlot.textContent = "";
    this.menuSlot.appendChild(this.menu.el);
    if (keepId) this.menu.selectById(keepId);
  }

  private colorActions(id: ScreenId): ColorActions {
    const green = this.greenAction(id);
    return {
      red: {
        label: "Exit",
        run: async () => {
          if (id === "login") {
            this.loginName = "";
            this.loginSecret = "";
            await this.show("login");
          } else if (id === "home") {
            this.session = null;
            await this.show("login");
          } else {
            await this.show("home");
          }
        },
      },
      green,
      yellow: {
        label: "Notifications",
        run: async () => {
          await this.show("notifications");
        },
      },
      blue: {
        label: "Options",
        run: () => {
          this.dialog(KEY_HELP, [{ label: "Close" }]);
        },
      },
    };
  }

  private greenAction(id: ScreenId): ColorActions["green"] {
    switch (id) {
      case "login":
        return { label: "Sign in", run: () => this.doLogin() };
      case "home":
        return { label: "Inbox", run: () => this.show("recommendation_view") };
      case "friends":
        return {
          label: "Recommend",
          run: async () => {
            await this.menu?.activate();
          },
        };
      case "groups":
        return { label: "Search groups", run: () => this.show("search_group") };
      case "search_person":
        return { label: "Run search", run: () => this.runPersonSearch() };
      case "search_group":
        return { label: "Run search", run: () => this.runGroupSearch() };
      case "compose":
        return { label: "Send", run: () => this.confirmSend() };
      case "recommendation_view":
        return { label: "Accept", run: () => this.respondToCurrent(true) };
      case "notifications":
        return { label: "Refresh", run: () => this.show("notifications") };
    }
  }

  private async goBack(): Promise<void> {
    if (this.screen === "login" || this.screen === "home") return;
    await this.show("home");
  }

  // --- screens ----------------------------------------------------------

  async show(id: ScreenId): Promise<void> {
    if (id !== "login" && !this.session) id = "login";
    this.screen = id;
    this.renderShell(id);
    this.status("Loading...");
    try {
      switch (id) {
        case "login":
          this.buildLogin();
          break;
        case "home":
          this.buildHome();
          break;
        case "friends":
          this.buildFriends(await this.api.friends());
          break;
        case "groups":
          this.buildGroups(await this.api.groups());
          break;
        case "search_person":
          this.buildSearchPerson();
          break;
        case "search_group":
          this.buildSearchGroup();
          break;
        case "compose":
          this.buildCompose();
          break;
        case "recommendation_view":
          this.buildRecommendationView((await this.api.inbox()).items);
          break;
        case "notifications":
          this.buildNotifications(await this.api.notifications());
          break;
      }
      this.status("");
    } catch (error) {
      // keep the screen navigable: statics only, and say what failed
      this.buildFallback(id);
      this.status(`Error: ${(error as Error).message}`);
    }
  }

  private buildFallback(id: ScreenId): void {
    this.setMenu([
      { id: "retry", label: "Retry", onOk: () => this.show(id) },
      { id: "home", label: "Main menu", onOk: () => this.show("home") },
      { id: "back", label: "Back", onOk: () => this.goBack() },
    ]);
  }

  private buildLogin(): void {
    const mask = (secret: string) => (secret ? "*".repeat(secret.length) : "(empty)");
    this.setMenu([
      {
        id: "name",
        label: `Name: ${this.loginName || "(empty)"}`,
        preview: "Enter your name with the on-screen keyboard",
        onOk: () =>
          this.keyboard("Name", this.loginName, (value) => {
            this.loginName = value;
            this.buildLogin();
            this.menu?.selectById("name");
          }),
      },
      {
        id: "secret",
        label: `Secret: ${mask(this.loginSecret)}`,
        preview: "Enter your secret with the on-screen keyboard",
        onOk: () =>
          this.keyboard("Secret", this.loginSecret, (value) => {
            this.loginSecret = value;
            this.buildLogin();
            this.menu?.selectById("secret");
          }),
      },
      {
        id: "signin",
        label: "Sign in",
        preview: "Connect to the service",
        onOk: () => this.doLogin(),
      },
    ]);
  }

  private async doLogin(): Promise<void> {
    this.status("Signing in...");
    try {
      this.session = await this.api.login(this.loginName, this.loginSecret);
      await this.show("home");
    } catch (error) {
      this.status("");
      this.dialog((error as Error).message, [{ label: "OK" }]);
    }
  }

  private buildHome(): void {
    const go = (id: ScreenId) => () => this.show(id);
    this.setMenu([
      {
        id: "inbox",
        label: "My recommendations",
        preview: "Publicity picked for you, adapted to this screen",
        onOk: go("recommendation_view"),
      },
      {
        id: "friends",
        label: "See friends",
        preview: "Profiles and photos of your friends",
        onOk: go("friends"),
      },
      {
        id: "groups",
        label: "See groups",
        preview: "Groups you belong to",
        onOk: go("groups"),
      },
      {
        id: "search_person",
        label: "Search person",
        preview: "Find a person by name",
        onOk: go("search_person"),
      },
      {
        id: "search_group",
        label: "Search group",
        preview: "Find a group by its id or topic",
        onOk: go("search_group"),
      },
      {
        id: "compose",
        label: "Recommend to a friend",
        preview: "Send a publicity recommendation",
        onOk: go("compose"),
      },
      {
        id: "notifications",
        label: "Notifications",
        preview: "State changes of recommendations you sent",
        onOk: go("notifications"),
      },
    ]);
  }

  private buildFriends(friends: UserSummary[]): void {
    const rows: MenuItem[] = friends.slice(0, LIST_ROWS).map((friend) => ({
      id: `friend-${friend.user_id}`,
      label: friend.name,
      preview: `${friend.name} - ${friend.user_id}` +
        (friend.photo_ref ? " - has photo" : ""),
      onOk: async () => {
        this.draft = { ...emptyDraft(), targetId: friend.user_id, targetName: friend.name };
        await this.show("compose");
      },
    }));
    this.setMenu([
      ...rows,
      {
        id: "search",
        label: "Search person",
        preview: "Find someone who is not listed",
        onOk: () => this.show("search_person"),
      },
      { id: "refresh", label: "Refresh", onOk: () => this.show("friends") },
      { id: "back", label: "Back", onOk: () => this.goBack() },
    ]);
  }

  private buildGroups(groups: GroupSummary[]): void {
    const rows: MenuItem[] = groups.slice(0, LIST_ROWS).map((group) => ({
      id: `group-${group.group_id}`,
      label: group.topic || group.group_id,
      preview: `${group.group_id} - topic: ${group.topic || "(none)"} - ` +
        `${group.member_ids.length} member(s)`,
      onOk: () =>
        this.dialog(
          `${group.group_id}: ${group.member_ids.join(", ")}`,
          [{ label: "OK" }],
        ),
    }));
    this.setMenu([
      ...rows,
      {
        id: "search",
        label: "Search group",
        preview: "Find a group by id or topic",
        onOk: () => this.show("search_group"),
      },
      { id: "refresh", label: "Refresh", onOk: () => this.show("groups") },
      { id: "back", label: "Back", onOk: () => this.goBack() },
    ]);
  }

  private buildSearchPerson(): void {
    const rows: MenuItem[] = this.personResults.slice(0, LIST_ROWS).map((user) => ({
      id: `person-${user.user_id}`,
      label: user.name,
      preview: `${user.name} - ${user.user_id}` +
        (user.photo_ref ? " - has photo" : ""),
      onOk: () =>
        this.dialog(`${user.name} (${user.user_id})`, [{ label: "OK" }]),
    }));
    this.setMenu([
      {
        id: "query",
        label: `Query: ${this.personQuery || "(empty)"}`,
        preview: "Edit the search text",
        onOk: () =>
          this.keyboard("Search person", this.personQuery, async (value) => {
            this.personQuery = value;
            await this.runPersonSearch();
          }),
      },
      {
        id: "run",
        label: "Run search",
        preview: "Search people by name",
        onOk: () => this.runPersonSearch(),
      },
      ...rows,
      { id: "back", label: "Back", onOk: () => this.goBack() },
    ]);
  }

  private async runPersonSearch(): Promise<void> {
    this.status("Searching...");
    try {
      this.personResults = await this.api.searchUsers(this.personQuery);
      this.buildSearchPerson();
      this.status(`${this.personResults.length} result(s)`);
    } catch (error) {
      this.status("");
      this.dialog((error as Error).message, [{ label: "OK" }]);
    }
  }

  private buildSearchGroup(): void {
    const rows: MenuItem[] = this.groupResults.slice(0, LIST_ROWS).map((group) => ({
      id: `group-${group.group_id}`,
      label: group.topic || group.group_id,
      preview: `${group.group_id} - topic: ${group.topic || "(none)"} - ` +
        `${group.member_ids.length} member(s)`,
      onOk: () =>
        this.dialog(
          `${group.group_id}: ${group.member_ids.join(", ")}`,
          [{ label: "OK" }],
        ),
    }));
    this.setMenu([
      {
        id: "query",
        label: `Query: ${this.groupQuery || "(empty)"}`,
        preview: "Edit the search text",
        onOk: () =>
          this.keyboard("Search group", this.groupQuery, async (value) => {
            this.groupQuery = value;
            await this.runGroupSearch();
          }),
      },
      {
        id: "run",
        label: "Run search",
        preview: "Search groups by id or topic",
        onOk: () => this.runGroupSearch(),
      },
      ...rows,
      { id: "back", label: "Back", onOk: () => this.goBack() },
    ]);
  }

  private async runGroupSearch(): Promise<void> {
    this.status("Searching...");
    try {
      this.groupResults = await this.api.searchGroups(this.groupQuery);
      this.buildSearchGroup();
      this.status(`${this.groupResults.length} result(s)`);
    } catch (error) {
      this.status("");
      this.dialog((error as Error).message, [{ label: "OK" }]);
    }
  }

  private buildCompose(keepId?: string): void {
    this.setMenu(
      [
        {
          id: "to",
          label: `To: ${this.draft.targetName ?? "(pick a friend)"}`,
          preview: "Recommendations go to friends only",
          onOk: () => this.pickFriend(),
        },
        {
          id: "type",
          label: `Type: ${this.draft.typeLabel ?? "(pick a type)"}`,
          preview: "Pick the publicity type",
          onOk: () => this.pickType(),
        },
        {
          id: "title",
          label: `Title: ${this.draft.title || "(empty)"}`,
          preview: "Edit the title",
          onOk: () =>
            this.keyboard("Title", this.draft.title, (value) => {
              this.draft.title = value;
              this.buildCompose("title");
            }),
        },
        {
          id: "content",
          label: `Content: ${this.draft.content || "(empty)"}`,
          preview: "Edit the content",
          onOk: () =>
            this.keyboard("Content", this.draft.content, (value) => {
              this.draft.content = value;
              this.buildCompose("content");
            }),
        },
        {
          id: "send",
          label: "Send",
          preview: "Review and send the recommendation",
          onOk: () => this.confirmSend(),
        },
        {
          id: "cancel",
          label: "Cancel",
          preview: "Discard the draft",
          onOk: async () => {
            this.draft = emptyDraft();
            await this.show("home");
          },
        },
      ],
      keepId,
    );
  }

  private async pickFriend(): Promise<void> {
    // the picker sources from the friend list only
    let friends: UserSummary[];
    try {
      friends = await this.api.friends();
    } catch (error) {
      this.dialog((error as Error).message, [{ label: "OK" }]);
      return;
    }
    const picker = new Picker(
      "Pick a friend",
      friends.map((friend) => ({
        id: friend.user_id,
        label: friend.name,
        preview: `${friend.name} - ${friend.user_id}`,
      })),
      (id) => {
        const friend = friends.find((f) => f.user_id === id);
        this.draft.targetId = id;
        this.draft.targetName = friend ? friend.name : id;
        this.popOverlay();
        this.buildCompose("to");
      },
      () => this.popOverlay(),
    );
    this.pushOverlay(picker);
  }

  private async pickType(): Promise<void> {
    let types: TypeEntry[];
    try {
      types = await this.api.types();
    } catch (error) {
      this.dialog((error as Error).message, [{ label: "OK" }]);
      return;
    }
    const picker = new Picker(
      "Pick a type",
      types.map((entry) => ({
        id: String(entry.code),
        label: entry.label,
        preview: `${entry.label} (${entry.code})`,
      })),
      (id) => {
        const entry = types.find((t) => String(t.code) === id);
        this.draft.typeCode = entry ? entry.code : Number(id);
        this.draft.typeLabel = entry ? entry.label : id;
        this.popOverlay();
        this.buildCompose("type");
      },
      () => this.popOverlay(),
    );
    this.pushOverlay(picker);
  }

  private confirmSend(): void {
    const draft = this.draft;
    if (!draft.targetId || draft.typeCode === null) {
      this.dialog("Pick a friend and a type first", [{ label: "OK" }]);
      return;
    }
    this.dialog(
      `Send "${draft.title || "(untitled)"}" (${draft.typeLabel}) to ${draft.targetName}?`,
      [
        {
          label: "Send",
          run: async () => {
            this.status("Sending...");
            try {
              const rec = await this.api.send(
                draft.targetId!,
                draft.typeCode!,
                draft.title,
                draft.content,
              );
              this.draft = emptyDraft();
              this.dialog(`Sent (${rec.rec_id}, state ${rec.state})`, [
                { label: "OK", run: () => this.show("home") },
              ]);
              this.status("");
            } catch (error) {
              this.status("");
              // the server's own words, e.g. the friendship rule
              this.dialog((error as Error).message, [{ label: "OK" }]);
            }
          },
        },
        { label: "Edit" },
        { label: "Cancel", run: () => this.show("home") },
      ],
    );
  }

  private buildRecommendationView(items: PayloadItem[]): void {
    // four fixed actions leave room for four list rows
    const rows: MenuItem[] = items.slice(0, 4).map((item) => ({
      id: `rec-${item.rec_id}`,
      label: item.title || item.rec_id,
      preview: (item.content_excerpt || "(no excerpt)") +
        (item.image_included ? " [image]" : ""),
      onOk: async () => {
        try {
          this.viewed = await this.api.view(item.rec_id);
          this.previewEl.textContent =
            `${this.viewed.title}: ${this.viewed.content} ` +
            `[${this.viewed.state}]`;
          this.status(`Viewed ${item.rec_id}`);
        } catch (error) {
          this.dialog((error as Error).message, [{ label: "OK" }]);
        }
      },
    }));
    this.setMenu([
      ...rows,
      {
        id: "accept",
        label: "Accept",
        preview: "Accept the opened recommendation",
        onOk: () => this.respondToCurrent(true),
      },
      {
        id: "reject",
        label: "Reject",
        preview: "Reject the opened recommendation",
        onOk: () => this.respondToCurrent(false),
      },
      {
        id: "refresh",
        label: "Refresh",
        onOk: () => this.show("recommendation_view"),
      },
      { id: "back", label: "Back", onOk: () => this.goBack() },
    ]);
  }

  private async respondToCurrent(accept: boolean): Promise<void> {
    const target = this.viewed;
    if (!target) {
      this.dialog("Open a recommendation first", [{ label: "OK" }]);
      return;
    }
    try {
      const rec = await this.api.respond(target.rec_id, accept);
      this.viewed = null;
      this.status(`${rec.rec_id} ${rec.state}`);
      await this.show("recommendation_view");
      this.status(`${rec.rec_id} ${rec.state}`);
    } catch (error) {
      this.dialog((error as Error).message, [{ label: "OK" }]);
    }
  }

  private buildNotifications(feed: NotificationRecord[]): void {
    const latest = feed.slice(-LIST_ROWS).reverse();
    const rows: MenuItem[] = latest.map((notif) => ({
      id: `notif-${notif.notif_id}`,
      label: `${notif.rec_id}: ${notif.old_state} to ${notif.new_state}`,
      preview: `Recommendation ${notif.rec_id} moved from ` +
        `${notif.old_state} to ${notif.new_state}`,
    }));
    this.setMenu([
      ...rows,
      {
        id: "refresh",
        label: "Refresh",
        onOk: () => this.show("notifications"),
      },
      { id: "home", label: "Main menu", onOk: () => this.show("home") },
      { id: "back", label: "Back", onOk: () => this.goBack() },
    ]);
  }
}
