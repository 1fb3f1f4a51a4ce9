// HTTP client for the recommendation service. The client only ever
// requests and renders; every computation happens server-side.

export interface UserSummary {
  user_id: string;
  name: string;
  photo_ref: string | null;
}

export interface GroupSummary {
  group_id: string;
  topic: string;
  member_ids: string[];
}

export interface TypeEntry {
  code: number;
  label: string;
}

export interface PayloadItem {
  rec_id: string;
  title: string;
  content_excerpt: string;
  image_included: boolean;
}

export interface AdaptedPayload {
  items: PayloadItem[];
  variant: string;
  device_id: string;
}

export interface RecommendationRecord {
  rec_id: string;
  type_code: number;
  title: string;
  content: string;
  sender_id: string;
  recipient_id: string;
  state: string;
}

export interface NotificationRecord {
  notif_id: string;
  rec_id: string;
  old_state: string;
  new_state: string;
  at: number;
}

export interface LoginResult {
  token: string;
  user: { user_id: string; name: string };
  photo_ref: string | null;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface Api {
  login(name: string, secret: string): Promise<LoginResult>;
  friends(): Promise<UserSummary[]>;
  groups(): Promise<GroupSummary[]>;
  searchUsers(q: string): Promise<UserSummary[]>;
  searchGroups(q: string): Promise<GroupSummary[]>;
  types(): Promise<TypeEntry[]>;
  inbox(): Promise<AdaptedPayload>;
  view(recId: string): Promise<RecommendationRecord>;
  send(
    target: string,
    typeCode: number,
    title: string,
    content: string,
  ): Promise<RecommendationRecord>;
  respond(recId: string, accept: boolean): Promise<RecommendationRecord>;
  notifications(): Promise<NotificationRecord[]>;
}

export class HttpApi implements Api {
  private token: string | null = null;

  constructor(readonly baseUrl: string) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(
        response.status,
        String(payload.error ?? "error"),
        String(payload.message ?? payload.error ?? response.statusText),
      );
    }
    return payload as T;
  }

  async login(name: string, secret: string): Promise<LoginResult> {
    const result = await this.request<LoginResult>("POST", "/session", {
      name,
      secret,
    });
    this.token = result.token;
    return result;
  }

  async friends(): Promise<UserSummary[]> {
    const body = await this.request<{ friends: UserSummary[] }>("GET", "/friends");
    return body.friends;
  }

  async groups(): Promise<GroupSummary[]> {
    const body = await this.request<{ groups: GroupSummary[] }>("GET", "/groups");
    return body.groups;
  }

  async searchUsers(q: string): Promise<UserSummary[]> {
    const body = await this.request<{ users: UserSummary[] }>(
      "GET",
      `/users?q=${encodeURIComponent(q)}`,
    );
    return body.users;
  }

  async searchGroups(q: string): Promise<GroupSummary[]> {
    const body = await this.request<{ groups: GroupSummary[] }>(
      "GET",
      `/groups/search?q=${encodeURIComponent(q)}`,
    );
    return body.groups;
  }

  async types(): Promise<TypeEntry[]> {
    const body = await this.request<{ types: TypeEntry[] }>("GET", "/types");
    return body.types;
  }

  async inbox(): Promise<AdaptedPayload> {
    const body = await this.request<{ payload: AdaptedPayload }>(
      "GET",
      "/recommendations",
    );
    return body.payload;
  }

  async view(recId: string): Promise<RecommendationRecord> {
    const body = await this.request<{ recommendation: RecommendationRecord }>(
      "GET",
      `/recommendations/${encodeURIComponent(recId)}`,
    );
    return body.recommendation;
  }

  async send(
    target: string,
    typeCode: number,
    title: string,
    content: string,
  ): Promise<RecommendationRecord> {
    const body = await this.request<{ recommendation: RecommendationRecord }>(
      "POST",
      "/recommendations",
      { target_user: target, type_code: typeCode, title, content },
    );
    return body.recommendation;
  }

  async respond(recId: string, accept: boolean): Promise<RecommendationRecord> {
    const body = await this.request<{ recommendation: RecommendationRecord }>(
      "POST",
      `/recommendations/${encodeURIComponent(recId)}/response`,
      { accept },
    );
    return body.recommendation;
  }

  async notifications(): Promise<NotificationRecord[]> {
    const body = await this.request<{ notifications: NotificationRecord[] }>(
      "GET",
      "/notifications",
    );
    return body.notifications;
  }
}
