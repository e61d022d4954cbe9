/** Typed client for the service HTTP API. */

import {
  CodebookData,
  DiscussionList,
  ModelPayload,
  PendingEdit,
  Scope,
  StudentPayload,
} from "./types.js";

export class ConflictError extends Error {
  constructor(public detail: string) {
    super(detail);
  }
}

export class EditRejected extends Error {
  constructor(public violations: string[]) {
    super(violations.join("; "));
  }
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
    private pollDelayMs: number = 400,
  ) {}

  private async get(path: string): Promise<Response> {
    const response = await this.fetchFn(this.base + path);
    if (response.status >= 500) {
      throw new ApiError(response.status, `server error on ${path}`);
    }
    return response;
  }

  async discussions(courseId: string): Promise<DiscussionList> {
    const response = await this.get(`/courses/${encodeURIComponent(courseId)}/discussions`);
    if (!response.ok) throw new ApiError(response.status, `cannot list discussions (${response.status})`);
    return (await response.json()) as DiscussionList;
  }

  async codebook(discussionId: string): Promise<{ version: number; codebook: CodebookData }> {
    const response = await this.get(`/discussions/${encodeURIComponent(discussionId)}/codebook`);
    if (!response.ok) throw new ApiError(response.status, `cannot load codebook (${response.status})`);
    return (await response.json()) as { version: number; codebook: CodebookData };
  }

  /** Save an edit batch. 409 -> ConflictError, 422 -> EditRejected. */
  async saveCodebook(
    discussionId: string,
    baseVersion: number,
    edits: PendingEdit[],
  ): Promise<{ version: number; codebook: CodebookData }> {
    const response = await this.fetchFn(`${this.base}/discussions/${encodeURIComponent(discussionId)}/codebook`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ base_version: baseVersion, edits }),
    });
    if (response.status === 409) {
      const body = (await response.json()) as { detail?: string };
      throw new ConflictError(body.detail ?? "codebook changed underneath you");
    }
    if (response.status === 422) {
      const body = (await response.json()) as { violations?: string[] };
      throw new EditRejected(body.violations ?? ["edit rejected"]);
    }
    if (!response.ok) throw new ApiError(response.status, `save failed (${response.status})`);
    return (await response.json()) as { version: number; codebook: CodebookData };
  }

  /** Fetch a model; a 202 means it is computing, so poll until ready. */
  async model(discussionId: string, scope: Scope, version?: number, maxPolls = 50): Promise<ModelPayload> {
    const query = version === undefined ? `scope=${scope}` : `scope=${scope}&version=${version}`;
    const path = `/discussions/${encodeURIComponent(discussionId)}/model?${query}`;
    for (let attempt = 0; attempt <= maxPolls; attempt++) {
      const response = await this.get(path);
      if (response.status === 202) {
        await sleep(this.pollDelayMs);
        continue;
      }
      if (!response.ok) throw new ApiError(response.status, `cannot load model (${response.status})`);
      return (await response.json()) as ModelPayload;
    }
    throw new ApiError(202, "model is still computing; try again");
  }

  async student(discussionId: string, studentId: string, scope: Scope, version?: number): Promise<StudentPayload> {
    const query = version === undefined ? `scope=${scope}` : `scope=${scope}&version=${version}`;
    const response = await this.get(
      `/discussions/${encodeURIComponent(discussionId)}/students/${encodeURIComponent(studentId)}?${query}`,
    );
    if (!response.ok) throw new ApiError(response.status, `cannot load student (${response.status})`);
    return (await response.json()) as StudentPayload;
  }

  exportUrl(discussionId: string, version?: number): string {
    const suffix = version === undefined ? "" : `?version=${version}`;
    return `${this.base}/discussions/${encodeURIComponent(discussionId)}/export.csv${suffix}`;
  }
}
