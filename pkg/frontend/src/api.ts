/** Typed client for the annotation service. All mutation goes through here. */

export interface SessionSummary {
  id: string;
  name: string;
  sentences: number;
  annotated: number;
}

export interface TokenView {
  i: number;
  surface: string;
  pos: string;
  highlight: "verb" | "noun" | "none";
  deprel: string | null;
}

export interface PatternPayload {
  subject: number[];
  predicate: number[];
  object: number[];
  optional: number[];
  entity_clean: boolean;
}

export interface ClusterPayload {
  id: string;
  patterns: PatternPayload[];
}

export interface ClusterView extends ClusterPayload {
  variants: number;
}

export interface SentenceSummary {
  id: string;
  text: string;
  revision: number;
  clusters: number;
}

export interface SentenceDetail {
  id: string;
  text: string;
  revision: number;
  tokens: TokenView[];
  clusters: ClusterView[];
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

async function fail(response: Response): Promise<never> {
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") message = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, message);
}

export class AnnotationApi {
  /** `base` is the service origin, e.g. "http://localhost:8077"; "" = same origin. */
  constructor(private readonly base: string = "") {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    if (!response.ok) await fail(response);
    return (await response.json()) as T;
  }

  listSessions(): Promise<SessionSummary[]> {
    return this.json("/sessions");
  }

  createSession(id: string, tagged: string, name?: string): Promise<SessionSummary> {
    return this.json("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(name === undefined ? { id, tagged } : { id, name, tagged }),
    });
  }

  listSentences(session: string): Promise<SentenceSummary[]> {
    return this.json(`/sessions/${encodeURIComponent(session)}/sentences`);
  }

  getSentence(session: string, sentenceId: string): Promise<SentenceDetail> {
    return this.json(
      `/sessions/${encodeURIComponent(session)}/sentences/${encodeURIComponent(sentenceId)}`
    );
  }

  /** Optimistic write: rejects with ApiError(409) when the revision is stale. */
  putAnnotation(
    session: string,
    sentenceId: string,
    expectedRevision: number,
    clusters: ClusterPayload[]
  ): Promise<SentenceDetail> {
    return this.json(
      `/sessions/${encodeURIComponent(session)}/sentences/${encodeURIComponent(sentenceId)}/annotation`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ expected_revision: expectedRevision, clusters }),
      }
    );
  }

  async exportGold(session: string): Promise<string> {
    const response = await fetch(
      `${this.base}/sessions/${encodeURIComponent(session)}/export`
    );
    if (!response.ok) await fail(response);
    return response.text();
  }
}
