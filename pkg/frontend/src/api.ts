/** Thin typed client for the advisory service; every call returns the
 * server's JSON untouched so the console never invents state. */

import type {
  ComplianceReport,
  ProfileView,
  RecommendationsResponse,
  SessionResponse,
  Vocabulary,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail =
      typeof body === "object" && body !== null && "detail" in body
        ? String((body as { detail: unknown }).detail)
        : response.statusText;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export class AdvisoryClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  health(): Promise<{ status: string }> {
    return request(this.url("/health"));
  }

  vocabulary(): Promise<Vocabulary> {
    return request(this.url("/vocabulary"));
  }

  createSession(facts: string): Promise<SessionResponse> {
    return request(this.url("/sessions"), {
      method: "POST",
      body: JSON.stringify({ facts }),
    });
  }

  profile(sessionId: string): Promise<{ profile: ProfileView }> {
    return request(this.url(`/sessions/${sessionId}/profile`));
  }

  recommendations(sessionId: string): Promise<RecommendationsResponse> {
    return request(this.url(`/sessions/${sessionId}/recommendations`));
  }

  check(
    sessionId: string,
    treatment: string,
    corClass: string,
  ): Promise<ComplianceReport> {
    return request(this.url(`/sessions/${sessionId}/check`), {
      method: "POST",
      body: JSON.stringify({ treatment, cor_class: corClass }),
    });
  }

  confirmEvidence(
    sessionId: string,
    atoms: string[],
  ): Promise<{ profile: ProfileView }> {
    return request(this.url(`/sessions/${sessionId}/evidence`), {
      method: "POST",
      body: JSON.stringify({ confirm: atoms }),
    });
  }
}
