/** Thin typed client for the spindual HTTP service. */

import {
  ModelCatalogSchema,
  SessionStateSchema,
  SpectrumDoneSchema,
  SpectrumJobSchema,
  SpectrumPendingSchema,
} from "./types";
import type {
  CreateSessionBody,
  GateStep,
  ModelEntry,
  SessionState,
  SpectrumResult,
} from "./types";

/** Error carrying the HTTP status and the service's verbatim detail text. */
export class ServiceError extends Error {
  readonly status: number;
  readonly detail: string;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ServiceError";
    this.status = status;
    this.detail = detail;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export type SpectrumOutcome =
  | { kind: "done"; result: SpectrumResult }
  | { kind: "pending"; jobId: string; poll: string }
  | { kind: "denied"; detail: string };

function extractDetail(body: unknown, fallback: string): string {
  if (
    typeof body === "object" &&
    body !== null &&
    "detail" in body &&
    typeof (body as { detail: unknown }).detail === "string"
  ) {
    return (body as { detail: string }).detail;
  }
  return fallback;
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchImpl =
      fetchImpl ?? ((url, init) => globalThis.fetch(url, init));
  }

  private async request(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<{ status: number; json: unknown }> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.base + path, init);
    let json: unknown = null;
    try {
      json = await resp.json();
    } catch {
      json = null;
    }
    return { status: resp.status, json };
  }

  private async expect(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<unknown> {
    const { status, json } = await this.request(method, path, body);
    if (status >= 400) {
      throw new ServiceError(status, extractDetail(json, `HTTP ${status}`));
    }
    return json;
  }

  async models(): Promise<ModelEntry[]> {
    return ModelCatalogSchema.parse(await this.expect("GET", "/models"));
  }

  async createSession(body: CreateSessionBody): Promise<SessionState> {
    return SessionStateSchema.parse(
      await this.expect("POST", "/sessions", body),
    );
  }

  async getSession(id: string): Promise<SessionState> {
    return SessionStateSchema.parse(
      await this.expect("GET", `/sessions/${id}`),
    );
  }

  async applyGate(id: string, step: GateStep): Promise<SessionState> {
    return SessionStateSchema.parse(
      await this.expect("POST", `/sessions/${id}/gates`, step),
    );
  }

  async undo(id: string): Promise<SessionState> {
    return SessionStateSchema.parse(
      await this.expect("POST", `/sessions/${id}/undo`),
    );
  }

  /**
   * Requests the spectrum; a 403 (size above cap) is returned as a
   * "denied" outcome rather than thrown so the panel can explain it.
   */
  async spectrum(id: string, k?: number): Promise<SpectrumOutcome> {
    const query = k === undefined ? "" : `?k=${k}`;
    const { status, json } = await this.request(
      "GET",
      `/sessions/${id}/spectrum${query}`,
    );
    if (status === 403) {
      return { kind: "denied", detail: extractDetail(json, "HTTP 403") };
    }
    if (status === 202) {
      const pending = SpectrumPendingSchema.parse(json);
      return { kind: "pending", jobId: pending.job_id, poll: pending.poll };
    }
    if (status >= 400) {
      throw new ServiceError(status, extractDetail(json, `HTTP ${status}`));
    }
    return { kind: "done", result: SpectrumDoneSchema.parse(json).result };
  }

  async spectrumJob(id: string, jobId: string): Promise<SpectrumOutcome> {
    const json = await this.expect(
      "GET",
      `/sessions/${id}/spectrum/jobs/${jobId}`,
    );
    const job = SpectrumJobSchema.parse(json);
    if (job.status === "done" && job.result) {
      return { kind: "done", result: job.result };
    }
    if (job.status === "error") {
      throw new ServiceError(500, job.error ?? "spectrum job failed");
    }
    return {
      kind: "pending",
      jobId,
      poll: `/sessions/${id}/spectrum/jobs/${jobId}`,
    };
  }
}
