/**
 * Thin typed client for the sorting service. Long-running endpoints follow a
 * job protocol: the first GET answers either with the cached result or with a
 * job id that must be polled until it settles.
 */

import type {
  AggregateResult,
  CaiResult,
  CompatibilityResult,
  DistanceId,
  JobEnvelope,
  JobStatus,
  MinimalSetsResult,
  RorResult,
  SessionSummary,
  StatementDoc,
} from './types';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export interface ClientOptions {
  fetchImpl?: FetchLike;
  pollIntervalMs?: number;
  pollTimeoutMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

export class ApiClient {
  private readonly fetchImpl: FetchLike;
  private readonly pollIntervalMs: number;
  private readonly pollTimeoutMs: number;
  private readonly sleep: (ms: number) => Promise<void>;

  constructor(readonly baseUrl: string, options: ClientOptions = {}) {
    this.fetchImpl = options.fetchImpl ?? ((url, init) => fetch(url, init));
    this.pollIntervalMs = options.pollIntervalMs ?? 400;
    this.pollTimeoutMs = options.pollTimeoutMs ?? 600_000;
    this.sleep = options.sleep ?? defaultSleep;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        detail = JSON.parse(text).detail ?? text;
      } catch {
        /* plain-text error body */
      }
      throw new ApiError(response.status, detail);
    }
    return JSON.parse(text) as T;
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request('/sessions');
  }

  getSession(id: string): Promise<SessionSummary> {
    return this.request(`/sessions/${encodeURIComponent(id)}`);
  }

  createSession(body: {
    id: string;
    hierarchy: unknown;
    table: { alternatives: string[]; columns: string[]; values: number[][] };
    classes: Record<string, number>;
  }): Promise<SessionSummary> {
    return this.request('/sessions', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  putStatements(
    id: string,
    revision: number,
    statements: StatementDoc[],
  ): Promise<CompatibilityResult> {
    return this.request(`/sessions/${encodeURIComponent(id)}/statements`, {
      method: 'PUT',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ revision, statements }),
    });
  }

  getCompatibility(id: string): Promise<CompatibilityResult> {
    return this.request(`/sessions/${encodeURIComponent(id)}/compatibility`);
  }

  /** Resolve a job envelope to its result, polling /jobs/{id} as needed. */
  private async resolveJob<T>(envelope: JobEnvelope<T>): Promise<T> {
    if (envelope.status === 'done') return envelope.result;
    const deadline = Date.now() + this.pollTimeoutMs;
    for (;;) {
      await this.sleep(this.pollIntervalMs);
      const status = await this.request<JobStatus<T>>(`/jobs/${envelope.job}`);
      if (status.status === 'done' && status.result !== null) return status.result;
      if (status.status === 'failed') {
        const err = status.error ?? { error: 'JobFailed', message: 'job failed' };
        throw new ApiError(500, `${err.error}: ${err.message}`);
      }
      if (Date.now() > deadline) throw new ApiError(504, 'job polling timed out');
    }
  }

  async getRor(id: string): Promise<RorResult> {
    const envelope = await this.request<JobEnvelope<RorResult>>(
      `/sessions/${encodeURIComponent(id)}/ror`,
    );
    return this.resolveJob(envelope);
  }

  async getMinimalSets(id: string): Promise<MinimalSetsResult> {
    const envelope = await this.request<JobEnvelope<MinimalSetsResult>>(
      `/sessions/${encodeURIComponent(id)}/minimal-sets`,
    );
    return this.resolveJob(envelope);
  }

  async getCai(id: string, n: number, seed: number): Promise<CaiResult> {
    const envelope = await this.request<JobEnvelope<CaiResult>>(
      `/sessions/${encodeURIComponent(id)}/cai?n=${n}&seed=${seed}`,
    );
    return this.resolveJob(envelope);
  }

  async getAggregate(
    id: string,
    node: string,
    n: number,
    seed: number,
    distance: DistanceId,
  ): Promise<AggregateResult> {
    const query = `node=${encodeURIComponent(node)}&n=${n}&seed=${seed}&d=${distance}`;
    const envelope = await this.request<JobEnvelope<AggregateResult>>(
      `/sessions/${encodeURIComponent(id)}/aggregate?${query}`,
    );
    return this.resolveJob(envelope);
  }
}
