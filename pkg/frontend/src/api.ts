// Thin fetch client for the session API.

import type { Report, ShotResponse, Snapshot, TableInfo } from './types.js';

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const data = await response.json();
        if (data && typeof data.detail === 'string') {
          detail = data.detail;
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  getTable(): Promise<TableInfo> {
    return this.request('GET', '/table');
  }

  createSession(
    profile: { intro: string; goal: string; start_date?: string },
    seed?: number,
    provider = 'template',
  ): Promise<Snapshot> {
    return this.request('POST', '/sessions', { profile, seed, provider });
  }

  getSession(sessionId: string): Promise<Snapshot> {
    return this.request('GET', `/sessions/${sessionId}`);
  }

  shoot(sessionId: string, direction: { x: number; y: number }, dragFraction: number): Promise<ShotResponse> {
    return this.request('POST', `/sessions/${sessionId}/shots`, {
      direction,
      drag_fraction: dragFraction,
    });
  }

  decide(sessionId: string, accept: boolean): Promise<Snapshot> {
    return this.request('POST', `/sessions/${sessionId}/decision`, { accept });
  }

  getReport(sessionId: string): Promise<Report> {
    return this.request('GET', `/sessions/${sessionId}/report`);
  }
}

export function apiBaseFromLocation(loc: Location, search = loc.search): string {
  const override = new URLSearchParams(search).get('api');
  return (override ?? loc.origin).replace(/\/$/, '');
}
