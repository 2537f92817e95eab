// Thin fetch client for the session API.
export class ApiError extends Error {
    constructor(status, detail) {
        super(detail);
        this.status = status;
    }
}
export class ApiClient {
    constructor(baseUrl) {
        this.baseUrl = baseUrl;
    }
    async request(method, path, body) {
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
            }
            catch {
                // non-JSON error body; keep the status text
            }
            throw new ApiError(response.status, detail);
        }
        return (await response.json());
    }
    getTable() {
        return this.request('GET', '/table');
    }
    createSession(profile, seed, provider = 'template') {
        return this.request('POST', '/sessions', { profile, seed, provider });
    }
    getSession(sessionId) {
        return this.request('GET', `/sessions/${sessionId}`);
    }
    shoot(sessionId, direction, dragFraction) {
        return this.request('POST', `/sessions/${sessionId}/shots`, {
            direction,
            drag_fraction: dragFraction,
        });
    }
    decide(sessionId, accept) {
        return this.request('POST', `/sessions/${sessionId}/decision`, { accept });
    }
    getReport(sessionId) {
        return this.request('GET', `/sessions/${sessionId}/report`);
    }
}
export function apiBaseFromLocation(loc, search = loc.search) {
    const override = new URLSearchParams(search).get('api');
    return (override ?? loc.origin).replace(/\/$/, '');
}
