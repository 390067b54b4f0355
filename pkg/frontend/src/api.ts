// Typed client for the idiomatch query API. The UI consumes these payloads
// verbatim; nothing is recomputed client-side.

export interface CollocationEntry {
    lemma: string;
    score: number;
}

export interface Collocations {
    verb: CollocationEntry[];
    noun: CollocationEntry[];
    adj: CollocationEntry[];
    adv: CollocationEntry[];
}

export interface IdiomResult {
    idiom: string;
    similarity: number;
    collocations: Collocations;
}

export interface IdiomifyResponse {
    query: string;
    refined_tokens: string[];
    results: IdiomResult[];
    reason?: string;
}

export interface NeighborRow {
    idiom: string;
    similarity: number;
}

export interface UnknownIdiomDetail {
    error: string;
    hint: string[];
}

export class ApiError extends Error {
    constructor(public readonly status: number, public readonly detail: unknown) {
        super(`request failed with status ${status}`);
    }
}

async function errorDetail(response: Response): Promise<unknown> {
    try {
        const body = await response.json();
        return body.detail ?? body;
    } catch {
        return null;
    }
}

export class ApiClient {
    private inflightSearch: AbortController | null = null;

    constructor(private readonly baseUrl: string = "") {}

    /** Search idioms for a phrase; a newer call cancels the previous one. */
    async idiomify(phrase: string, k: number, model: string): Promise<IdiomifyResponse> {
        this.inflightSearch?.abort();
        const controller = new AbortController();
        this.inflightSearch = controller;
        const params = new URLSearchParams({ phrase, k: String(k), model });
        const response = await fetch(`${this.baseUrl}/api/idiomify?${params}`, {
            signal: controller.signal,
        });
        if (!response.ok) {
            throw new ApiError(response.status, await errorDetail(response));
        }
        return response.json() as Promise<IdiomifyResponse>;
    }

    async neighbors(idiom: string, k: number): Promise<NeighborRow[]> {
        const params = new URLSearchParams({ idiom, k: String(k) });
        const response = await fetch(`${this.baseUrl}/api/neighbors?${params}`);
        if (!response.ok) {
            throw new ApiError(response.status, await errorDetail(response));
        }
        return response.json() as Promise<NeighborRow[]>;
    }
}
