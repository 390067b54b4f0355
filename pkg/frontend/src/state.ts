// Search view state and its query-string projection, so searches are
// shareable links. Loading and error are mutually exclusive by
// construction: every transition clears the other side.

import type { IdiomifyResponse, IdiomResult } from "./api";

export const MODELS = ["tf", "tfidf", "pmi"] as const;
export type Model = (typeof MODELS)[number];

export interface SearchViewState {
    phrase: string;
    k: number;
    model: Model;
    results: IdiomResult[];
    reason: string | null;
    loading: boolean;
    error: string | null;
}

export function initialState(): SearchViewState {
    return {
        phrase: "",
        k: 5,
        model: "pmi",
        results: [],
        reason: null,
        loading: false,
        error: null,
    };
}

export function searchStarted(state: SearchViewState): SearchViewState {
    return { ...state, loading: true, error: null };
}

export function searchSucceeded(
    state: SearchViewState,
    response: IdiomifyResponse,
): SearchViewState {
    return {
        ...state,
        results: response.results,
        reason: response.reason ?? null,
        loading: false,
        error: null,
    };
}

/** A failed search keeps the previous results on screen. */
export function searchFailed(state: SearchViewState, message: string): SearchViewState {
    return { ...state, loading: false, error: message };
}

function asModel(value: string | null): Model {
    return (MODELS as readonly string[]).includes(value ?? "") ? (value as Model) : "pmi";
}

function asK(value: string | null): number {
    const parsed = Number(value);
    return Number.isInteger(parsed) && parsed >= 1 && parsed <= 50 ? parsed : 5;
}

export function fromQueryString(qs: string): Pick<SearchViewState, "phrase" | "k" | "model"> {
    const params = new URLSearchParams(qs);
    return {
        phrase: params.get("phrase") ?? "",
        k: asK(params.get("k")),
        model: asModel(params.get("model")),
    };
}

export function toQueryString(state: SearchViewState): string {
    if (!state.phrase) {
        return "";
    }
    const params = new URLSearchParams({
        phrase: state.phrase,
        k: String(state.k),
        model: state.model,
    });
    return `?${params}`;
}
