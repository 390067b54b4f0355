// Wires the search form, results table and neighbor panel together.
// State round-trips through the query string so searches are shareable.

import { ApiClient, ApiError, UnknownIdiomDetail } from "./api";
import { renderError, renderLoading, renderNeighbors, renderResults, renderUnknownIdiom } from "./render";
import {
    SearchViewState,
    fromQueryString,
    initialState,
    searchFailed,
    searchStarted,
    searchSucceeded,
    toQueryString,
} from "./state";

interface Elements {
    form: HTMLFormElement;
    phrase: HTMLInputElement;
    k: HTMLSelectElement;
    model: HTMLSelectElement;
    submit: HTMLButtonElement;
    results: HTMLElement;
    panel: HTMLElement;
    banner: HTMLElement;
    loading: HTMLElement;
}

function grab(doc: Document): Elements {
    const byId = <T extends HTMLElement>(id: string) => doc.getElementById(id) as T;
    return {
        form: byId<HTMLFormElement>("search-form"),
        phrase: byId<HTMLInputElement>("phrase"),
        k: byId<HTMLSelectElement>("k"),
        model: byId<HTMLSelectElement>("model"),
        submit: byId<HTMLButtonElement>("submit"),
        results: byId<HTMLElement>("results"),
        panel: byId<HTMLElement>("neighbor-panel"),
        banner: byId<HTMLElement>("error-banner"),
        loading: byId<HTMLElement>("loading"),
    };
}

export function init(doc: Document, client: ApiClient = new ApiClient()): void {
    const ui = grab(doc);
    let state: SearchViewState = { ...initialState(), ...fromQueryString(doc.location.search) };

    const sync = () => {
        ui.submit.disabled = ui.phrase.value.trim() === "";
        renderError(ui.banner, state.error);
        renderLoading(ui.loading, state.loading);
    };

    const runSearch = async () => {
        state = { ...state, phrase: ui.phrase.value.trim(), k: Number(ui.k.value), model: ui.model.value as SearchViewState["model"] };
        if (!state.phrase) {
            return;
        }
        state = searchStarted(state);
        sync();
        try {
            const response = await client.idiomify(state.phrase, state.k, state.model);
            state = searchSucceeded(state, response);
            renderResults(ui.results, response);
            history.replaceState(null, "", toQueryString(state) || doc.location.pathname);
        } catch (err) {
            if (err instanceof DOMException && err.name === "AbortError") {
                return; // superseded by a newer search
            }
            const message = err instanceof ApiError ? `search failed (${err.status})` : "search failed: server unreachable";
            state = searchFailed(state, message);
        }
        sync();
    };

    const explore = async (idiom: string) => {
        try {
            renderNeighbors(ui.panel, await client.neighbors(idiom, 5));
        } catch (err) {
            if (err instanceof ApiError && err.status === 404) {
                const detail = err.detail as UnknownIdiomDetail | null;
                renderUnknownIdiom(ui.panel, detail?.hint ?? []);
                return;
            }
            // network trouble: keep the panel as it was, surface a banner
            state = searchFailed(state, "neighbor lookup failed: server unreachable");
            sync();
        }
    };

    ui.form.addEventListener("submit", (event) => {
        event.preventDefault();
        void runSearch();
    });
    ui.phrase.addEventListener("input", sync);

    // idiom names anywhere (result rows, neighbor panel, hints) re-root the panel
    doc.addEventListener("click", (event) => {
        const target = event.target as HTMLElement | null;
        const idiom = target?.dataset?.idiom;
        if (idiom) {
            void explore(idiom);
        }
    });

    ui.phrase.value = state.phrase;
    ui.k.value = String(state.k);
    ui.model.value = state.model;
    sync();
    if (state.phrase) {
        void runSearch();
    }
}

if (typeof window !== "undefined" && typeof document !== "undefined" && document.getElementById("search-form")) {
    init(document);
}
