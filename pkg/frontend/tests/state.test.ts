import { describe, expect, it } from "vitest";

import type { IdiomifyResponse } from "../src/api";
import {
    fromQueryString,
    initialState,
    searchFailed,
    searchStarted,
    searchSucceeded,
    toQueryString,
} from "../src/state";

import resultsFixture from "./fixtures/idiomify_results.json";

const response = resultsFixture as IdiomifyResponse;

describe("state transitions", () => {
    it("loading and error are mutually exclusive", () => {
        let state = searchFailed(initialState(), "boom");
        expect(state.error).toBe("boom");
        state = searchStarted(state);
        expect(state.loading).toBe(true);
        expect(state.error).toBeNull();
        state = searchFailed(state, "boom again");
        expect(state.loading).toBe(false);
        expect(state.error).toBe("boom again");
    });

    it("success mirrors the response", () => {
        const state = searchSucceeded(searchStarted(initialState()), response);
        expect(state.results).toBe(response.results);
        expect(state.reason).toBeNull();
        expect(state.loading).toBe(false);
    });

    it("failure preserves previous results", () => {
        const loaded = searchSucceeded(initialState(), response);
        const failed = searchFailed(searchStarted(loaded), "offline");
        expect(failed.results).toBe(response.results);
        expect(failed.error).toBe("offline");
    });

    it("an empty-result reason is kept for rendering", () => {
        const state = searchSucceeded(initialState(), {
            query: "zzz",
            refined_tokens: ["zzz"],
            results: [],
            reason: "no known tokens",
        });
        expect(state.reason).toBe("no known tokens");
    });
});

describe("query-string round trip", () => {
    it("serializes phrase, k and model", () => {
        const state = { ...initialState(), phrase: "wait anxiously", k: 10, model: "tf" as const };
        const qs = toQueryString(state);
        expect(fromQueryString(qs)).toEqual({ phrase: "wait anxiously", k: 10, model: "tf" });
    });

    it("empty phrase gives an empty query string", () => {
        expect(toQueryString(initialState())).toBe("");
    });

    it("bad parameters fall back to defaults", () => {
        expect(fromQueryString("?phrase=x&k=999&model=bogus")).toEqual({
            phrase: "x",
            k: 5,
            model: "pmi",
        });
    });
});
