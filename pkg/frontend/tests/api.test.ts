import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api";

import neighbors404 from "./fixtures/neighbors_404.json";

function jsonResponse(body: unknown, status = 200): Response {
    return new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
    });
}

afterEach(() => {
    vi.restoreAllMocks();
});

describe("ApiClient", () => {
    it("builds the idiomify request from its arguments", async () => {
        const fetchMock = vi
            .spyOn(globalThis, "fetch")
            .mockResolvedValue(jsonResponse({ query: "x", refined_tokens: [], results: [] }));
        await new ApiClient("http://api").idiomify("down to earth", 7, "tfidf");
        const [url] = fetchMock.mock.calls[0];
        expect(String(url)).toBe("http://api/api/idiomify?phrase=down+to+earth&k=7&model=tfidf");
    });

    it("a newer search aborts the older one", async () => {
        vi.spyOn(globalThis, "fetch").mockImplementation(
            (_, init) =>
                new Promise((resolve, reject) => {
                    init?.signal?.addEventListener("abort", () =>
                        reject(new DOMException("aborted", "AbortError")),
                    );
                    setTimeout(() => resolve(jsonResponse({ query: "", refined_tokens: [], results: [] })), 50);
                }),
        );
        const client = new ApiClient();
        const first = client.idiomify("one", 5, "pmi");
        const second = client.idiomify("two", 5, "pmi");
        await expect(first).rejects.toHaveProperty("name", "AbortError");
        await expect(second).resolves.toBeTruthy();
    });

    it("wraps http failures in ApiError with the server detail", async () => {
        vi.spyOn(globalThis, "fetch").mockResolvedValue(jsonResponse(neighbors404, 404));
        const client = new ApiClient();
        const failure = client.neighbors("catch-99", 5);
        await expect(failure).rejects.toBeInstanceOf(ApiError);
        await failure.catch((err: ApiError) => {
            expect(err.status).toBe(404);
            expect((err.detail as { hint: string[] }).hint).toContain("catch-22");
        });
    });
});
