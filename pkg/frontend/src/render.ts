// DOM rendering. Rows appear in exactly the order the API returned them,
// and every number on screen comes straight from a JSON field (display
// formatting only, no client-side scoring or sorting).

import type { Collocations, IdiomifyResponse, NeighborRow } from "./api";

const CATEGORIES = ["verb", "noun", "adj", "adv"] as const;

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) {
        node.className = className;
    }
    if (text !== undefined) {
        node.textContent = text;
    }
    return node;
}

function collocationCell(collocations: Collocations, category: (typeof CATEGORIES)[number]): HTMLTableCellElement {
    const cell = el("td", `colls colls-${category}`);
    // adjective/adverb columns can get long; they scroll sideways
    const strip = el("div", category === "adj" || category === "adv" ? "strip scrollable" : "strip");
    for (const entry of collocations[category]) {
        const chip = el("span", "chip");
        chip.appendChild(el("span", "chip-lemma", entry.lemma));
        chip.appendChild(el("span", "chip-score", entry.score.toFixed(2)));
        strip.appendChild(chip);
    }
    if (!collocations[category].length) {
        strip.appendChild(el("span", "chip chip-empty", "-"));
    }
    cell.appendChild(strip);
    return cell;
}

export function renderResults(container: HTMLElement, response: IdiomifyResponse): void {
    container.replaceChildren();
    const refined = el("p", "refined");
    refined.appendChild(el("span", "refined-label", "refined tokens: "));
    refined.appendChild(el("span", "refined-tokens", response.refined_tokens.join(" ")));
    container.appendChild(refined);

    if (response.reason !== undefined) {
        const empty = el("div", "empty-state");
        empty.appendChild(el("p", "empty-reason", `No results: ${response.reason}.`));
        empty.appendChild(
            el("p", "empty-hint", "Try rephrasing with more common words, for example a short definition."),
        );
        container.appendChild(empty);
        return;
    }

    const table = el("table", "results");
    const head = el("tr");
    for (const title of ["rank", "idiom", "similarity", ...CATEGORIES]) {
        head.appendChild(el("th", undefined, title));
    }
    table.createTHead().appendChild(head);
    const body = table.createTBody();
    response.results.forEach((result, rank) => {
        const row = el("tr", "result-row");
        row.appendChild(el("td", "rank", String(rank)));
        const idiomCell = el("td", "idiom");
        const link = el("button", "idiom-link", result.idiom);
        link.type = "button";
        link.dataset.idiom = result.idiom;
        idiomCell.appendChild(link);
        row.appendChild(idiomCell);
        row.appendChild(el("td", "similarity", result.similarity.toFixed(4)));
        for (const category of CATEGORIES) {
            row.appendChild(collocationCell(result.collocations, category));
        }
        body.appendChild(row);
    });
    container.appendChild(table);
}

export function renderNeighbors(panel: HTMLElement, rows: NeighborRow[]): void {
    panel.replaceChildren();
    panel.appendChild(el("h2", "panel-title", "nearest idioms"));
    const list = el("ol", "neighbor-list");
    for (const row of rows) {
        const item = el("li", "neighbor");
        const link = el("button", "idiom-link", row.idiom);
        link.type = "button";
        link.dataset.idiom = row.idiom;
        item.appendChild(link);
        item.appendChild(el("span", "similarity", row.similarity.toFixed(4)));
        list.appendChild(item);
    }
    panel.appendChild(list);
}

export function renderUnknownIdiom(panel: HTMLElement, hint: string[]): void {
    panel.replaceChildren();
    panel.appendChild(el("h2", "panel-title", "unknown idiom"));
    if (hint.length) {
        panel.appendChild(el("p", "panel-hint", "Did you mean:"));
        const list = el("ul", "hint-list");
        for (const key of hint) {
            const item = el("li", "hint");
            const link = el("button", "idiom-link", key);
            link.type = "button";
            link.dataset.idiom = key;
            item.appendChild(link);
            list.appendChild(item);
        }
        panel.appendChild(list);
    }
}

export function renderError(banner: HTMLElement, message: string | null): void {
    if (message === null) {
        banner.replaceChildren();
        banner.hidden = true;
        return;
    }
    banner.hidden = false;
    banner.replaceChildren(el("span", "error-text", message));
}

export function renderLoading(indicator: HTMLElement, loading: boolean): void {
    indicator.hidden = !loading;
}
