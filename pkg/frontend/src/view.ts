// DOM rendering for the three screens: question (with hint, numbered
// suggestions, free text and the rejection banner), live progress, and the
// final code with copy/download.

import type { SessionStats, SessionView } from "./api.js";

export interface QuestionHandlers {
    onSuggestion(index: number): void; // 1-based, as displayed
    onText(text: string): void;
}

/** Whitespace made visible for suggestion labels: answers often differ only
 *  by a leading space or a newline. */
export function visibleWhitespace(word: string): string {
    return word.replace(/ /g, "·").replace(/\n/g, "¶");
}

function el<K extends keyof HTMLElementTagNameMap>(
    doc: Document,
    tag: K,
    className?: string,
    text?: string,
): HTMLElementTagNameMap[K] {
    const node = doc.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

export function renderQuestion(
    container: HTMLElement,
    view: SessionView,
    handlers: QuestionHandlers,
): void {
    const doc = container.ownerDocument;
    container.replaceChildren();
    const question = view.question;
    if (!question) {
        return;
    }

    if (view.state === "rejected" && view.message) {
        const banner = el(doc, "div", "rejection-banner");
        banner.setAttribute("role", "alert");
        banner.textContent = view.message;
        container.append(banner);
    }

    container.append(
        el(doc, "p", "prompt", "What should be the function output for the following input tree?"),
    );
    container.append(el(doc, "pre", "tree", question.tree_text));
    if (question.hint) {
        container.append(el(doc, "p", "hint", `Something of the form: ${question.hint}`));
    }

    if (question.suggestions.length > 0) {
        const list = el(doc, "div", "suggestions");
        question.suggestions.forEach((word, i) => {
            const button = el(doc, "button", "suggestion", `${i + 1}) ${visibleWhitespace(word)}`);
            button.type = "button";
            button.dataset.index = String(i + 1);
            button.addEventListener("click", () => handlers.onSuggestion(i + 1));
            list.append(button);
        });
        container.append(list);
        container.append(
            el(
                doc,
                "p",
                "suggestion-help",
                `Please enter a number between 1 and ${question.suggestions.length}, ` +
                    "or type your answer manually below",
            ),
        );
    }

    const form = el(doc, "form", "answer-form");
    const input = el(doc, "textarea", "answer-input");
    input.rows = 2;
    input.placeholder = "type the output (may contain newlines); empty means the empty string";
    const submit = el(doc, "button", "answer-submit", "Answer");
    submit.type = "submit";
    form.append(input, submit);
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        handlers.onText(input.value);
    });
    container.append(form);
}

export function renderProgress(container: HTMLElement, stats: SessionStats): void {
    const doc = container.ownerDocument;
    container.replaceChildren();
    const bar = el(doc, "div", "progress");
    for (const [label, value] of [
        ["inferred", stats.inferred],
        ["asked", stats.asked],
        ["remaining", stats.remaining],
    ] as const) {
        const cell = el(doc, "span", `counter counter-${label}`);
        cell.append(el(doc, "strong", undefined, String(value)), doc.createTextNode(` ${label}`));
        bar.append(cell);
    }
    bar.append(el(doc, "span", "counter counter-total", `of ${stats.testset_size} test trees`));
    container.append(bar);
}

export function renderResult(
    container: HTMLElement,
    code: string,
    stats: SessionStats,
): void {
    const doc = container.ownerDocument;
    container.replaceChildren();
    container.append(el(doc, "h2", undefined, "Synthesized printer"));

    const breakdown = el(
        doc,
        "p",
        "breakdown",
        `${stats.testset_size} test trees: ${stats.inferred} inferred, ${stats.asked} asked` +
            (stats.asked_nothing !== undefined
                ? ` (${stats.asked_nothing} plain, ${stats.asked_hint} with a hint, ` +
                  `${stats.asked_suggestions} with suggestions)`
                : ""),
    );
    container.append(breakdown);

    const pre = el(doc, "pre", "code", code);
    container.append(pre);

    const actions = el(doc, "div", "result-actions");
    const copy = el(doc, "button", "copy", "Copy");
    copy.type = "button";
    copy.addEventListener("click", () => {
        void navigator.clipboard?.writeText(code);
    });
    const download = el(doc, "a", "download", "Download");
    download.setAttribute("download", "printer.scala");
    download.href = `data:text/plain;charset=utf-8,${encodeURIComponent(code)}`;
    actions.append(copy, download);
    container.append(actions);
}

export function renderFailure(container: HTMLElement, reason: string): void {
    const doc = container.ownerDocument;
    container.replaceChildren();
    const banner = el(doc, "div", "failure-banner", `Could not start the session: ${reason}`);
    banner.setAttribute("role", "alert");
    container.append(banner);
}

export function renderNetworkError(
    container: HTMLElement,
    message: string,
    onRetry: () => void,
): void {
    const doc = container.ownerDocument;
    container.replaceChildren();
    const banner = el(doc, "div", "network-banner");
    banner.setAttribute("role", "alert");
    banner.append(el(doc, "span", undefined, `Network problem: ${message} `));
    const retry = el(doc, "button", "retry", "Retry");
    retry.type = "button";
    retry.addEventListener("click", onRetry);
    banner.append(retry);
    container.append(banner);
}
