// @vitest-environment jsdom
import { beforeEach, describe, expect, it, vi } from "vitest";

import type { SessionView } from "../src/api.js";
import {
    renderNetworkError,
    renderProgress,
    renderQuestion,
    renderResult,
    visibleWhitespace,
} from "../src/view.js";

function host(): HTMLElement {
    const div = document.createElement("div");
    document.body.append(div);
    return div;
}

beforeEach(() => {
    document.body.replaceChildren();
});

describe("visibleWhitespace", () => {
    it("marks spaces and newlines", () => {
        expect(visibleWhitespace(" a")).toBe("·a");
        expect(visibleWhitespace("\nN ->")).toBe("¶N·->");
        expect(visibleWhitespace("plain")).toBe("plain");
    });
});

describe("renderQuestion", () => {
    const baseView: SessionView = {
        state: "asking",
        question: { tree_text: "Terminal(a)", hint: "[...]a[...]", suggestions: [] },
        stats: { testset_size: 10, inferred: 1, asked: 2, remaining: 7 },
    };

    it("shows the tree in monospace and the hint line", () => {
        const container = host();
        renderQuestion(container, baseView, { onSuggestion: () => {}, onText: () => {} });
        expect(container.querySelector("pre.tree")?.textContent).toBe("Terminal(a)");
        expect(container.querySelector(".hint")?.textContent).toBe(
            "Something of the form: [...]a[...]",
        );
        expect(container.querySelectorAll("button.suggestion")).toHaveLength(0);
    });

    it("numbers suggestion buttons from 1 and wires clicks", () => {
        const container = host();
        const clicks: number[] = [];
        const view: SessionView = {
            ...baseView,
            question: {
                tree_text: "NonTerminal(ConsChar(b,NilChar))",
                suggestions: ["Nb", "bN"],
            },
            stats: baseView.stats,
        };
        renderQuestion(container, view, {
            onSuggestion: (i) => clicks.push(i),
            onText: () => {},
        });
        const buttons = [...container.querySelectorAll("button.suggestion")];
        expect(buttons.map((b) => b.textContent)).toEqual(["1) Nb", "2) bN"]);
        (buttons[1] as HTMLButtonElement).click();
        expect(clicks).toEqual([2]);
    });

    it("makes whitespace visible in suggestions", () => {
        const container = host();
        const view: SessionView = {
            ...baseView,
            question: { tree_text: "ConsSymbol(Terminal(a),NilSymbol)", suggestions: [" a", "a "] },
        };
        renderQuestion(container, view, { onSuggestion: () => {}, onText: () => {} });
        const labels = [...container.querySelectorAll("button.suggestion")].map(
            (b) => b.textContent,
        );
        expect(labels).toEqual(["1) ·a", "2) a·"]);
    });

    it("submits free text with literal newlines, empty meaning empty output", () => {
        const container = host();
        const texts: string[] = [];
        renderQuestion(container, baseView, {
            onSuggestion: () => {},
            onText: (t) => texts.push(t),
        });
        const input = container.querySelector("textarea.answer-input") as HTMLTextAreaElement;
        const form = container.querySelector("form.answer-form") as HTMLFormElement;
        input.value = "\nN ->";
        form.dispatchEvent(new window.Event("submit", { cancelable: true }));
        input.value = "";
        form.dispatchEvent(new window.Event("submit", { cancelable: true }));
        expect(texts).toEqual(["\nN ->", ""]);
    });

    it("shows the rejection banner with the server message", () => {
        const container = host();
        const view: SessionView = {
            ...baseView,
            state: "rejected",
            message:
                "We cannot have the transducer convert ConsRule(Rule(NonTerminal(NilChar),NilSymbol),NilRule)\n" +
                "to N- >.\nPlease enter something consistent with what you previously entered (e.g. 'N ->','N ->bar',...)?",
        };
        renderQuestion(container, view, { onSuggestion: () => {}, onText: () => {} });
        const banner = container.querySelector(".rejection-banner");
        expect(banner?.textContent).toContain("We cannot have the transducer convert");
        expect(banner?.textContent).toContain("'N ->'");
    });
});

describe("renderProgress", () => {
    it("shows the live counters", () => {
        const container = host();
        renderProgress(container, {
            testset_size: 14,
            inferred: 8,
            asked: 2,
            remaining: 4,
        });
        const text = container.textContent ?? "";
        expect(text).toContain("8 inferred");
        expect(text).toContain("2 asked");
        expect(text).toContain("4 remaining");
        expect(text).toContain("of 14 test trees");
    });
});

describe("renderResult", () => {
    it("shows the code with copy and download plus the breakdown", () => {
        const container = host();
        const code = 'def print(t: Any): String = t match {\n  case Grammar(t1,t2) => "Start: "\n}';
        const writeText = vi.fn().mockResolvedValue(undefined);
        Object.assign(navigator, { clipboard: { writeText } });
        renderResult(container, code, {
            testset_size: 109,
            inferred: 95,
            asked: 14,
            remaining: 0,
            asked_nothing: 6,
            asked_hint: 6,
            asked_suggestions: 2,
        });
        expect(container.querySelector("pre.code")?.textContent).toContain("case Grammar(t1,t2)");
        expect(container.textContent).toContain("95 inferred");
        expect(container.textContent).toContain("6 plain, 6 with a hint, 2 with suggestions");
        (container.querySelector("button.copy") as HTMLButtonElement).click();
        expect(writeText).toHaveBeenCalledWith(code);
        const link = container.querySelector("a.download") as HTMLAnchorElement;
        expect(link.getAttribute("download")).toBe("printer.scala");
        expect(link.href).toContain("data:text/plain");
    });
});

describe("renderNetworkError", () => {
    it("offers a retry that re-runs the callback", () => {
        const container = host();
        const retry = vi.fn();
        renderNetworkError(container, "fetch failed", retry);
        expect(container.textContent).toContain("Network problem: fetch failed");
        (container.querySelector("button.retry") as HTMLButtonElement).click();
        expect(retry).toHaveBeenCalledOnce();
    });
});
