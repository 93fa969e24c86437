// Session controller: every user action round-trips to the server and the
// whole screen re-renders from the fresh server view, so reloading the page
// (or re-fetching the session) always reproduces the identical screen.

import { ApiClient, ApiError, type SessionView } from "./api.js";
import {
    renderFailure,
    renderNetworkError,
    renderProgress,
    renderQuestion,
    renderResult,
} from "./view.js";

export class SessionController {
    sessionId: string | null = null;
    lastView: SessionView | null = null;
    /** Bumped after every render; lets tests await the next screen. */
    version = 0;

    constructor(
        readonly api: ApiClient,
        readonly progressHost: HTMLElement,
        readonly mainHost: HTMLElement,
    ) {}

    async start(adtSource: string, maxSuggestions?: number): Promise<void> {
        await this.guard(async () => {
            const created = await this.api.createSession(adtSource, maxSuggestions);
            this.sessionId = created.session_id;
            await this.refresh();
        });
    }

    async resume(sessionId: string): Promise<void> {
        this.sessionId = sessionId;
        await this.refresh();
    }

    async refresh(): Promise<void> {
        if (!this.sessionId) return;
        await this.guard(async () => {
            const view = await this.api.getSession(this.sessionId!);
            await this.show(view);
        });
    }

    async submitText(text: string): Promise<void> {
        await this.guard(async () => {
            const view = await this.api.answerText(this.sessionId!, text);
            await this.show(view);
        });
    }

    async submitSuggestion(index: number): Promise<void> {
        await this.guard(async () => {
            const view = await this.api.answerSuggestion(this.sessionId!, index);
            await this.show(view);
        });
    }

    private async show(view: SessionView): Promise<void> {
        this.lastView = view;
        renderProgress(this.progressHost, view.stats);
        switch (view.state) {
            case "asking":
            case "rejected":
                renderQuestion(this.mainHost, view, {
                    onSuggestion: (i) => void this.submitSuggestion(i),
                    onText: (t) => void this.submitText(t),
                });
                break;
            case "done": {
                const result = await this.api.result(this.sessionId!);
                renderResult(this.mainHost, result.code, result.stats);
                break;
            }
            case "failed":
                renderFailure(this.mainHost, view.reason ?? "unknown reason");
                break;
        }
        this.version += 1;
    }

    private async guard(action: () => Promise<void>): Promise<void> {
        try {
            await action();
        } catch (err) {
            if (err instanceof ApiError) {
                // conflicting submits and stale screens resolve by re-fetching
                if (err.status === 409) {
                    const view = await this.api.getSession(this.sessionId!);
                    await this.show(view);
                    return;
                }
                renderNetworkError(this.mainHost, err.message, () => void this.refresh());
                return;
            }
            const message = err instanceof Error ? err.message : String(err);
            renderNetworkError(this.mainHost, message, () => void this.refresh());
        }
    }
}
