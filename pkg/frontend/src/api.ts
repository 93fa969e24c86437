// Typed client for the printsynth session API. The client is stateless with
// respect to synthesis: every state change round-trips to the server.

export type SessionPhase = "asking" | "rejected" | "done" | "failed";

export interface QuestionView {
    tree_text: string;
    hint?: string;
    suggestions: string[];
}

export interface SessionStats {
    testset_size: number;
    inferred: number;
    asked: number;
    remaining: number;
    asked_nothing?: number;
    asked_hint?: number;
    asked_suggestions?: number;
}

export interface SessionView {
    state: SessionPhase;
    question?: QuestionView;
    stats: SessionStats;
    message?: string;
    reason?: string;
}

export interface SessionResult {
    code: string;
    stats: SessionStats;
    transcript: Array<Record<string, unknown>>;
}

export interface CreatedSession {
    session_id: string;
    state: SessionPhase;
}

export class ApiError extends Error {
    constructor(message: string, readonly status: number) {
        super(message);
    }
}

async function asJson<T>(response: Response): Promise<T> {
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
        const detail = (body as { error?: string }).error ?? response.statusText;
        throw new ApiError(detail, response.status);
    }
    return body as T;
}

export class ApiClient {
    constructor(readonly base: string = "") {}

    private url(path: string): string {
        return this.base.replace(/\/$/, "") + path;
    }

    async createSession(adtSource: string, maxSuggestions?: number): Promise<CreatedSession> {
        const payload: Record<string, unknown> = { adt_source: adtSource };
        if (maxSuggestions !== undefined) {
            payload.max_suggestions = maxSuggestions;
        }
        const response = await fetch(this.url("/sessions"), {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(payload),
        });
        return asJson<CreatedSession>(response);
    }

    async getSession(id: string): Promise<SessionView> {
        return asJson<SessionView>(await fetch(this.url(`/sessions/${id}`)));
    }

    async answerText(id: string, text: string): Promise<SessionView> {
        return this.answer(id, { text });
    }

    async answerSuggestion(id: string, index: number): Promise<SessionView> {
        return this.answer(id, { suggestion_index: index });
    }

    private async answer(id: string, payload: Record<string, unknown>): Promise<SessionView> {
        const response = await fetch(this.url(`/sessions/${id}/answer`), {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(payload),
        });
        return asJson<SessionView>(response);
    }

    async result(id: string): Promise<SessionResult> {
        return asJson<SessionResult>(await fetch(this.url(`/sessions/${id}/result`)));
    }
}
