// Entry point: a form to paste the ADT declaration and start the session;
// the session id lands in the URL hash so a reload reconnects.

import { ApiClient } from "./api.js";
import { SessionController } from "./app.js";

const SAMPLE = `abstract class Tag
case class div() extends Tag
case class span() extends Tag

abstract class List
case class cons(t: Tag, l: List) extends List
case class nil() extends List
`;

export function mount(root: HTMLElement, apiBase = ""): SessionController {
    const doc = root.ownerDocument;
    root.replaceChildren();

    const title = doc.createElement("h1");
    title.textContent = "printsynth";
    const progress = doc.createElement("div");
    progress.id = "progress";
    const main = doc.createElement("div");
    main.id = "main";

    const form = doc.createElement("form");
    form.id = "start-form";
    const source = doc.createElement("textarea");
    source.rows = 10;
    source.value = SAMPLE;
    const start = doc.createElement("button");
    start.type = "submit";
    start.textContent = "Start session";
    form.append(source, start);

    root.append(title, form, progress, main);

    const controller = new SessionController(new ApiClient(apiBase), progress, main);
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        void controller.start(source.value).then(() => {
            if (controller.sessionId && doc.defaultView) {
                doc.defaultView.location.hash = controller.sessionId;
            }
        });
    });

    const win = doc.defaultView;
    const existing = win?.location.hash.replace(/^#/, "");
    if (existing) {
        void controller.resume(existing);
    }
    return controller;
}

declare global {
    interface Window {
        printsynthMount?: typeof mount;
    }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
    window.printsynthMount = mount;
    const root = document.getElementById("app");
    if (root) {
        mount(root, (window as Window & { PRINTSYNTH_API?: string }).PRINTSYNTH_API ?? "");
    }
}
