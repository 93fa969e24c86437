"""HTTP+JSON API over the session store.

Endpoints:
  POST /sessions                 {adt_source, max_suggestions?} -> {session_id, state}
  GET  /sessions/{id}            -> {state, question?, stats, message?}
  POST /sessions/{id}/answer     {text?, suggestion_index?} -> same as GET
  GET  /sessions/{id}/result     -> {code, stats, transcript}

Interleaved submits on one session are rejected with 409; answers are
validated server-side, so a client can never corrupt the sample.
"""

from __future__ import annotations

import json
import re
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .session import (
    SessionError,
    SessionStore,
    StateError,
    session_result,
    submit_answer,
)

_SESSION_PATH = re.compile(r"^/sessions/([0-9a-f]+)$")
_ANSWER_PATH = re.compile(r"^/sessions/([0-9a-f]+)/answer$")
_RESULT_PATH = re.compile(r"^/sessions/([0-9a-f]+)/result$")


def make_server(host: str = "127.0.0.1", port: int = 0, persist_dir: str | None = None):
    store = SessionStore(persist_dir)

    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _reply(self, status: int, payload: dict):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _read_json(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                payload = json.loads(raw.decode("utf-8") or "{}")
            except json.JSONDecodeError as err:
                raise SessionError(f"invalid JSON body: {err}") from None
            if not isinstance(payload, dict):
                raise SessionError("JSON body must be an object")
            return payload

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()

        def do_GET(self):
            match = _SESSION_PATH.match(self.path)
            if match:
                return self._with_session(match.group(1), lambda s: s.public_view())
            match = _RESULT_PATH.match(self.path)
            if match:
                return self._with_session(match.group(1), session_result)
            self._reply(404, {"error": f"no such endpoint {self.path}"})

        def do_POST(self):
            if self.path == "/sessions":
                try:
                    payload = self._read_json()
                    source = payload.get("adt_source")
                    if not isinstance(source, str):
                        raise SessionError("adt_source (string) is required")
                    session = store.create(
                        source, max_suggestions=int(payload.get("max_suggestions", 9))
                    )
                except SessionError as err:
                    return self._reply(400, {"error": str(err)})
                return self._reply(
                    200, {"session_id": session.id, "state": session.state}
                )
            match = _ANSWER_PATH.match(self.path)
            if match:
                try:
                    payload = self._read_json()
                except SessionError as err:
                    return self._reply(400, {"error": str(err)})

                def answer(session):
                    if not session.lock.acquire(blocking=False):
                        raise _Conflict("another submit is in flight")
                    try:
                        index = payload.get("suggestion_index")
                        submit_answer(
                            session,
                            text=payload.get("text"),
                            suggestion_index=int(index) if index is not None else None,
                        )
                        store.persist(session)
                        return session.public_view()
                    finally:
                        session.lock.release()

                return self._with_session(match.group(1), answer)
            self._reply(404, {"error": f"no such endpoint {self.path}"})

        def _with_session(self, session_id: str, fn):
            try:
                session = store.get(session_id)
            except SessionError as err:
                return self._reply(404, {"error": str(err)})
            try:
                return self._reply(200, fn(session))
            except _Conflict as err:
                return self._reply(409, {"error": str(err)})
            except StateError as err:
                return self._reply(409, {"error": str(err)})
            except SessionError as err:
                return self._reply(400, {"error": str(err)})

    class _Conflict(Exception):
        pass

    server = ThreadingHTTPServer((host, port), Handler)
    server.store = store
    return server


def serve(port: int, host: str = "127.0.0.1", persist_dir: str | None = None):
    server = make_server(host, port, persist_dir)
    print(
        f"printsynth API listening on http://{host}:{server.server_address[1]}",
        flush=True,
    )
    try:
        server.serve_forever()
    finally:
        server.server_close()
