"""Resumable synthesis sessions over a wire-friendly state machine.

A session wraps one inference run: created from ADT source, it advances
through auto-inferred outputs, surfaces one question at a time, validates
every answer server-side, and ends with the emitted printer plus the
question statistics.  Transcripts replay deterministically.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .adt import AdtError, desugar_primitives, domain_of, parse_adt, standin_sample
from .engine import (
    EngineConfig,
    InconsistentAnswerError,
    InferenceState,
    Sample,
    emit_code,
)

ASKING = "asking"
REJECTED = "rejected"
DONE = "done"
FAILED = "failed"


class SessionError(Exception):
    pass


class StateError(SessionError):
    pass


@dataclass
class Session:
    id: str
    state: str
    engine: InferenceState | None = None
    decl: object = None
    code: str | None = None
    rejection: str | None = None
    failure: str | None = None
    transcript: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    # -- views -----------------------------------------------------------------

    def question_view(self) -> dict | None:
        if self.engine is None or self.engine.current is None:
            return None
        q = self.engine.current
        view = {"tree_text": q.rendered, "suggestions": list(q.suggestions)}
        if q.hint:
            view["hint"] = q.hint
        return view

    def stats_view(self) -> dict:
        if self.engine is None:
            return {}
        return self.engine.stats()

    def public_view(self) -> dict:
        view = {"state": self.state, "stats": self.stats_view()}
        question = self.question_view()
        if question is not None:
            view["question"] = question
        if self.state == REJECTED and self.rejection:
            view["message"] = self.rejection
        if self.state == FAILED and self.failure:
            view["reason"] = self.failure
        return view


def create_session(
    adt_source: str, max_suggestions: int = 9, debug_invariants: bool = False
) -> Session:
    """Parse, desugar, build the domain, seed the stand-in outputs, and
    advance to the first real question (or straight to Done)."""
    session = Session(id=uuid.uuid4().hex, state=FAILED)
    try:
        decl = desugar_primitives(parse_adt(adt_source))
        domain = domain_of(decl)
        presets = standin_sample(decl, domain)
        config = EngineConfig(
            max_suggestions=max_suggestions,
            presets=presets,
            debug_invariants=debug_invariants,
        )
        session.engine = InferenceState(domain, config)
        session.decl = decl
    except AdtError as err:
        session.failure = str(err)
        return session
    _advance(session)
    return session


def _advance(session: Session):
    engine = session.engine
    before_inferred = dict(engine.inferred)
    question = engine.next_question()
    for tree, word in engine.inferred.items():
        if tree not in before_inferred:
            session.transcript.append(
                {"event": "Inferred", "tree": tree.text(), "word": word}
            )
    if question is None:
        _finish(session)
    else:
        session.state = ASKING
        entry = {
            "event": "AskedQuestion",
            "tree": question.rendered,
            "suggestions": list(question.suggestions),
        }
        if question.hint:
            entry["hint"] = question.hint
        if not session.transcript or session.transcript[-1] != entry:
            session.transcript.append(entry)


def _finish(session: Session):
    engine = session.engine
    tau = engine.result()
    asked = Sample()
    for tree, word in engine.asked.items():
        asked.record(tree, word)
    session.code = emit_code(tau, asked, session.decl)
    session.state = DONE
    session.transcript.append({"event": "Emitted", "code": session.code})


def submit_answer(
    session: Session,
    text: str | None = None,
    suggestion_index: int | None = None,
    source: str = "human",
) -> Session:
    """Validate and record an answer for the pending question.

    Either free text (empty string means the empty output) or a 1-based
    suggestion index.  Inconsistent answers move the session to Rejected and
    keep the question pending.
    """
    if session.state not in (ASKING, REJECTED):
        raise StateError(f"session is {session.state}, not awaiting an answer")
    engine = session.engine
    question = engine.current
    if suggestion_index is not None:
        if text is not None:
            raise SessionError("give either text or suggestion_index, not both")
        if not 1 <= suggestion_index <= len(question.suggestions):
            raise SessionError(
                f"suggestion index {suggestion_index} out of range 1..{len(question.suggestions)}"
            )
        word = question.suggestions[suggestion_index - 1]
        source = f"suggestion-{suggestion_index}"
    elif text is not None:
        word = text
    else:
        raise SessionError("an answer needs text or a suggestion_index")

    try:
        engine.answer_current(word)
    except InconsistentAnswerError as err:
        session.state = REJECTED
        session.rejection = str(err)
        session.transcript.append(
            {
                "event": "RejectedAnswer",
                "tree": question.rendered,
                "word": word,
                "message": str(err),
            }
        )
        return session
    session.rejection = None
    session.transcript.append(
        {
            "event": "AnswerGiven",
            "tree": question.rendered,
            "word": word,
            "source": source,
        }
    )
    _advance(session)
    return session


def session_result(session: Session) -> dict:
    if session.state != DONE:
        raise StateError(f"session is {session.state}, not done")
    stats = session.engine.stats()
    return {
        "code": session.code,
        "stats": stats,
        "transcript": list(session.transcript),
    }


def save_transcript(session: Session) -> str:
    return json.dumps(session.transcript, indent=2)


def replay(adt_source: str, transcript, max_suggestions: int = 9) -> Session:
    """Feed a saved transcript's answers back through a fresh session.

    Rejected probes replay as rejections; the replay must end in the same
    Done state with the identical emitted code.
    """
    if isinstance(transcript, str):
        transcript = json.loads(transcript)
    session = create_session(adt_source, max_suggestions=max_suggestions)
    if session.state == FAILED:
        raise SessionError(f"replay failed to create session: {session.failure}")
    for entry in transcript:
        event = entry.get("event")
        if event not in ("AnswerGiven", "RejectedAnswer"):
            continue
        if session.state not in (ASKING, REJECTED):
            raise SessionError("transcript has answers beyond the final question")
        current = session.engine.current.rendered
        if current != entry["tree"]:
            raise SessionError(
                f"transcript mismatch: answer for {entry['tree']} but the "
                f"session is asking {current}"
            )
        submit_answer(session, text=entry["word"], source="replay")
        if event == "RejectedAnswer" and session.state != REJECTED:
            raise SessionError("transcript expected a rejection that did not happen")
    return session


class SessionStore:
    """In-memory session registry with optional one-file-per-session
    transcript persistence."""

    def __init__(self, persist_dir: str | None = None):
        self.sessions: dict[str, Session] = {}
        self.persist_dir = Path(persist_dir) if persist_dir else None
        self._lock = threading.Lock()

    def create(self, adt_source: str, max_suggestions: int = 9) -> Session:
        session = create_session(adt_source, max_suggestions=max_suggestions)
        with self._lock:
            self.sessions[session.id] = session
        self.persist(session)
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise SessionError(f"unknown session {session_id}")
        return session

    def persist(self, session: Session):
        if self.persist_dir is None:
            return
        self.persist_dir.mkdir(parents=True, exist_ok=True)
        path = self.persist_dir / f"{session.id}.json"
        path.write_text(save_transcript(session), encoding="utf-8")
