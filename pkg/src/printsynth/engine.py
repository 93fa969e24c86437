"""Learning transducers: from a closed sample, from a domain with an oracle,
and interactively with output inference.

The interactive learner walks the tree test set smallest-first (so every
tree's subtrees are already answered), keeps per-symbol solution automata
over the recorded equations, and only asks the oracle when the
child-substituted automaton admits two or more outputs.  Everything else is
inferred, which keeps the number of questions linear in the domain size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .adt import AdtDeclaration, Domain, Tree
from .equations import (
    ClosureError,
    SequentialFormula,
    SolutionAutomaton,
    build_solution_automaton,
    enumerate_distinct_words,
    intersect,
    is_empty,
    make_reg_equation,
    recognizes_exactly_one,
    solve,
    split_at_separators,
    substitute_children,
)
from .testsets import tree_test_set
from .transducer import OneSTS, sts_of


class EngineError(Exception):
    pass


class InconsistentSampleError(EngineError):
    def __init__(self, message: str, conflicting=()):
        super().__init__(message)
        self.conflicting = tuple(conflicting)


class InconsistentAnswerError(EngineError):
    pass


@dataclass
class Sample:
    """Ordered partial map from trees to output words."""

    entries: dict[Tree, str] = field(default_factory=dict)

    def __contains__(self, tree: Tree) -> bool:
        return tree in self.entries

    def __getitem__(self, tree: Tree) -> str:
        return self.entries[tree]

    def record(self, tree: Tree, word: str):
        if tree in self.entries and self.entries[tree] != word:
            raise EngineError(f"conflicting outputs recorded for {tree.text()}")
        self.entries[tree] = word

    def items(self):
        return self.entries.items()

    def __len__(self):
        return len(self.entries)

    def missing_subtrees(self) -> list[Tree]:
        return [
            c
            for t in self.entries
            for c in t.children
            if c not in self.entries
        ]


def learn_from_sample(sample: Sample, alphabet=()) -> OneSTS | None:
    """Algorithm for closed samples: one equation per example with child
    outputs inlined, solved per root symbol.

    Returns None when no transducer is consistent with the sample.  Symbols
    from ``alphabet`` that the sample never constrains print empty
    constants.
    """
    missing = sample.missing_subtrees()
    if missing:
        raise ClosureError(
            "sample not closed under subtree: missing "
            + ", ".join(t.text() for t in missing)
        )
    formula = SequentialFormula(
        [make_reg_equation(t, w, sample) for t, w in sample.items()]
    )
    assignment = solve(formula)
    if assignment is None:
        return None
    table = {}
    for letter, word in assignment.items():
        table.setdefault(letter.symbol, {})[letter.index] = word
    for sym in alphabet:
        table.setdefault(sym, {})
    sts = {
        sym: tuple(slots.get(i, "") for i in range(sym.arity + 1))
        for sym, slots in table.items()
    }
    tau = OneSTS.from_dict(sts)
    for t, w in sample.items():
        if tau(t) != w:
            raise AssertionError(f"learned transducer violates sample on {t.text()}")
    return tau


def learn_from_domain(domain: Domain, oracle) -> OneSTS:
    """Ask the oracle for every tree of the tree test set, then learn.

    The result prints every domain tree exactly as the oracle would.
    """
    sample = Sample()
    for t in tree_test_set(domain):
        sample.record(t, oracle(t))
    tau = learn_from_sample(sample, alphabet=domain.symbols)
    if tau is None:
        by_root: dict = {}
        for t, w in sample.items():
            by_root.setdefault(t.root, []).append((t, w))
        conflict = min(
            (pairs for pairs in by_root.values() if _conflicting(pairs, sample)),
            key=len,
            default=list(sample.items()),
        )
        raise InconsistentSampleError(
            "oracle answers admit no transducer; conflicting examples: "
            + "; ".join(f"{t.text()} -> {w!r}" for t, w in conflict),
            conflict,
        )
    return tau


def _conflicting(pairs, sample) -> bool:
    formula = SequentialFormula([make_reg_equation(t, w, sample) for t, w in pairs])
    return solve(formula) is None


def make_hint(child_outputs: list[str]) -> str | None:
    """Pattern of the known child outputs with gap placeholders; no hint
    when every child output is empty."""
    visible = [w for w in child_outputs if w]
    if not visible:
        return None
    return "[...]" + "[...]".join(visible) + "[...]"


@dataclass
class Question:
    tree: Tree
    rendered: str
    hint: str | None
    suggestions: list[str]
    possible: object  # all consistent outputs, never exposed to clients

    def consistent_examples(self, count: int = 2) -> list[str]:
        return self.possible.example_words(count)


@dataclass
class EngineConfig:
    max_suggestions: int = 9
    presets: dict = field(default_factory=dict)  # Tree -> fixed output
    debug_invariants: bool = False


@dataclass
class InferenceState:
    """Resumable interactive learner over one domain.

    ``sol`` maps each symbol to the intersection of the solution automata of
    every recorded equation rooted at it (None while unconstrained, i.e.
    every tuple of constants is still possible).
    """

    domain: Domain
    config: EngineConfig = field(default_factory=EngineConfig)

    def __post_init__(self):
        self.test_set = tree_test_set(self.domain)
        self.pending = list(self.test_set)  # already smallest-first
        self.sample = Sample()
        self.sol: dict = {}
        self.asked: dict[Tree, str] = {}
        self.inferred: dict[Tree, str] = {}
        self.asked_kinds: dict[Tree, str] = {}  # nothing | hint | suggestions
        self.current: Question | None = None
        self.equations_by_symbol: dict = {}
        # symbol -> its constant tuple once the solution set is a singleton
        # (missing: not yet computed; None: still ambiguous)
        self._pinned: dict = {}
        # equations already intersected into sol (idempotent to repeat) and
        # a per-symbol-version memo of inference outcomes
        self._seen_equations: set = set()
        self._sol_version: dict = {}
        self._inference_memo: dict = {}

    # -- progress ------------------------------------------------------------

    @property
    def testset_size(self) -> int:
        return len(self.test_set)

    @property
    def remaining(self) -> int:
        return len(self.pending)  # the current question's tree is pending[0]

    @property
    def done(self) -> bool:
        return not self.pending and self.current is None

    def stats(self) -> dict:
        kinds = [self.asked_kinds[t] for t in self.asked]
        return {
            "testset_size": self.testset_size,
            "inferred": len(self.inferred),
            "asked": len(self.asked),
            "asked_nothing": kinds.count("nothing"),
            "asked_hint": kinds.count("hint"),
            "asked_suggestions": kinds.count("suggestions"),
            "remaining": self.remaining,
        }

    # -- the inference loop ----------------------------------------------------

    def next_question(self) -> Question | None:
        """Advance through inferable trees; stop at the first tree with two
        or more possible outputs and return its question."""
        if self.current is not None:
            return self.current
        while self.pending:
            tree = self.pending[0]
            child_outputs = [self.sample[c] for c in tree.children]
            sol = self.sol.get(tree.root)
            if tree in self.config.presets:
                self.pending.pop(0)
                self._record(tree, self.config.presets[tree], inferred=True)
                continue
            if sol is None:
                return self._ask(tree, child_outputs, automaton=None)
            pinned = self._pinned_tuple(tree.root)
            if pinned is not None:
                word = pinned[0] + "".join(
                    w + u for w, u in zip(child_outputs, pinned[1:])
                )
                self.pending.pop(0)
                self._record(tree, word, inferred=True)
                continue
            memo_key = (
                tree.root,
                self._sol_version.get(tree.root, 0),
                tuple(child_outputs),
            )
            if memo_key in self._inference_memo:
                unique = self._inference_memo[memo_key]
            else:
                possible = substitute_children(sol, child_outputs)
                unique = recognizes_exactly_one(possible)
                self._inference_memo[memo_key] = unique
            if unique is not None:
                self.pending.pop(0)
                self._record(tree, "".join(unique), inferred=True)
                continue
            return self._ask(
                tree, child_outputs, substitute_children(sol, child_outputs)
            )
        return None

    def _pinned_tuple(self, symbol):
        """The symbol's constants once they are uniquely determined; the
        substituted-automaton check is then a plain concatenation."""
        if symbol not in self._pinned:
            word = recognizes_exactly_one(self.sol[symbol])
            self._pinned[symbol] = (
                None
                if word is None
                else split_at_separators(word, self.sol[symbol].var_count)
            )
        return self._pinned[symbol]

    def _ask(self, tree: Tree, child_outputs: list[str], automaton) -> Question:
        hint = make_hint(child_outputs)
        suggestions: list[str] = []
        if automaton is not None:
            cap = self.config.max_suggestions
            words = enumerate_distinct_words(automaton, cap + 1)
            if 2 <= len(words) <= cap:
                suggestions = ["".join(w) for w in words]
            possible = _ConstrainedOutputs(automaton)
        else:
            possible = _UnconstrainedOutputs(tree, self.sample)
        kind = "suggestions" if suggestions else ("hint" if hint else "nothing")
        self.current = Question(tree, tree.text(), hint, suggestions, possible)
        self.asked_kinds[tree] = kind
        return self.current

    def check_consistency(self, tree: Tree, answer: str) -> bool:
        """True iff the answer is a possible output of ``tree`` given every
        output recorded so far."""
        eq = make_reg_equation(tree, answer, self.sample)
        automaton = build_solution_automaton(eq)
        sol = self.sol.get(tree.root)
        if sol is not None:
            automaton = intersect(sol, automaton)
        return not is_empty(automaton)

    def answer_current(self, answer: str):
        """Record the oracle's answer for the current question.

        Raises InconsistentAnswerError when no transducer can print the tree
        this way given earlier outputs.
        """
        if self.current is None:
            raise EngineError("no question is pending")
        tree = self.current.tree
        if not self.check_consistency(tree, answer):
            raise InconsistentAnswerError(
                rejection_message(tree, answer, self.current)
            )
        self.pending.pop(0)
        self.current = None
        self._record(tree, answer, inferred=False)

    def _record(self, tree: Tree, word: str, inferred: bool):
        self.sample.record(tree, word)
        (self.inferred if inferred else self.asked)[tree] = word
        self.equations_by_symbol.setdefault(tree.root, []).append((tree, word))
        key = (tree.root, tuple(self.sample[c] for c in tree.children), word)
        if self._pinned.get(tree.root) is not None or key in self._seen_equations:
            # the solution set cannot shrink: either the constants are
            # already unique, or this exact equation was intersected before
            pass
        else:
            self._seen_equations.add(key)
            automaton = build_solution_automaton(
                make_reg_equation(tree, word, self.sample)
            )
            sol = self.sol.get(tree.root)
            self.sol[tree.root] = (
                automaton if sol is None else intersect(sol, automaton)
            )
            self._pinned.pop(tree.root, None)
            self._sol_version[tree.root] = self._sol_version.get(tree.root, 0) + 1
        if self.config.debug_invariants:
            self._check_sol_invariant(tree.root)

    def _check_sol_invariant(self, symbol):
        from .equations import solution_set

        rebuilt = None
        for tree, word in self.equations_by_symbol[symbol]:
            a = build_solution_automaton(make_reg_equation(tree, word, self.sample))
            rebuilt = a if rebuilt is None else intersect(rebuilt, a)
        if solution_set(rebuilt) != solution_set(self.sol[symbol]):
            raise AssertionError(f"sol({symbol.name}) drifted from its equations")

    def result(self) -> OneSTS:
        if not self.done:
            raise EngineError("learning is not finished")
        tau = learn_from_sample(self.sample, alphabet=self.domain.symbols)
        if tau is None:
            raise InconsistentSampleError("recorded sample became unsatisfiable")
        return tau


class _UnconstrainedOutputs:
    """Possible outputs for a tree whose root has no recorded equation yet:
    any interleaving of arbitrary words with the child outputs.  Never a
    singleton; membership via the equation automaton."""

    def __init__(self, tree: Tree, sample: Sample):
        self.tree = tree
        self.child_words = [sample[c] for c in tree.children]
        self.sample = sample

    def accepts(self, word: str) -> bool:
        eq = make_reg_equation(self.tree, word, self.sample)
        return not is_empty(build_solution_automaton(eq))

    def example_words(self, count: int = 2) -> list[str]:
        base = "".join(self.child_words)
        return [base, base + "bar"][:count]


class _ConstrainedOutputs:
    """Automaton-backed possible outputs with displayable examples."""

    def __init__(self, automaton):
        self.automaton = automaton

    def accepts(self, word: str) -> bool:
        return self.automaton.accepts(word)

    def example_words(self, count: int = 2) -> list[str]:
        return ["".join(w) for w in enumerate_distinct_words(self.automaton, count)]


def rejection_message(tree: Tree, answer: str, question: Question) -> str:
    shown = answer.replace("\n", "\\n")
    examples = question.consistent_examples()
    hint = ",".join(f"'{w}'".replace("\n", "\\n") for w in examples)
    return (
        f"We cannot have the transducer convert {tree.text()}\n"
        f"to {shown}.\n"
        f"Please enter something consistent with what you previously "
        f"entered (e.g. {hint},...)?"
    )


def interactive_learn(domain: Domain, oracle, config: EngineConfig | None = None):
    """Drive the inference loop with an oracle callback.

    Returns (transducer, state); the state carries the sample, the asked and
    inferred maps, and the question-kind breakdown.  A scripted oracle whose
    answer is rejected fails fast: an inconsistent script is a bug.
    """
    state = InferenceState(domain, config or EngineConfig())
    while True:
        question = state.next_question()
        if question is None:
            break
        state.answer_current(oracle(question.tree))
    return state.result(), state


# --- code emission -----------------------------------------------------------


def _scala_string(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
    return f'"{out}"'


def emit_code(tau: OneSTS, asked: Sample | dict, decl: AdtDeclaration) -> str:
    """The recursive printer plus its defining tests.

    One match case per case class with constants interleaved with recursive
    calls (empty constants omitted), followed by an ``ensuring`` block that
    lists every asked input/output pair.
    """
    constants = {sym.name: consts for sym, consts in tau.table}
    lines = ["def print(t: Any): String = t match {"]
    for case in decl.cases:
        consts = constants.get(case.name)
        if consts is None:
            raise EngineError(f"transducer not defined on {case.name}")
        arity = len(case.fields)
        args = ",".join(f"t{i}" for i in range(1, arity + 1))
        parts = []
        if consts[0]:
            parts.append(_scala_string(consts[0]))
        for i in range(1, arity + 1):
            parts.append(f"print(t{i})")
            if consts[i]:
                parts.append(_scala_string(consts[i]))
        body = " + ".join(parts) if parts else '""'
        lines.append(f"  case {case.name}({args}) => {body}")
    lines.append("} // the part below is a contract, not needed to execute the recursive function")
    lines.append("ensuring { (res: String) => res == (t match {")
    entries = asked.items() if hasattr(asked, "items") else asked
    for tree, word in entries:
        lines.append(f"  case {tree.scala_pattern()} => {_scala_string(word)}")
    lines.append("  case _ => res})")
    lines.append("}")
    return "\n".join(lines) + "\n"
