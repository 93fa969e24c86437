"""Sequential word equations and their polynomial-time solver.

An equation has a constant right-hand side and a left-hand side in which
every variable occurs at most once.  All assignments satisfying one equation
are packed into a layered acyclic DFA over the output alphabet plus an
out-of-band separator: the automaton accepts exactly the words
``x0 SEP x1 SEP ... SEP xk`` where substituting the ``xi`` makes the
equation true.  A conjunction whose equations share the same variable
sequence is solved by intersecting the per-equation automata; the product
never grows past the smaller operand, which is asserted on every call.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from functools import cached_property


class EquationError(Exception):
    pass


class NonSequentialError(EquationError):
    pass


class ClosureError(EquationError):
    pass


class _Separator:
    __slots__ = ()

    def __repr__(self):
        return "#"


SEP = _Separator()


def _label_key(label):
    """Fixed total order on labels: separator first, then character order."""
    return (0, "") if label is SEP else (1, label)


@dataclass(frozen=True)
class Var:
    key: object

    def __repr__(self):
        return f"${self.key}"


@dataclass(frozen=True)
class WordEquation:
    """lhs: tuple of Var and constant-string chunks; rhs: constant word.

    A variable may repeat in the lhs (general word equations are
    representable, and the brute-force oracle solves them); the polynomial
    solver additionally requires each variable to occur at most once.
    """

    lhs: tuple
    rhs: str

    def __post_init__(self):
        for item in self.lhs:
            if not isinstance(item, (Var, str)):
                raise EquationError(f"lhs item {item!r} is neither Var nor str")

    @cached_property
    def variables(self) -> tuple[Var, ...]:
        return tuple(x for x in self.lhs if isinstance(x, Var))

    @property
    def is_linear(self) -> bool:
        return len(set(self.variables)) == len(self.variables)

    @cached_property
    def segments(self) -> tuple[str, ...]:
        """Constant words around the variables: prefix, k-1 gaps, suffix."""
        segs = [""]
        for item in self.lhs:
            if isinstance(item, Var):
                segs.append("")
            else:
                segs[-1] += item
        return tuple(segs)

    def substitute(self, assignment: dict) -> str:
        return "".join(
            assignment[x.key] if isinstance(x, Var) else x for x in self.lhs
        )


@dataclass
class SequentialFormula:
    equations: list[WordEquation] = field(default_factory=list)

    def validate(self):
        """Check the sequential conditions; raise naming the violation."""
        seq_of: dict[Var, tuple] = {}
        for eq in self.equations:
            if not eq.is_linear:
                raise NonSequentialError(
                    f"a variable occurs twice in the lhs of {eq}"
                )
            seq = eq.variables
            for v in seq:
                if v in seq_of and seq_of[v] != seq:
                    raise NonSequentialError(
                        f"equations sharing {v} have different variable sequences"
                    )
            for v in seq:
                seq_of[v] = seq

    def groups(self) -> dict[tuple, list[WordEquation]]:
        self.validate()
        out: dict[tuple, list[WordEquation]] = {}
        for eq in self.equations:
            out.setdefault(eq.variables, []).append(eq)
        return out


def make_equation(tree, word: str) -> WordEquation:
    """Encoded tree as variables on the left, the output word on the right."""
    from .transducer import default_encode

    return WordEquation(tuple(Var(l) for l in default_encode(tree)), word)


def make_reg_equation(tree, word: str, sample) -> WordEquation:
    """(f,0) S(t1) (f,1) ... S(tk) (f,k) = word, child outputs inlined.

    ``sample`` maps trees to output words and must contain every direct
    subtree of ``tree``.
    """
    from .transducer import AnnotatedLetter

    outputs = sample.entries if hasattr(sample, "entries") else sample
    lhs: list = [Var(AnnotatedLetter(tree.root, 0))]
    for i, child in enumerate(tree.children, start=1):
        if child not in outputs:
            raise ClosureError(
                f"sample not closed under subtree: missing output for {child.text()}"
            )
        if outputs[child]:
            lhs.append(outputs[child])
        lhs.append(Var(AnnotatedLetter(tree.root, i)))
    return WordEquation(tuple(lhs), word)


# --- solution automata -------------------------------------------------------


@dataclass
class SolutionAutomaton:
    """Layered acyclic DFA; states of a freshly built automaton are pairs
    (variable layer, matched rhs length).  Intersections keep the first
    operand's state labels.
    """

    var_count: int
    init: object  # None encodes the empty automaton
    transitions: dict  # state -> {label: state}
    accepting: frozenset

    @cached_property
    def reachable(self) -> frozenset:
        if self.init is None:
            return frozenset()
        seen = {self.init}
        stack = [self.init]
        while stack:
            s = stack.pop()
            for t in self.transitions.get(s, {}).values():
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    @property
    def state_count(self) -> int:
        return len(self.reachable)

    def trimmed(self) -> "SolutionAutomaton":
        """Drop states that cannot reach an accepting state."""
        if self.init is None:
            return self
        reverse: dict = {}
        for s, edges in self.transitions.items():
            for t in edges.values():
                reverse.setdefault(t, []).append(s)
        alive = set(self.accepting & self.reachable)
        stack = list(alive)
        while stack:
            s = stack.pop()
            for p in reverse.get(s, []):
                if p not in alive:
                    alive.add(p)
                    stack.append(p)
        if self.init not in alive:
            return SolutionAutomaton(self.var_count, None, {}, frozenset())
        trans = {
            s: {l: t for l, t in edges.items() if t in alive}
            for s, edges in self.transitions.items()
            if s in alive
        }
        return SolutionAutomaton(
            self.var_count, self.init, trans, frozenset(self.accepting & alive)
        )

    # uniform automaton interface used by the word-search helpers
    def start_set(self) -> frozenset:
        return frozenset() if self.init is None else frozenset([self.init])

    def step_set(self, states: frozenset, label) -> frozenset:
        out = set()
        for s in states:
            t = self.transitions.get(s, {}).get(label)
            if t is not None:
                out.add(t)
        return frozenset(out)

    def labels_from(self, states: frozenset) -> set:
        out = set()
        for s in states:
            out.update(self.transitions.get(s, {}).keys())
        return out

    def accepts_set(self, states: frozenset) -> bool:
        return any(s in self.accepting for s in states)


def build_solution_automaton(eq: WordEquation) -> SolutionAutomaton:
    """Automaton of all variable assignments satisfying one equation.

    State (a, b): currently filling variable a, having matched b letters of
    the rhs.  Reading a character extends the current variable; reading the
    separator commits the constant between variable a and a+1.  At most
    (k+1) * (|rhs|+1) states; unsatisfiable equations come out with an empty
    language rather than an error.
    """
    variables = eq.variables
    k1 = len(variables)
    if k1 == 0:
        raise EquationError("equation has no variables")
    if not eq.is_linear:
        raise NonSequentialError(f"a variable occurs twice in the lhs of {eq}")
    segs = eq.segments  # prefix, gaps between variables, suffix
    prefix, gaps, suffix = segs[0], segs[1:-1], segs[-1]
    rhs = eq.rhs

    empty = SolutionAutomaton(k1, None, {}, frozenset())
    if not rhs.startswith(prefix) or not rhs.endswith(suffix):
        return empty
    if len(prefix) + len(suffix) > len(rhs):
        return empty

    init = (0, len(prefix))
    final = (k1 - 1, len(rhs) - len(suffix))
    transitions: dict = {}
    stack = [init]
    seen = {init}
    while stack:
        a, b = stack.pop()
        edges: dict = {}
        if b < len(rhs):
            edges[rhs[b]] = (a, b + 1)
        if a < k1 - 1:
            gap = gaps[a]
            if rhs[b:b + len(gap)] == gap:
                edges[SEP] = (a + 1, b + len(gap))
        transitions[(a, b)] = edges
        for t in edges.values():
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return SolutionAutomaton(k1, init, transitions, frozenset([final])).trimmed()


def intersect(a: SolutionAutomaton, b: SolutionAutomaton) -> SolutionAutomaton:
    """Language intersection as a reachable product.

    Every reachable product state pairs a state of ``a`` with at most one
    state of ``b``, so the result is ``a`` with transitions erased; the
    reachable-size bound <= min(|a|, |b|) is checked on every invocation.
    """
    if a.var_count != b.var_count:
        raise EquationError(
            f"variable count mismatch: {a.var_count} vs {b.var_count}"
        )
    if a.init is None or b.init is None:
        return SolutionAutomaton(a.var_count, None, {}, frozenset())

    init = (a.init, b.init)
    transitions: dict = {}
    accepting = set()
    partner: dict = {init[0]: init[1]}
    stack = [init]
    seen = {init}
    while stack:
        p, q = stack.pop()
        pa, qb = a.transitions.get(p, {}), b.transitions.get(q, {})
        edges: dict = {}
        for label, pt in pa.items():
            qt = qb.get(label)
            if qt is None:
                continue
            edges[label] = (pt, qt)
            if (pt, qt) not in seen:
                seen.add((pt, qt))
                stack.append((pt, qt))
        transitions[(p, q)] = edges
        if p in a.accepting and q in b.accepting:
            accepting.add((p, q))
        prev = partner.setdefault(p, q)
        if prev != q:
            raise AssertionError(
                "intersection invariant violated: one state paired twice"
            )

    if len(seen) > min(a.state_count, b.state_count):
        raise AssertionError(
            f"intersection grew past min operand: {len(seen)} > "
            f"min({a.state_count}, {b.state_count})"
        )

    # project product states onto the first operand (injective on reachables)
    proj_trans = {
        p: {l: t[0] for l, t in edges.items()} for (p, _), edges in transitions.items()
    }
    result = SolutionAutomaton(
        a.var_count, a.init, proj_trans, frozenset(p for p, _ in accepting)
    )
    return result.trimmed()


# --- word search over automata ----------------------------------------------


def _shortest_from(automaton) -> tuple | None:
    """Minimal accepted word: shortest first, lexicographic on the fixed
    label order as a tie-break.  Uniform-cost search over determinized state
    sets; works on any automaton exposing the start_set/step_set/
    labels_from/accepts_set interface."""
    start = automaton.start_set()
    if not start:
        return None
    counter = itertools.count()
    heap = [((0, ()), next(counter), (), start)]
    settled = set()
    while heap:
        (_, _), _, word, states = heapq.heappop(heap)
        if states in settled:
            continue
        settled.add(states)
        if automaton.accepts_set(states):
            return word
        for label in sorted(automaton.labels_from(states), key=_label_key):
            nxt = automaton.step_set(states, label)
            if not nxt or nxt in settled:
                continue
            key = (len(word) + 1, tuple(map(_label_key, word)) + (_label_key(label),))
            heapq.heappush(heap, (key, next(counter), word + (label,), nxt))
    return None


def is_empty(a) -> bool:
    return _shortest_from(a) is None


def shortest_word(a) -> tuple | None:
    """Minimal-length accepted word, ties broken on the fixed label order."""
    return _shortest_from(a)


class _Excluding:
    """View of an automaton with a finite set of words removed, via the
    product with the complement of a word trie (the trie is total: missing
    edges fall into an accepting sink)."""

    SINK = ("sink",)

    def __init__(self, inner, words):
        self.inner = inner
        self.trie: dict[tuple, dict] = {(): {}}
        self.word_ends = set()
        for w in words:
            node: tuple = ()
            for label in w:
                nxt = node + (_label_key(label),)
                self.trie.setdefault(node, {})[_label_key(label)] = nxt
                self.trie.setdefault(nxt, {})
                node = nxt
            self.word_ends.add(node)

    # composite search state: (inner state set, trie node); the trie is
    # deterministic, so one node suffices for the whole inner set
    def start_set(self):
        inner = self.inner.start_set()
        return (inner, ()) if inner else frozenset()

    def step_set(self, states, label):
        inner, node = states
        nxt_inner = self.inner.step_set(inner, label)
        if not nxt_inner:
            return frozenset()
        if node is self.SINK:
            nxt_node = self.SINK
        else:
            nxt_node = self.trie.get(node, {}).get(_label_key(label), self.SINK)
        return (nxt_inner, nxt_node)

    def labels_from(self, states):
        inner, _ = states
        return self.inner.labels_from(inner)

    def accepts_set(self, states):
        inner, node = states
        if node is not self.SINK and node in self.word_ends:
            return False
        return self.inner.accepts_set(inner)


def exclude_words(a, words) -> _Excluding:
    return _Excluding(a, [tuple(w) for w in words])


def recognizes_exactly_one(a) -> tuple | None:
    """The single accepted word, if the language is a singleton.

    Finds a shortest word, removes it, and checks the remainder for
    emptiness.
    """
    w = shortest_word(a)
    if w is None:
        return None
    return w if is_empty(exclude_words(a, [w])) else None


def enumerate_distinct_words(a, k: int) -> list[tuple]:
    """Up to ``k`` distinct accepted words by repeated exclusion, in
    (length, label order) ranking; stops early when the remainder empties."""
    words: list[tuple] = []
    while len(words) < k:
        w = shortest_word(exclude_words(a, words)) if words else shortest_word(a)
        if w is None:
            break
        words.append(w)
    return words


def split_at_separators(word: tuple, var_count: int) -> tuple[str, ...]:
    parts: list[str] = [""]
    for label in word:
        if label is SEP:
            parts.append("")
        else:
            parts[-1] += label
    if len(parts) != var_count:
        raise EquationError(
            f"expected {var_count - 1} separators, found {len(parts) - 1}"
        )
    return tuple(parts)


def language(a, limit: int = 1_000_000) -> set[tuple]:
    """All accepted words of an acyclic automaton (test-scale helper)."""
    out: set[tuple] = set()
    start = a.start_set()
    if not start:
        return out
    stack = [(start, ())]
    while stack:
        states, word = stack.pop()
        if a.accepts_set(states):
            out.add(word)
            if len(out) > limit:
                raise RuntimeError("language enumeration exceeded limit")
        for label in a.labels_from(states):
            nxt = a.step_set(states, label)
            if nxt:
                stack.append((nxt, word + (label,)))
    return out


def solution_set(a: SolutionAutomaton) -> set[tuple[str, ...]]:
    """All satisfying variable tuples of a solution automaton."""
    return {split_at_separators(w, a.var_count) for w in language(a)}


# --- the solver ---------------------------------------------------------------


def solve(formula: SequentialFormula) -> dict | None:
    """Satisfying assignment for a sequential formula, or None.

    Equations are grouped by variable sequence; each group's automata are
    intersected in insertion order; the assignment is read off the minimal
    accepted word of each intersection and checked by substitution before
    being returned.
    """
    assignment: dict = {}
    for variables, eqs in formula.groups().items():
        if not variables:
            for eq in eqs:
                if eq.segments[0] != eq.rhs:
                    return None
            continue
        combined: SolutionAutomaton | None = None
        for eq in eqs:
            automaton = build_solution_automaton(eq)
            combined = automaton if combined is None else intersect(combined, automaton)
            if combined.init is None:
                return None
        word = shortest_word(combined)
        if word is None:
            return None
        values = split_at_separators(word, combined.var_count)
        for var, value in zip(variables, values):
            assignment[var.key] = value
    for eq in formula.equations:
        if eq.substitute(assignment) != eq.rhs:
            raise AssertionError(f"solver returned a non-solution for {eq}")
    return assignment


def brute_force_solve(
    formula: SequentialFormula, max_len: int, guard: int = 10_000_000
) -> set[tuple]:
    """Exhaustive assignment search (independent test oracle).

    Returns the set of satisfying assignments as tuples of (var key, value)
    pairs sorted by repr, with every value of length <= ``max_len``.
    """
    variables: list[Var] = []
    for eq in formula.equations:
        for v in eq.variables:
            if v not in variables:
                variables.append(v)
    alphabet = sorted({ch for eq in formula.equations for ch in eq.rhs})
    candidates = [""]
    for length in range(1, max_len + 1):
        candidates.extend(
            "".join(p) for p in itertools.product(alphabet, repeat=length)
        )
    if len(candidates) ** max(len(variables), 1) > guard:
        raise EquationError("brute-force search space exceeds guard")
    solutions: set[tuple] = set()
    for combo in itertools.product(candidates, repeat=len(variables)):
        assignment = {v.key: w for v, w in zip(variables, combo)}
        if all(eq.substitute(assignment) == eq.rhs for eq in formula.equations):
            solutions.add(tuple(sorted(assignment.items(), key=lambda kv: repr(kv[0]))))
    return solutions


# --- child-substituted automata (inference view) ------------------------------


class SubstitutedAutomaton:
    """All possible outputs for a tree given the solution automaton of its
    root symbol: separator edges are replaced by the recorded child outputs.

    Replacing a separator by a possibly-empty word makes the result an NFA
    with silent moves, handled here by on-the-fly closure.
    """

    def __init__(self, sol: SolutionAutomaton, child_words: list[str]):
        if len(child_words) != sol.var_count - 1:
            raise EquationError(
                f"expected {sol.var_count - 1} child outputs, got {len(child_words)}"
            )
        self.sol = sol
        self.child_words = child_words
        # state: (sol_state, layer, chain_pos); chain_pos marks progress
        # through the child word spliced over a separator edge
        self.trans: dict = {}
        self.eps: dict = {}
        self.accepting = set()
        if sol.init is None:
            self.inits = frozenset()
            return
        layer_of: dict = {sol.init: 0}
        order = [sol.init]
        seen = {sol.init}
        i = 0
        while i < len(order):
            s = order[i]
            i += 1
            for label, t in sol.transitions.get(s, {}).items():
                nl = layer_of[s] + (1 if label is SEP else 0)
                if t not in seen:
                    seen.add(t)
                    layer_of[t] = nl
                    order.append(t)
        for s in seen:
            base = (s, None, 0)
            self.trans.setdefault(base, {})
            for label, t in sol.transitions.get(s, {}).items():
                if label is not SEP:
                    self.trans[base].setdefault(label, set()).add((t, None, 0))
                    continue
                word = child_words[layer_of[s]]
                if not word:
                    self.eps.setdefault(base, set()).add((t, None, 0))
                    continue
                node = base
                for j, ch in enumerate(word):
                    nxt = (t, None, 0) if j == len(word) - 1 else (s, layer_of[s], j + 1)
                    self.trans.setdefault(node, {}).setdefault(ch, set()).add(nxt)
                    node = nxt
            if s in sol.accepting:
                self.accepting.add((s, None, 0))
        self.inits = self._closure(frozenset([(sol.init, None, 0)]))

    def _closure(self, states: frozenset) -> frozenset:
        out = set(states)
        stack = list(states)
        while stack:
            s = stack.pop()
            for t in self.eps.get(s, ()):
                if t not in out:
                    out.add(t)
                    stack.append(t)
        return frozenset(out)

    def start_set(self):
        return self.inits

    def step_set(self, states, label):
        out = set()
        for s in states:
            out.update(self.trans.get(s, {}).get(label, ()))
        return self._closure(frozenset(out)) if out else frozenset()

    def labels_from(self, states):
        out = set()
        for s in states:
            out.update(self.trans.get(s, {}).keys())
        return out

    def accepts_set(self, states):
        return any(s in self.accepting for s in states)

    def accepts(self, word: str) -> bool:
        states = self.start_set()
        for ch in word:
            states = self.step_set(states, ch)
            if not states:
                return False
        return self.accepts_set(states)


def substitute_children(sol: SolutionAutomaton, child_words: list[str]) -> SubstitutedAutomaton:
    return SubstitutedAutomaton(sol, child_words)
