import itertools
import random

import pytest

from printsynth.adt import (
    Domain,
    DomainError,
    RankedSymbol,
    Transition,
    Tree,
    gen_lower_bound_domain,
    minimal_tree,
)
from printsynth.cfg import Cfg, CfgRule, Nt, language
from printsynth.equations import EquationError
from printsynth.testsets import (
    BOTTOM,
    TestSetError,
    grammar_graph,
    linear_string_test_set,
    linearize,
    minimal_words,
    optimal_paths,
    path_word,
    phi3,
    tree_test_set,
)
from printsynth.transducer import (
    OneSTS,
    default_encode,
    domain_to_grammar,
    morph_of,
    sts_of,
)


def exhaustive_domain_trees(domain, limit=100_000):
    """All trees of a finite domain (raises if it looks infinite)."""
    pools = {q: set() for q in domain.states}
    changed = True
    rounds = 0
    while changed:
        changed = False
        rounds += 1
        if rounds > 60:
            raise RuntimeError("domain does not look finite")
        for tr in domain.transitions:
            for combo in itertools.product(*(pools[q] for q in tr.child_states)):
                t = Tree(tr.symbol, combo)
                if t not in pools[tr.state]:
                    pools[tr.state].add(t)
                    changed = True
                    if len(pools[tr.state]) > limit:
                        raise RuntimeError("domain too large")
    return set().union(*(pools[q] for q in domain.initial))


def test_linearize_identity_on_linear():
    rules = (
        CfgRule("S", (Nt("A"),)),
        CfgRule("A", ("x", Nt("A"), "y")),
        CfgRule("A", ("z",)),
    )
    g = Cfg(("S", "A"), rules, "S")
    assert linearize(g).rules == g.rules


def test_linearize_duplicates_two_nonterminal_rule():
    rules = (
        CfgRule("A", (Nt("B"), Nt("C"))),
        CfgRule("B", ("b",)),
        CfgRule("C", ("c",)),
    )
    g = Cfg(("A", "B", "C"), rules, "A")
    lin = linearize(g)
    rhss = [r.rhs for r in lin.rules if r.lhs == "A"]
    assert rhss == [(Nt("B"), "c"), ("b", Nt("C"))]


def test_linearize_unproductive_rejected():
    g = Cfg(("A",), (CfgRule("A", (Nt("A"),)),), "A")
    with pytest.raises(TestSetError, match="unproductive"):
        linearize(g)


def test_linearize_html_uses_minimal_words(html_domain):
    g = domain_to_grammar(html_domain)
    subs = {f"A_{q}": default_encode(minimal_tree(html_domain, q)) for q in html_domain.states}
    subs["S_G"] = subs["A_Node"]
    lin = linearize(g, subs)
    cons_rules = [
        r for r in lin.rules
        if r.lhs == "A_List" and r.rhs and getattr(r.rhs[0], "symbol", None)
        and r.rhs[0].symbol.name == "cons"
    ]
    # cons has two nonterminals, so two linearized variants
    assert len(cons_rules) == 2
    kept = [tuple(x.name for x in r.rhs if isinstance(x, Nt)) for r in cons_rules]
    assert kept == [("A_Node",), ("A_List",)]
    # the A_List occurrence in the first variant was replaced by (nil,0)
    first = cons_rules[0]
    names = [getattr(x, "symbol", None) and x.symbol.name for x in first.rhs]
    assert "nil" in names


def test_minimal_words_agree_with_minimal_trees(html_domain, grammar_domain, binary_domain):
    for domain in (html_domain, grammar_domain, binary_domain):
        g = domain_to_grammar(domain)
        words = minimal_words(g)
        for q in domain.states:
            assert words[f"A_{q}"] == default_encode(minimal_tree(domain, q))


def test_optimal_paths_basics():
    rules = (
        CfgRule("S", (Nt("A"),)),
        CfgRule("A", ("x", Nt("A"))),
        CfgRule("A", ("y",)),
    )
    g = Cfg(("S", "A"), rules, "S")
    graph = grammar_graph(g)
    table = optimal_paths(graph)
    assert table[("S", "S")] == ()
    assert [e.rule_index for e in table[("S", "A")]] == [0]
    assert [e.rule_index for e in table[("S", BOTTOM)]] == [0, 2]
    assert ("A", "S") not in table


def test_optimal_paths_prefer_smaller_rule_indices():
    rules = (
        CfgRule("S", ("a", Nt("T"))),
        CfgRule("S", ("b", Nt("T"))),
        CfgRule("T", ("t",)),
    )
    g = Cfg(("S", "T"), rules, "S")
    table = optimal_paths(grammar_graph(g))
    assert [e.rule_index for e in table[("S", BOTTOM)]] == [0, 2]


def test_grammar_graph_requires_linear():
    g = Cfg(
        ("A",),
        (CfgRule("A", (Nt("A"), Nt("A"))), CfgRule("A", ("x",))),
        "A",
    )
    with pytest.raises(TestSetError, match="linear"):
        grammar_graph(g)


def test_phi3_single_word_grammar():
    g = Cfg(("S",), (CfgRule("S", ("o", "n", "e")),), "S")
    assert phi3(g) == {("o", "n", "e")}


def test_phi3_within_language_and_bound():
    rules = (
        CfgRule("S", (Nt("A"),)),
        CfgRule("A", ("x", Nt("A"), "y")),
        CfgRule("A", ("z",)),
    )
    g = Cfg(("S", "A"), rules, "S")
    words = phi3(g)
    lang = language(g, max_len=20)
    assert words <= lang
    assert len(words) <= 2 * len(g.rules) ** 3


def test_phi3_binary_is_whole_language_up_to_height_three(binary_domain):
    g = domain_to_grammar(binary_domain)
    subs = {
        f"A_{q}": default_encode(minimal_tree(binary_domain, q))
        for q in binary_domain.states
    }
    subs[g.start] = subs["A_Number"]
    words = phi3(linearize(g, subs))
    assert len(words) == 15


def test_tree_test_set_binary_benchmark(binary_domain):
    trees = tree_test_set(binary_domain)
    assert len(trees) == 15
    # towers of Zero/One of height <= 3 over Empty
    names = {t.text() for t in trees}
    assert "Empty" in names and "Zero(One(Empty))" in names


def test_tree_test_set_lower_bound_counts_small():
    for n, expected in [(1, 3), (2, 14), (4, 84), (8, 584)]:
        domain = gen_lower_bound_domain(n)
        trees = tree_test_set(domain)
        assert len(trees) == expected
        assert len(exhaustive_domain_trees(domain)) == n**3 + n**2 + n
        assert set(trees) == exhaustive_domain_trees(domain)


def test_tree_test_set_closed_under_subtree(html_domain, grammar_domain):
    for domain in (html_domain, grammar_domain):
        trees = set(tree_test_set(domain))
        for t in trees:
            for sub in t.subtrees():
                assert sub in trees


def test_tree_test_set_requires_all_initial(html_domain):
    partial = Domain(
        html_domain.symbols,
        html_domain.states,
        ("Node",),
        html_domain.transitions,
    )
    with pytest.raises(DomainError, match="I = Q"):
        tree_test_set(partial)


def test_tree_test_set_within_domain(html_domain):
    for t in tree_test_set(html_domain):
        assert html_domain.accepts(t)


def test_tree_test_set_sizes_in_benchmark_ranges(html_domain, grammar_domain):
    html_size = len(tree_test_set(html_domain))
    grammar_size = len(tree_test_set(grammar_domain))
    assert 25 <= html_size <= 50
    assert 80 <= grammar_size <= 180


def test_tree_test_set_deterministic(html_domain):
    assert tree_test_set(html_domain) == tree_test_set(html_domain)


def random_morphism(rng, domain, alphabet="pq", max_len=2):
    from printsynth.transducer import AnnotatedLetter

    mu = {}
    for sym in domain.symbols:
        for i in range(sym.arity + 1):
            n = rng.randint(0, max_len)
            mu[AnnotatedLetter(sym, i)] = "".join(
                rng.choice(alphabet) for _ in range(n)
            )
    return mu


def test_soundness_spot_check_d2_with_swapped_pair():
    """The classic ambiguity: two transducers that differ by rotating one
    symbol's constants must disagree somewhere on the test set."""
    domain = gen_lower_bound_domain(2)
    trees = tree_test_set(domain)
    rng = random.Random(5)
    for _ in range(200):
        mu1 = random_morphism(rng, domain)
        mu2 = dict(mu1)
        sym = rng.choice(domain.symbols)
        from printsynth.transducer import AnnotatedLetter

        if sym.arity == 1:
            a, b = AnnotatedLetter(sym, 0), AnnotatedLetter(sym, 1)
            mu2[a], mu2[b] = mu1[b], mu1[a]
        tau1, tau2 = sts_of(mu1), sts_of(mu2)
        agree_on_testset = all(tau1(t) == tau2(t) for t in trees)
        agree_on_domain = all(
            tau1(t) == tau2(t) for t in exhaustive_domain_trees(domain)
        )
        assert agree_on_testset == agree_on_domain or agree_on_domain


def test_linear_string_test_set_counts():
    leaf = RankedSymbol("v", 0, is_string_leaf=True)
    f = RankedSymbol("f", 2)
    g = RankedSymbol("g", 0)
    domain = Domain(
        (f, g, leaf),
        ("F", "S"),
        ("F", "S"),
        (
            Transition(f, "F", ("S", "S")),
            Transition(g, "F", ()),
            Transition(leaf, "S", ()),
        ),
    )
    trees = linear_string_test_set(domain)
    # f: default + 2 flips; g: default; v: default
    assert len(trees) == 5
    texts = [t.text() for t in trees]
    assert 'f(v("#"),v("#"))' in texts
    assert 'f(v("?"),v("#"))' in texts
    assert 'f(v("#"),v("?"))' in texts
    assert len(trees) <= 2 * len(domain.symbols) * 2


def test_linear_string_test_set_distinguishes_constants():
    """Two transducers equal on the linear test set have identical
    constants (checked exhaustively for short constants)."""
    leaf = RankedSymbol("v", 0, is_string_leaf=True)
    f = RankedSymbol("f", 2)
    domain = Domain(
        (f, leaf),
        ("F", "S"),
        ("F", "S"),
        (Transition(f, "F", ("S", "S")), Transition(leaf, "S", ())),
    )
    trees = linear_string_test_set(domain)
    options = ["", "p", "q"]
    tables = [
        OneSTS.from_dict({f: (a, b, c)})
        for a in options for b in options for c in options
    ]
    for t1 in tables:
        for t2 in tables:
            if all(t1(t) == t2(t) for t in trees):
                assert t1.constants[f] == t2.constants[f]


def test_linear_string_test_set_hypothesis_violation():
    leaf = RankedSymbol("v", 0, is_string_leaf=True)
    f = RankedSymbol("f", 1)
    g = RankedSymbol("g", 0)
    domain = Domain(
        (f, g, leaf),
        ("F", "G"),
        ("F", "G"),
        (Transition(f, "F", ("G",)), Transition(g, "G", ()), Transition(leaf, "F", ())),
    )
    # f's argument is G, which contains no string leaf
    with pytest.raises(TestSetError, match="argument 1 of f"):
        linear_string_test_set(domain)


def test_nullary_only_string_alphabet():
    leaf = RankedSymbol("v", 0, is_string_leaf=True)
    g = RankedSymbol("g", 0)
    domain = Domain(
        (g, leaf),
        ("S",),
        ("S",),
        (Transition(g, "S", ()), Transition(leaf, "S", ())),
    )
    trees = linear_string_test_set(domain)
    assert [t.text() for t in trees] == ["g", 'v("#")']
