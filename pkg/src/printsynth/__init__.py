"""Interactive synthesis of recursive tree-to-string printers for ADTs."""

from .adt import (
    AdtDeclaration,
    AdtParseError,
    Domain,
    DomainError,
    RankedSymbol,
    Transition,
    Tree,
    desugar_primitives,
    domain_of,
    enumerate_trees,
    gen_lower_bound_domain,
    minimal_tree,
    parse_adt,
    standin_sample,
)
from .cfg import Cfg, CfgRule, Nt
from .engine import (
    EngineConfig,
    InferenceState,
    Question,
    Sample,
    emit_code,
    interactive_learn,
    learn_from_domain,
    learn_from_sample,
    make_hint,
)
from .equations import (
    SEP,
    SequentialFormula,
    Var,
    WordEquation,
    brute_force_solve,
    build_solution_automaton,
    enumerate_distinct_words,
    intersect,
    is_empty,
    make_equation,
    make_reg_equation,
    recognizes_exactly_one,
    shortest_word,
    solve,
)
from .testsets import linear_string_test_set, linearize, optimal_paths, phi3, tree_test_set
from .transducer import (
    AnnotatedLetter,
    OneSTS,
    decode_tree,
    default_encode,
    domain_to_grammar,
    morph_of,
    sts_of,
)

__all__ = [name for name in dir() if not name.startswith("_")]
