"""Exact analysis of fuzzy automata over complete residuated lattices:
languages, simulations, bisimulations, degree-lambda relaxations, and a
Hennessy-Milner style formula calculus."""

from .automata import (
    UNBOUNDED,
    FuzzyAutomaton,
    automaton_from_obj,
    automaton_to_obj,
    delta_rel,
    lang_degree,
    lang_degree_from_state,
    max_live_word_length,
    parse_automaton,
    serialize_automaton,
    words_up_to,
)
from .errors import InputError, NonConvergenceError
from .fuzzyrel import (
    FuzzyRelation,
    FuzzySet,
    compose_rel_rel,
    compose_rel_set,
    compose_set_rel,
    compose_set_set,
    converse,
    equality,
    identity_rel,
    is_reflexive,
    is_symmetric,
    is_transitive,
    parse_relation,
    pointwise_leq,
    relation_json_array,
    scalar_meet,
    serialize_relation,
    subsethood,
    union,
)
from .hmlogic import (
    TAU,
    And,
    Formula,
    HMAgreementReport,
    Iff,
    Implies,
    Step,
    Tau,
    constant_pool,
    distinguishing_formula,
    enumerate_formulas,
    eval_formula,
    format_formula,
    hm_agreement,
    hm_degree_bounded,
    parse_formula,
)
from .lattice import (
    GOEDEL,
    LUKASIEWICZ,
    ONE,
    PRODUCT,
    ZERO,
    ResiduatedLattice,
    by_name,
    format_degree,
    inf,
    meet,
    join,
    parse_degree,
    sup,
)
from .simrel import (
    DEFAULT_MAX_ITERS,
    PreservationReport,
    SimReport,
    approx_from_greatest,
    bisim_norm,
    check_crisp_bisimulation,
    check_crisp_simulation,
    check_fuzzy_bisimulation,
    check_fuzzy_simulation,
    check_lambda_approx_bisimulation,
    check_lambda_approx_simulation,
    greatest_fuzzy_bisimulation,
    greatest_fuzzy_simulation,
    max_approx_lambda,
    preservation_to_obj,
    refinement_steps,
    report_from_obj,
    report_to_obj,
    resolve_max_iters,
    sim_norm,
    verify_preservation,
)

__version__ = "0.1.0"
