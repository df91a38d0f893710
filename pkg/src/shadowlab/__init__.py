"""Exact-arithmetic toolkit for shadow minimization of k-set families."""

from .exact import (
    EMPTY,
    ExactOverflowError,
    Seq,
    binom,
    decompose,
    lex_cmp,
    seq_minus,
    seq_shift,
    seq_value,
)
from .families import (
    BudgetError,
    KFamily,
    are_isomorphic,
    canonical_form,
    colex_rank,
    colex_unrank,
    compact_support,
    degree,
    delete_star,
    initial_segment,
    iterated_shadow,
    join,
    link,
    min_degree_element,
    shadow,
    upper_shadow,
)
from .extremal import (
    CharacterizationReport,
    brute_force_min_shadow,
    certify_by_witness,
    characterize,
    enumerate_extremal,
    is_extremal,
    kk_bound,
    min_degree_bound_check,
    shadow_chain_check,
    uniqueness_predicate,
)
from .identities import (
    BinomialSum,
    Pavement,
    ReductionOutcome,
    Rubble,
    Wall,
    dominates,
    is_invariantly_zero,
    recursive_reduce,
    translate,
    wall_expand,
)
from .inequalities import (
    AbcReport,
    check_abc,
    check_abck,
    conjecture_scan,
    equality_splits,
)
from .constructions import (
    ForbiddenPairSpec,
    PerturbationResult,
    example_32_family,
    example_33_family,
    forbidden_pair_cardinalities,
    forbidden_pair_family,
    perturbed_colex,
    regular_family,
)

__all__ = [
    "EMPTY",
    "AbcReport",
    "BinomialSum",
    "BudgetError",
    "CharacterizationReport",
    "ExactOverflowError",
    "ForbiddenPairSpec",
    "KFamily",
    "Pavement",
    "PerturbationResult",
    "ReductionOutcome",
    "Rubble",
    "Seq",
    "Wall",
    "are_isomorphic",
    "binom",
    "brute_force_min_shadow",
    "canonical_form",
    "certify_by_witness",
    "characterize",
    "check_abc",
    "check_abck",
    "colex_rank",
    "colex_unrank",
    "compact_support",
    "conjecture_scan",
    "decompose",
    "degree",
    "delete_star",
    "dominates",
    "enumerate_extremal",
    "equality_splits",
    "example_32_family",
    "example_33_family",
    "forbidden_pair_cardinalities",
    "forbidden_pair_family",
    "initial_segment",
    "is_extremal",
    "is_invariantly_zero",
    "iterated_shadow",
    "join",
    "kk_bound",
    "lex_cmp",
    "link",
    "min_degree_bound_check",
    "min_degree_element",
    "perturbed_colex",
    "recursive_reduce",
    "regular_family",
    "seq_minus",
    "seq_shift",
    "seq_value",
    "shadow",
    "shadow_chain_check",
    "translate",
    "uniqueness_predicate",
    "upper_shadow",
    "wall_expand",
]
