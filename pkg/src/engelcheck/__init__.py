"""Exact computations around global nilpotence of n-Engel Lie algebras in characteristic zero."""

from .config import DEFAULT_CAPS, Caps, PreconditionError, ResourceError
from .lie import (
    BasisMonomial,
    Gen,
    LieElement,
    Multiweight,
    bracket,
    component,
    left_normed,
    lyndon_basis,
    parse_element,
)
from .identities import (
    ConsequenceEngine,
    Identity,
    consequence_space,
    engel_identity,
    expand_relation_one,
    is_consequence,
    polarize,
    substitution_instances,
)
from .symgroup import (
    GroupAlgebraElement,
    Permutation,
    YoungDiagram,
    YoungTableau,
    act,
    apply_algebra_element,
    decompose_identity,
    essential_scalar,
    young_symmetrizer,
)
from .grading import (
    GradingAssignment,
    adjan_razborov_F,
    adjan_razborov_N,
    derived_series_in_quotient,
    higgins_bound,
    lemma1_bound,
    parity,
    parity_class,
    verify_lemma1_collection,
)
from .harness import (
    SymmetrizedSumSpec,
    build_symmetrized_sum,
    check_tau_swap,
    endomorphism_theta,
    verify_eq1_implies_vanishing,
)

__version__ = "0.1.0"
