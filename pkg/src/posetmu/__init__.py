"""Exact Moebius function computations for the permutation pattern poset."""

from .embeddings import (
    EtaHat,
    build_A_poset,
    count_normal,
    eta_hat,
    ez_sign_sum,
    format_embedding,
    is_normal,
    pi_hat,
    rightmost_reps,
)
from .engine import (
    MobiusReport,
    conjecture_gen_repeat,
    ez_sum_closed_consecutive,
    ez_sum_closed_power,
    interval_elements,
    interval_poset,
    is_single,
    mobius,
    mobius_formula,
    mobius_recursive,
    mobius_single,
)
from .errors import CapExceeded
from .kernels import BACKEND
from .perm import (
    EmbeddingMask,
    Permutation,
    PermutationError,
    adjacencies,
    contains,
    direct_sum,
    embeddings_of,
    from_word,
    parse_permutation,
    skew_sum,
    tail_statistics,
)
from .poset import (
    FinitePoset,
    PosetMap,
    fibration_mobius_check,
    mobius_of,
    mobius_truncated_boolean,
    reduced_euler_characteristic,
    truncated_boolean,
)

__version__ = "0.1.0"
