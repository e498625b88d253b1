"""Hilbert functions, Lefschetz properties and Betti tables of Perazzo algebras."""
from .linalg import DEFAULT_FIELD, DEFAULT_PRIME, ExactMatrix, Field, kernel_basis, rank, rref
from .poly import Polynomial, VarLayout, apply_operator, coeff_matrix, partials
from .forms import (
    Canonical,
    IndependenceLost,
    PerazzoError,
    PerazzoForm,
    PreconditionError,
    RetryExhausted,
    assemble,
    contract_linear,
    gen_canonical,
    gen_general,
    gen_min,
    gen_mixed,
    validate,
)
from .hilbert import (
    HVector,
    extremes,
    extremes_coincide,
    h_max,
    h_min,
    hilbert_function,
    predict_hmax_unimodal,
    predict_hmin_unimodal,
)
from .algebra import AlgebraModel, build_model, check_exact_sequence, mult_map, quotient_h
from .lefschetz import LefschetzVerdict, hessian_vanishes, minimal_wlp_check, slp, thm_wlp_p4_predicate, wlp
from .resolution import BettiTable, betti, check_tor_vanishing, expected_betti_min_p4, render_m2

__version__ = "0.1.0"
