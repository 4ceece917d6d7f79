"""Orthogonal Matching Pursuit under perturbed measurements and sensing matrices."""
from .counterexample import CounterexampleInstance, build, delta_closed_form, verify_failure
from .counterexample import tight_error_instance
from .errors import *  # noqa: F401,F403
from .guarantees import (
    GuaranteeReport,
    Theorem,
    check_c1,
    check_c1prime,
    check_c1star,
    check_c2,
    check_c3,
    check_c4,
    check_t1,
    check_t3,
    check_t4,
    check_t5,
)
from .linalg import least_squares_on_support, orthogonal_projector, spectral_norm
from .linalg import symmetric_eigenvalues
from .omp import OmpTrace, omp_run
from .rip import RipReport, coherence, ric_exact, ric_lower_bound
from .sensing import PerturbedProblem, Scenario, assemble, make_problem, relative_bounds
from .signals import SignalProfile, best_k_approx, gen_strong_decaying, k_star, profile

__version__ = "0.1.0"
