"""Closed-form recovery conditions and error bounds for OMP under perturbations.

Every checker takes a :class:`~omp_perturb.sensing.PerturbedProblem`, measures
the exact quantities the condition depends on (restricted isometry constants by
enumeration, relative perturbations, compressibility ratios) and returns a
:class:`GuaranteeReport`.

Reported thresholds are clamped at zero. A negative threshold, which happens
when the minimum-component SNR condition ``t0 > 3 eps_h`` fails, admits no
nonnegative isometry constant, exactly like a threshold of zero; the raw value
is kept in ``raw_threshold``.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadAlpha,
    BadK,
    BadTau,
    DegenerateBound,
    DeltaTooLarge,
    EpsTooLarge,
    NotStrongDecaying,
    ScenarioMismatch,
)
from .rip import ric_exact
from .sensing import Scenario, relative_bounds
from .signals import is_strong_decaying, k_star, profile

# over-approximates sqrt(1 + delta_k) for delta_k <= 0.5
SQRT_CONSTANT = 1.23


class Theorem(str, enum.Enum):
    T1 = "T1"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    C1 = "C1"
    C1prime = "C1prime"
    C1star = "C1star"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"


@dataclass(frozen=True)
class GuaranteeReport:
    theorem: Theorem
    eps_h: float
    delta_threshold: float
    delta_actual: float
    satisfied: bool
    predicted_error_bound: float
    order_of_recovery_promised: bool
    notes: str
    raw_threshold: float
    delta_k: float
    t0: float


def q_function(u, v):
    """Q(u, v) = (1 - 3v) / (sqrt(u) + 1); negative once v > 1/3."""
    if u < 1:
        raise ValueError(f"Q needs u >= 1, got {u}")
    s = math.sqrt(u) + 1.0
    return 1.0 / s - 3.0 * v / s


def eps_h_t1(eps, eps_b, beta, gamma, norm_x1):
    """Effective perturbation bound when the perturbed matrix is available."""
    if not 0 <= eps < 1:
        raise EpsTooLarge(f"eps must lie in [0, 1), got {eps}")
    return SQRT_CONSTANT / (1.0 - eps) * (eps + eps_b + (1.0 + eps_b) * (beta + gamma)) * norm_x1


def eps_h_t5(eps, eps_b, beta, gamma, norm_x1):
    """Effective perturbation bound when only the ideal matrix is available."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return SQRT_CONSTANT * (
        eps + eps_b + eps * eps_b + (1.0 + eps_b) * (1.0 + eps) * (beta + gamma)
    ) * norm_x1


def strong_decay_tail_bound(alpha, k):
    """Upper bound on beta + gamma for any alpha-strong-decaying signal:
    (1 + sqrt((alpha+1)/(alpha-1)) / sqrt(k)) / sqrt(alpha^(2k) - 1)."""
    if alpha <= 1:
        raise BadAlpha(f"alpha must exceed 1, got {alpha}")
    if k < 1:
        raise BadK(f"k must be at least 1, got {k}")
    lead = 1.0 + math.sqrt((alpha + 1.0) / (alpha - 1.0)) / math.sqrt(k)
    # written with alpha^-k so that large alpha underflows instead of overflowing
    log_a = math.log(alpha)
    return lead * math.exp(-k * log_a) / math.sqrt(-math.expm1(-2 * k * log_a))


def order_function(u, snr_term):
    """G(u) = (1 + u) / (1 - 3u - snr_term), infinite past its pole.

    ``snr_term`` is 2 eps_h / t0.
    """
    den = 1.0 - 3.0 * u - snr_term
    return (1.0 + u) / den if den > 0 else math.inf


def lemma2_bound(delta_k1, norm_xstar, eps_h):
    """Bound on |h(j) - x*(j)| off the current support."""
    if delta_k1 >= 1:
        raise DeltaTooLarge(f"delta must be below 1, got {delta_k1}")
    return (delta_k1 * norm_xstar + eps_h) / (1.0 - delta_k1)


def _error_bound(eps_h, delta_k):
    return eps_h / math.sqrt(1.0 - delta_k) if delta_k < 1 else math.inf


def _deltas(A, k, cap):
    if k + 1 > A.shape[1]:
        raise BadK(f"an order-{k + 1} isometry constant needs at least {k + 1} columns")
    return ric_exact(A, k + 1, cap).delta, ric_exact(A, k, cap).delta


def _report(theorem, eps_h, raw, delta_k1, delta_k, t0, extra_ok=True, notes=(),
            order=False, bound=None):
    notes = list(notes)
    if raw <= 0:
        notes.append(f"threshold {raw:.6g} <= 0: minimum-component SNR t0/eps_h too small")
    threshold = max(raw, 0.0)
    satisfied = bool(delta_k1 < threshold and extra_ok)
    return GuaranteeReport(
        theorem=theorem,
        eps_h=eps_h,
        delta_threshold=threshold,
        delta_actual=delta_k1,
        satisfied=satisfied,
        predicted_error_bound=_error_bound(eps_h, delta_k) if bound is None else bound,
        order_of_recovery_promised=bool(order and satisfied),
        notes="; ".join(notes),
        raw_threshold=raw,
        delta_k=delta_k,
        t0=t0,
    )


def _require(p, allowed):
    if p.scenario not in allowed:
        names = ", ".join(s.value for s in allowed)
        raise ScenarioMismatch(f"scenario {p.scenario.value} not in ({names})")


def _require_sparse(p):
    if np.any(p.x2):
        raise ScenarioMismatch(f"signal is not {p.k}-sparse")


def _require_no_matrix_error(p):
    if np.any(p.E):
        raise ScenarioMismatch("matrix perturbation E must be zero")


def _require_decay(p, alpha):
    if not is_strong_decaying(p.x, alpha):
        raise NotStrongDecaying(f"signal is not {alpha}-strong-decaying")


_AVAILABLE_PERTURBED = (Scenario.N0, Scenario.N1, Scenario.N2)


def check_t1(p, cap=None):
    """Support recovery of the best k-term approximation, perturbed matrix known."""
    _require(p, _AVAILABLE_PERTURBED)
    prof = profile(p.x, p.k)
    rb = relative_bounds(p, cap)
    eps_h = eps_h_t1(rb.eps, rb.eps_b, prof.beta, prof.gamma, prof.norm_x1)
    dk1, dk = _deltas(p.phi_tilde, p.k, cap)
    raw = q_function(p.k, eps_h / prof.t0)
    return _report(Theorem.T1, eps_h, raw, dk1, dk, prof.t0, extra_ok=prof.t0 > 3 * eps_h)


def _decay_eps_h(p, alpha, tail, cap):
    prof = profile(p.x, p.k)
    rb = relative_bounds(p, cap)
    explicit = strong_decay_tail_bound(alpha, p.k)
    if tail == "measured":
        tail_value = prof.beta + prof.gamma
    elif tail == "explicit":
        tail_value = explicit
    else:
        raise ValueError(f"unknown tail mode {tail!r}")
    eps_h = eps_h_t1(rb.eps, rb.eps_b, tail_value, 0.0, prof.norm_x1)
    note = f"tail={tail} beta+gamma<={tail_value:.6g} (explicit bound {explicit:.6g})"
    return prof, eps_h, note


def check_t3(p, alpha, tail="measured", cap=None):
    """Relaxed support-recovery condition for alpha-strong-decaying signals.

    ``tail`` picks the beta + gamma term inside eps_h: "measured" uses the
    signal's own ratios, "explicit" the alpha-only bound
    :func:`strong_decay_tail_bound`, which never undercuts the measured value.
    """
    _require(p, _AVAILABLE_PERTURBED)
    _require_decay(p, alpha)
    prof, eps_h, note = _decay_eps_h(p, alpha, tail, cap)
    dk1, dk = _deltas(p.phi_tilde, p.k, cap)
    ks = k_star(p.k, alpha)
    raw = q_function(ks, eps_h / prof.t0)
    return _report(Theorem.T3, eps_h, raw, dk1, dk, prof.t0, extra_ok=prof.t0 > 3 * eps_h,
                   notes=[note, f"k*={ks:.6g}"])


def check_t4(p, alpha, tail="measured", cap=None):
    """Recovery in order of magnitude for alpha-strong-decaying signals."""
    _require(p, _AVAILABLE_PERTURBED)
    _require_decay(p, alpha)
    prof, eps_h, note = _decay_eps_h(p, alpha, tail, cap)
    dk1, dk = _deltas(p.phi_tilde, p.k, cap)
    snr_term = 2.0 * eps_h / prof.t0
    raw = 1.0 / 3.0 - snr_term / 3.0
    g = order_function(dk1, snr_term)
    alpha_ok = alpha >= max(g, 1.2)
    return _report(Theorem.T4, eps_h, raw, dk1, dk, prof.t0, extra_ok=alpha_ok,
                   notes=[note, f"G(delta)={g:.6g}", f"alpha_ok={alpha_ok}"], order=True)


def check_t5(p, cap=None):
    """Support recovery when measurements come from Phi~ but only Phi is known."""
    _require(p, (Scenario.N2prime,))
    prof = profile(p.x, p.k)
    rb = relative_bounds(p, cap)
    eps_h = eps_h_t5(rb.eps, rb.eps_b, prof.beta, prof.gamma, prof.norm_x1)
    dk1, dk = _deltas(p.phi, p.k, cap)
    raw = q_function(p.k, eps_h / prof.t0)
    return _report(Theorem.T5, eps_h, raw, dk1, dk, prof.t0, extra_ok=prof.t0 > 3 * eps_h)


def _noise_only(p):
    _require(p, (Scenario.N0, Scenario.N1))
    _require_no_matrix_error(p)
    _require_sparse(p)
    return profile(p.x, p.k)


def check_c1(p, cap=None):
    prof = _noise_only(p)
    rb = relative_bounds(p, cap)
    eps_h = SQRT_CONSTANT * rb.eps_b * float(np.linalg.norm(p.x))
    dk1, dk = _deltas(p.phi, p.k, cap)
    raw = q_function(p.k, eps_h / prof.t0)
    return _report(Theorem.C1, eps_h, raw, dk1, dk, prof.t0, extra_ok=prof.t0 > 3 * eps_h)


def check_c1prime(p, tau, cap=None):
    if not 0 < tau < 1:
        raise BadTau(f"tau must lie in (0, 1), got {tau}")
    prof = _noise_only(p)
    norm_b = float(np.linalg.norm(p.b))
    dk1, dk = _deltas(p.phi, p.k, cap)
    raw = (1.0 - tau) / (math.sqrt(p.k) + 1.0)
    noise_ok = norm_b <= tau * prof.t0 / 3.0
    notes = [] if noise_ok else [f"||b||={norm_b:.6g} exceeds tau*t0/3={tau * prof.t0 / 3:.6g}"]
    return _report(Theorem.C1prime, norm_b, raw, dk1, dk, prof.t0, extra_ok=noise_ok, notes=notes)


def check_c1star(p, cap=None):
    prof = _noise_only(p)
    norm_b = float(np.linalg.norm(p.b))
    dk1, dk = _deltas(p.phi, p.k, cap)
    raw = (1.0 - 3.0 * norm_b / prof.t0) / (math.sqrt(p.k) + 1.0)
    return _report(Theorem.C1star, norm_b, raw, dk1, dk, prof.t0)


def check_c2(p, cap=None):
    _require(p, (Scenario.N0,))
    _require_no_matrix_error(p)
    if np.any(p.b):
        raise ScenarioMismatch("noise b must be zero")
    prof = profile(p.x, p.k)
    eps_h = SQRT_CONSTANT * (prof.beta + prof.gamma) * prof.norm_x1
    dk1, dk = _deltas(p.phi, p.k, cap)
    raw = q_function(p.k, eps_h / prof.t0)
    return _report(Theorem.C2, eps_h, raw, dk1, dk, prof.t0, extra_ok=prof.t0 > 3 * eps_h)


def _exact_sparse(p, alpha):
    _require(p, (Scenario.N0,))
    _require_no_matrix_error(p)
    if np.any(p.b):
        raise ScenarioMismatch("noise b must be zero")
    _require_sparse(p)
    _require_decay(p, alpha)
    return profile(p.x, p.k)


def check_c3(p, alpha, cap=None):
    prof = _exact_sparse(p, alpha)
    dk1, dk = _deltas(p.phi, p.k, cap)
    ks = k_star(p.k, alpha)
    raw = 1.0 / (math.sqrt(ks) + 1.0)
    return _report(Theorem.C3, 0.0, raw, dk1, dk, prof.t0, notes=[f"k*={ks:.6g}"])


def check_c4(p, alpha, cap=None):
    prof = _exact_sparse(p, alpha)
    dk1, dk = _deltas(p.phi, p.k, cap)
    g = order_function(dk1, 0.0)
    alpha_ok = alpha > max(g, 1.2)
    return _report(Theorem.C4, 0.0, 1.0 / 3.0, dk1, dk, prof.t0, extra_ok=alpha_ok,
                   notes=[f"G(delta)={g:.6g}", f"alpha_ok={alpha_ok}"], order=True)


# -- comparisons with earlier results ---------------------------------------


@dataclass(frozen=True)
class CoherenceComparison:
    lhs_28: float  # (1 + mu)/(2 mu) - ||b||/(mu t0), the bound k must not exceed
    satisfied_28: bool
    error_ratio_r: float  # sqrt(1 - mu(k-1)) / sqrt(1 - delta_k)


def compare_coherence(mu, k, t0, norm_b, delta_k):
    """Coherence-based noisy recovery condition and the ratio of error bounds
    (isometry-based over coherence-based)."""
    if mu <= 0:
        raise DegenerateBound("coherence must be positive")
    bound = (1.0 + mu) / (2.0 * mu) - norm_b / (mu * t0)
    if mu * (k - 1) >= 1 or delta_k >= 1:
        raise DegenerateBound("mu(k-1) and delta_k must both be below 1")
    r = math.sqrt(1.0 - mu * (k - 1)) / math.sqrt(1.0 - delta_k)
    return CoherenceComparison(lhs_28=bound, satisfied_28=k <= bound, error_ratio_r=r)


@dataclass(frozen=True)
class ErrorBoundComparison:
    bound_r30: float  # squared-error bound for arbitrary signals
    bound_r31_squared_total: float  # 4 (beta+gamma)^2 ||x1||^2
    bound_r36: float  # 16 delta_2k ||x||^2
    tighter: str  # "r30", "r31" or "equal"


def compare_error_bounds_c2(delta_2k, delta_k, beta, gamma, norm_x1, norm_x, k):
    """Squared-error bounds: the delta_2k bound for arbitrary signals against the
    support-recovery bound chain for almost sparse ones (valid for delta_k <= 0.5)."""
    if delta_k > 0.5:
        raise ValueError(f"chain assumes delta_k <= 0.5, got {delta_k}")
    tail = beta * norm_x1
    r30 = 2.0 * norm_x * (tail + 4.0 * delta_2k * (2 + math.ceil(math.log2(k))) * norm_x)
    r31 = 4.0 * (beta + gamma) ** 2 * norm_x1**2
    r36 = 16.0 * delta_2k * norm_x**2
    if delta_2k > (beta + gamma) ** 2 / 4.0:
        assert r31 <= r36 * (1 + 1e-12) or norm_x1 > norm_x
    tighter = "equal" if r30 == r31 else ("r31" if r31 < r30 else "r30")
    return ErrorBoundComparison(bound_r30=r30, bound_r31_squared_total=r31, bound_r36=r36,
                                tighter=tighter)


@dataclass(frozen=True)
class NoiseConditionComparison:
    hz_delta_ok: bool
    hz_noise_ok: bool
    c1prime_exists_tau: bool
    tau_matched: float  # tau equating the two delta thresholds
    noise_ratio_r: float  # (delta_k sqrt(k) t0) / (tau_matched t0 / 3)


def matched_tau(k):
    """tau with 1/(1 + (sqrt6 + 2) sqrt k) = (1 - tau)/(sqrt k + 1)."""
    rk = math.sqrt(k)
    return (math.sqrt(6) + 1.0) * rk / (1.0 + (math.sqrt(6) + 2.0) * rk)


def compare_huangzhu(k, delta_k1, delta_k, t0, norm_b):
    """Noisy-recovery conditions delta_{k+1} < 1/(1 + (sqrt6+2) sqrt k) with
    ||b|| <= delta_k sqrt(k) t0, against the tau-parametrised corollary."""
    rk = math.sqrt(k)
    hz_delta_ok = delta_k1 < 1.0 / (1.0 + (math.sqrt(6) + 2.0) * rk)
    hz_noise_ok = norm_b <= delta_k * rk * t0
    # some tau in (0,1) works iff 3||b||/t0 <= tau < 1 - delta_{k+1}(sqrt k + 1) is nonempty
    upper = 1.0 - delta_k1 * (rk + 1.0)
    exists = upper > 0 and 3.0 * norm_b / t0 < upper
    tau = matched_tau(k)
    ratio = 3.0 / (math.sqrt(6) + 1.0) * (1.0 + (math.sqrt(6) + 2.0) * rk) * delta_k
    return NoiseConditionComparison(
        hz_delta_ok=hz_delta_ok,
        hz_noise_ok=hz_noise_ok,
        c1prime_exists_tau=exists,
        tau_matched=tau,
        noise_ratio_r=ratio,
    )
