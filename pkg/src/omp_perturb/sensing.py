"""Sensing matrices, perturbation models and the four recovery scenarios.

Scenarios
---------
N0       y = Phi x, recover with Phi
N1       y~ = Phi x + b, recover with Phi
N2       y~ = Phi x + b, recover with Phi~ = Phi + E
N2prime  y~ = Phi~ x + b, recover with the ideal Phi

N1 and N0 are carried as N2 instances with E = 0 (and b = 0 for N0), so a single
assembly path serves all of them.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadK, DimensionMismatch, ZeroDenominator
from .linalg import (
    as_matrix,
    as_vector,
    check_enumeration,
    gram_subset_eigenvalues,
    subset_batches,
)
from .signals import best_k_approx


class Scenario(str, enum.Enum):
    N0 = "N0"
    N1 = "N1"
    N2 = "N2"
    N2prime = "N2prime"


@dataclass(frozen=True, eq=False)
class PerturbedProblem:
    phi: np.ndarray
    E: np.ndarray
    b: np.ndarray
    x: np.ndarray
    scenario: Scenario
    k: int

    def __post_init__(self):
        phi = as_matrix(self.phi)
        E = as_matrix(self.E)
        b = as_vector(self.b)
        x = as_vector(self.x)
        if E.shape != phi.shape:
            raise DimensionMismatch(f"E has shape {E.shape}, Phi has {phi.shape}")
        if b.size != phi.shape[0] or x.size != phi.shape[1]:
            raise DimensionMismatch(
                f"b has length {b.size} and x length {x.size} for Phi of shape {phi.shape}"
            )
        if not 1 <= self.k <= phi.shape[1]:
            raise BadK(f"k={self.k} outside 1..{phi.shape[1]}")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "scenario", Scenario(self.scenario))

    @property
    def phi_tilde(self):
        return self.phi + self.E

    @property
    def x1(self):
        return best_k_approx(self.x, self.k)[0]

    @property
    def x2(self):
        return best_k_approx(self.x, self.k)[1]

    @property
    def y_tilde(self):
        return assemble(self)[0]


@dataclass(frozen=True)
class RelativeBounds:
    eps: float
    eps_b: float
    k: int


def gen_gaussian(m, n, seed):
    """i.i.d. N(0, 1/m) entries."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal((m, n)) / math.sqrt(m)


def gen_partial_orthogonal(m, n, seed):
    """First m rows of a Haar-random n x n orthogonal matrix, scaled by sqrt(n/m)
    so that columns have unit norm on average."""
    if m > n:
        raise DimensionMismatch("partial orthogonal ensemble needs m <= n")
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    Q = Q * np.sign(np.diag(R))
    return Q[:m] * math.sqrt(n / m)


def normalize_columns(A):
    A = as_matrix(A)
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms == 0):
        raise ZeroDenominator("cannot normalise a zero column")
    return A / norms


def submatrix_spectral_norm(A, k, cap=None):
    """Largest spectral norm over all k-column submatrices, by enumeration."""
    A = as_matrix(A)
    n = A.shape[1]
    if not 1 <= k <= n:
        raise BadK(f"k must satisfy 1 <= k <= {n}, got {k}")
    check_enumeration(n, k, cap)
    G = A.T @ A
    best = 0.0
    for subsets in subset_batches(n, k):
        lam = gram_subset_eigenvalues(G, subsets)[:, -1]
        best = max(best, float(np.max(lam)))
    return math.sqrt(max(best, 0.0))


def submatrix_spectral_norm_lower_bound(A, k, trials, seed):
    """Monte-Carlo lower bound on :func:`submatrix_spectral_norm` from random
    column subsets. Never used by the guarantee checkers."""
    A = as_matrix(A)
    n = A.shape[1]
    if not 1 <= k <= n:
        raise BadK(f"k must satisfy 1 <= k <= {n}, got {k}")
    rng = np.random.default_rng(seed)
    subsets = np.sort(np.argsort(rng.random((trials, n)), axis=1)[:, :k], axis=1)
    lam = gram_subset_eigenvalues(A.T @ A, subsets)[:, -1]
    return math.sqrt(max(float(np.max(lam)), 0.0))


def relative_bounds(p, cap=None):
    """Exact relative perturbations (eps, eps_b) of a problem instance.

    eps = ||E||^(k) / ||Phi||^(k) against the ideal Phi in every scenario;
    eps_b divides by ||Phi x|| (N0, N1, N2) or ||Phi~ x|| (N2prime).
    """
    k = p.k
    if not np.any(p.E):
        eps = 0.0
    else:
        denom = submatrix_spectral_norm(p.phi, k, cap)
        if denom == 0:
            raise ZeroDenominator("||Phi||^(k) is zero")
        eps = submatrix_spectral_norm(p.E, k, cap) / denom
    if not np.any(p.b):
        eps_b = 0.0
    else:
        signal = p.phi_tilde @ p.x if p.scenario is Scenario.N2prime else p.phi @ p.x
        denom = float(np.linalg.norm(signal))
        if denom == 0:
            raise ZeroDenominator("noise ratio denominator ||Phi x|| is zero")
        eps_b = float(np.linalg.norm(p.b)) / denom
    return RelativeBounds(eps=eps, eps_b=eps_b, k=k)


def perturb(phi, eps_target, model, seed, k, cap=None):
    """Matrix perturbation E with ||E||^(k) / ||Phi||^(k) = eps_target.

    ``scaled_copy`` gives E = -eps_target * Phi; ``random_gaussian`` rescales a
    seeded Gaussian matrix to the requested ratio.
    """
    phi = as_matrix(phi)
    if eps_target < 0:
        raise ValueError("eps_target must be nonnegative")
    if model == "scaled_copy":
        return -eps_target * phi
    if model != "random_gaussian":
        raise ValueError(f"unknown perturbation model {model!r}")
    if eps_target == 0:
        return np.zeros_like(phi)
    rng = np.random.default_rng(seed)
    G = rng.standard_normal(phi.shape)
    scale = eps_target * submatrix_spectral_norm(phi, k, cap) / submatrix_spectral_norm(G, k, cap)
    return G * scale


def noise_with_ratio(signal, eps_b, seed):
    """Random noise vector b with ||b|| = eps_b * ||signal||."""
    signal = as_vector(signal)
    if eps_b == 0:
        return np.zeros_like(signal)
    rng = np.random.default_rng(seed)
    d = rng.standard_normal(signal.size)
    return d * (eps_b * np.linalg.norm(signal) / np.linalg.norm(d))


def assemble(p):
    """What the recoverer sees: (y_tilde, available matrix, effective error e).

    N0/N1/N2: y~ = Phi x + b, matrix Phi~ (equal to Phi when E = 0),
    e = Phi~ x2 - E x + b, so that y~ = Phi~ x1 + e.
    N2prime: y~ = Phi~ x + b, matrix Phi, e = Phi x2 + E x + b, so that
    y~ = Phi x1 + e.
    """
    x2 = p.x2
    if p.scenario is Scenario.N2prime:
        y = p.phi_tilde @ p.x + p.b
        e = p.phi @ x2 + p.E @ p.x + p.b
        return y, p.phi, e
    y = p.phi @ p.x + p.b
    e = p.phi_tilde @ x2 - p.E @ p.x + p.b
    return y, p.phi_tilde, e


def make_problem(phi, x, k, scenario, eps=0.0, eps_b=0.0, seed=0, model="random_gaussian",
                 cap=None):
    """Build a problem whose exact relative perturbations equal (eps, eps_b).

    E = 0 in N0/N1 and b = 0 in N0, whatever eps/eps_b say.
    """
    scenario = Scenario(scenario)
    phi = as_matrix(phi)
    x = as_vector(x)
    rng = np.random.default_rng(seed)
    seed_E, seed_b = (int(s) for s in rng.integers(0, 2**63, size=2))
    if scenario in (Scenario.N2, Scenario.N2prime):
        E = perturb(phi, eps, model, seed_E, k, cap)
    else:
        E = np.zeros_like(phi)
    if scenario is Scenario.N0:
        b = np.zeros(phi.shape[0])
    else:
        signal = (phi + E) @ x if scenario is Scenario.N2prime else phi @ x
        b = noise_with_ratio(signal, eps_b, seed_b)
    return PerturbedProblem(phi=phi, E=E, b=b, x=x, scenario=scenario, k=k)
