"""Instances on which OMP provably fails, and instances where the effective
perturbation bound is attained with equality.

The failure family lives in dimension k+1. The perturbed matrix is

    Phi~ = [[ I_k      a 1_k ],
            [ 0_{1xk}  b     ]],   a = delta/sqrt(k),  b = sqrt(1 - delta^2)

with unit columns and Gram eigenvalues {1 (k-1 times), 1-delta, 1+delta}. With
x1 = (t0,...,t0, 0) and e = (0,...,0, xi), the measurement is
y~ = (t0,...,t0, xi) and the first matching vector is (t0,...,t0, eta*t0), so
OMP picks the off-support column k first whenever eta > 1.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DeltaOutOfRange, EpsTooLarge, EtaTooLarge
from .linalg import as_matrix, check_enumeration, gram_subset_eigenvalues, subset_batches
from .omp import omp_run
from .sensing import PerturbedProblem, Scenario


@dataclass(frozen=True, eq=False)
class CounterexampleInstance:
    k: int
    eta: float
    t0: float
    xi: float
    delta: float
    phi: np.ndarray
    E: np.ndarray
    b: np.ndarray
    x: np.ndarray
    y_tilde: np.ndarray

    @property
    def phi_tilde(self):
        return self.phi + self.E

    @property
    def x1(self):
        x1 = self.x.copy()
        x1[self.k] = 0.0
        return x1

    @property
    def x2(self):
        return self.x - self.x1

    @property
    def e(self):
        return self.phi_tilde @ self.x2 - self.E @ self.x + self.b

    @property
    def delta_bound(self):
        """eta/sqrt(k) - sqrt(k-1)/k * xi/t0, which delta never exceeds."""
        return self.eta / math.sqrt(self.k) - math.sqrt(self.k - 1) / self.k * self.xi / self.t0

    def problem(self):
        return PerturbedProblem(phi=self.phi, E=self.E, b=self.b, x=self.x,
                                scenario=Scenario.N2, k=self.k)


def delta_closed_form(k, eta, rho):
    """Isometry constant making the off-support correlation equal eta * t0.

    ``rho`` is xi / t0. Solves delta sqrt(k) + sqrt(1 - delta^2) rho = eta for
    the smaller root.
    """
    if k < 2:
        raise ValueError(f"construction needs k >= 2, got {k}")
    if eta <= 1:
        raise ValueError(f"construction needs eta > 1, got {eta}")
    if not 0 < rho < 1:
        raise ValueError(f"xi/t0 must lie in (0, 1), got {rho}")
    disc = k - eta**2 + rho**2
    if disc < 0:
        raise EtaTooLarge(f"k - eta^2 + rho^2 = {disc} < 0")
    delta = (eta * math.sqrt(k) - rho * math.sqrt(disc)) / (k + rho**2)
    if not delta < 1 / math.sqrt(k):
        raise DeltaOutOfRange(f"delta = {delta} is not below 1/sqrt(k) = {1 / math.sqrt(k)}")
    return delta


def build(k, eta, t0, xi):
    if not 0 < xi < t0:
        raise ValueError(f"need 0 < xi < t0, got xi={xi}, t0={t0}")
    delta = delta_closed_form(k, eta, xi / t0)
    a = delta / math.sqrt(k)
    b_scalar = math.sqrt(1.0 - delta**2)

    phi_tilde = np.eye(k + 1)
    phi_tilde[:k, k] = a
    phi_tilde[k, k] = b_scalar
    phi = np.eye(k + 1)
    E = phi_tilde - phi

    x = np.full(k + 1, float(t0))
    x[k] = xi / 2.0
    b = np.zeros(k + 1)
    b[k] = xi / 2.0
    y_tilde = np.full(k + 1, float(t0))
    y_tilde[k] = xi
    return CounterexampleInstance(k=k, eta=eta, t0=t0, xi=xi, delta=delta, phi=phi, E=E,
                                  b=b, x=x, y_tilde=y_tilde)


def verify_failure(inst):
    """True iff OMP, run k iterations on (y~, Phi~), selects the off-support column."""
    trace = omp_run(inst.y_tilde, inst.phi_tilde, inst.k)
    return inst.k in trace.selected


def tight_error_instance(phi, k, eps, eps_b, cap=None):
    """k-sparse N2 instance where ||e|| = ||Phi~||^(k) (eps + eps_b) ||x|| / (1 - eps).

    E = -eps Phi, x is the top right singular vector of the k-column submatrix
    of largest spectral norm, and b = eps_b Phi x.
    """
    phi = as_matrix(phi)
    if not 0 <= eps < 1:
        raise EpsTooLarge(f"eps must lie in [0, 1), got {eps}")
    n = phi.shape[1]
    check_enumeration(n, k, cap)
    G = phi.T @ phi
    best, best_set = -1.0, None
    for subsets in subset_batches(n, k):
        lam = gram_subset_eigenvalues(G, subsets)[:, -1]
        i = int(np.argmax(lam))
        if lam[i] > best:
            best, best_set = float(lam[i]), subsets[i]
    cols = [int(j) for j in best_set]
    _, _, vt = np.linalg.svd(phi[:, cols])
    x = np.zeros(n)
    x[cols] = vt[0]
    E = -eps * phi
    b = eps_b * (phi @ x)
    return PerturbedProblem(phi=phi, E=E, b=b, x=x, scenario=Scenario.N2, k=k)
