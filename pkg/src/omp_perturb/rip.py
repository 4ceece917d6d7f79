"""Restricted isometry constants by exhaustive enumeration, and coherence."""
from dataclasses import dataclass

import numpy as np

from .errors import BadK, NotNormalized, TooFewColumns
from .linalg import as_matrix, check_enumeration, gram_subset_eigenvalues, subset_batches


@dataclass(frozen=True)
class RipReport:
    order: int
    delta: float
    method: str
    witness: tuple
    witness_eigenvalue: float


def _check_order(A, k):
    if not 1 <= k <= A.shape[1]:
        raise BadK(f"order must satisfy 1 <= k <= {A.shape[1]}, got {k}")


def ric_exact(A, k, cap=None):
    """delta_k = max over k-subsets S of the largest |eigenvalue(A_S^T A_S) - 1|.

    The witness is the lexicographically first subset attaining the maximum.
    """
    A = as_matrix(A)
    _check_order(A, k)
    check_enumeration(A.shape[1], k, cap)
    G = A.T @ A
    best = -1.0
    witness, witness_eig = None, None
    for subsets in subset_batches(A.shape[1], k):
        lam = gram_subset_eigenvalues(G, subsets)
        lo, hi = 1.0 - lam[:, 0], lam[:, -1] - 1.0
        dev = np.maximum(lo, hi)
        i = int(np.argmax(dev))
        if dev[i] > best:
            best = float(dev[i])
            witness = tuple(int(j) for j in subsets[i])
            witness_eig = float(lam[i, -1] if hi[i] >= lo[i] else lam[i, 0])
    return RipReport(
        order=k,
        delta=max(best, 0.0),
        method="exact_enumeration",
        witness=witness,
        witness_eigenvalue=witness_eig,
    )


def ric_lower_bound(A, k, trials, seed):
    """max |‖Av‖² - 1| over random unit k-sparse v; never exceeds delta_k."""
    A = as_matrix(A)
    _check_order(A, k)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    n = A.shape[1]
    rng = np.random.default_rng(seed)
    best = 0.0
    for start in range(0, trials, 10000):
        t = min(10000, trials - start)
        supports = np.argsort(rng.random((t, n)), axis=1)[:, :k]
        coef = rng.standard_normal((t, k))
        coef /= np.linalg.norm(coef, axis=1, keepdims=True)
        Av = np.einsum("mtk,tk->tm", A[:, supports], coef)
        best = max(best, float(np.max(np.abs(np.sum(Av * Av, axis=1) - 1.0))))
    return best


def coherence(A):
    """Largest off-diagonal |(A^T A)_ij|; columns are not normalised first."""
    A = as_matrix(A)
    if A.shape[1] < 2:
        raise TooFewColumns("coherence needs at least two columns")
    G = A.T @ A
    np.fill_diagonal(G, 0.0)
    return float(np.max(np.abs(G)))


def check_unit_columns(A, tol=1e-8):
    norms = np.linalg.norm(A, axis=0)
    if np.any(np.abs(norms - 1.0) > tol):
        raise NotNormalized(f"columns are not unit norm within {tol}")


def coherence_ric_bound_check(A, k, cap=None):
    """Whether delta_k <= mu (k - 1) holds (requires unit-norm columns)."""
    A = as_matrix(A)
    check_unit_columns(A)
    return ric_exact(A, k, cap).delta <= coherence(A) * (k - 1) + 1e-9


def ric_orders(A, orders, cap=None):
    """Map each requested order to its exact RIC."""
    return {k: ric_exact(A, k, cap).delta for k in orders}
