"""Small dense real linear algebra used throughout the package.

Matrices and vectors are plain ``numpy`` float arrays; supports are tuples of
0-based column indices. Everything here is a pure function.
"""
import itertools
import math
import os

import numpy as np
from scipy.linalg import solve_triangular

from .errors import CombinatorialLimit, DimensionMismatch, NotSymmetric, RankDeficient

# smallest/largest singular value ratio below which a column subset is rank deficient
RANK_TOL = 1e-12

DEFAULT_SUBSET_CAP = 10**6
CAP_ENV_VAR = "OMP_PERTURB_CAP"

_BATCH = 20000


def as_matrix(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def as_vector(y):
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d vector, got shape {y.shape}")
    if not np.all(np.isfinite(y)):
        raise ValueError("vector has non-finite entries")
    return y


def as_support(S, n):
    """Validate a support set against ambient dimension ``n``; order is kept."""
    S = tuple(int(i) for i in S)
    if len(set(S)) != len(S):
        raise ValueError(f"support has duplicate indices: {S}")
    for i in S:
        if not 0 <= i < n:
            raise DimensionMismatch(f"index {i} outside ambient dimension {n}")
    return S


def default_cap():
    """Subset enumeration cap, overridable through ``OMP_PERTURB_CAP``."""
    raw = os.environ.get(CAP_ENV_VAR)
    return int(raw) if raw else DEFAULT_SUBSET_CAP


def check_enumeration(n, k, cap=None):
    cap = default_cap() if cap is None else cap
    count = math.comb(n, k)
    if count > cap:
        raise CombinatorialLimit(
            f"C({n}, {k}) = {count} subsets exceeds the enumeration cap {cap}"
        )
    return count


def subset_batches(n, k, batch=_BATCH):
    """Yield all k-subsets of range(n) in lexicographic order, as int arrays of
    shape (<=batch, k)."""
    combos = itertools.combinations(range(n), k)
    while True:
        chunk = list(itertools.islice(combos, batch))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.intp).reshape(len(chunk), k)


def gram_subset_eigenvalues(G, subsets):
    """Ascending eigenvalues of G[S, S] for every row S of ``subsets``."""
    sub = G[subsets[:, :, None], subsets[:, None, :]]
    return np.linalg.eigvalsh(sub)


def _restrict(A, y, S):
    A = as_matrix(A)
    y = as_vector(y)
    if A.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"matrix has {A.shape[0]} rows, vector has {y.shape[0]}")
    S = as_support(S, A.shape[1])
    return A, y, S


def _qr_on_support(A_S):
    if A_S.shape[1] > A_S.shape[0]:
        raise RankDeficient(
            f"{A_S.shape[1]} columns cannot be independent in dimension {A_S.shape[0]}"
        )
    sv = np.linalg.svd(A_S, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] < RANK_TOL * sv[0]:
        raise RankDeficient(f"column subset is rank deficient (singular values {sv})")
    return np.linalg.qr(A_S)


def least_squares_on_support(A, y, S):
    """Coefficients c minimising ``||y - A[:, S] c||_2``, via a QR factorisation."""
    A, y, S = _restrict(A, y, S)
    if not S:
        return np.zeros(0)
    Q, R = _qr_on_support(A[:, list(S)])
    return solve_triangular(R, Q.T @ y)


def pseudoinverse_on_support(A, S):
    """Moore-Penrose pseudoinverse of the full-column-rank submatrix A[:, S]."""
    A = as_matrix(A)
    S = as_support(S, A.shape[1])
    if not S:
        return np.zeros((0, A.shape[0]))
    Q, R = _qr_on_support(A[:, list(S)])
    return solve_triangular(R, Q.T)


def orthogonal_projector(A, S):
    """Projector onto the column span of A[:, S]; the zero matrix for empty S."""
    A = as_matrix(A)
    S = as_support(S, A.shape[1])
    m = A.shape[0]
    if not S:
        return np.zeros((m, m))
    Q, _ = _qr_on_support(A[:, list(S)])
    P = Q @ Q.T
    return (P + P.T) / 2


def spectral_norm(A):
    A = as_matrix(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def symmetric_eigenvalues(G):
    """All eigenvalues of a symmetric matrix, ascending."""
    G = as_matrix(G)
    if G.shape[0] != G.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {G.shape}")
    scale = max(1.0, float(np.max(np.abs(G)))) if G.size else 1.0
    if G.size and np.max(np.abs(G - G.T)) > 1e-10 * scale:
        raise NotSymmetric("matrix is not symmetric within 1e-10")
    return np.linalg.eigvalsh((G + G.T) / 2)
