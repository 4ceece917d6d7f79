"""Orthogonal Matching Pursuit with a full per-iteration trace.

Each iteration runs the three classic steps on whatever (measurement, matrix)
pair it is given:

    match     h = A^T r
    identify  Lambda <- Lambda + {argmax_j |h(j)|}   (ties: lowest index)
    update    x = argmin_{supp z in Lambda} ||y - A z||,  r = y - A x
"""
import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .linalg import as_matrix, as_vector, least_squares_on_support


class StopReason(str, enum.Enum):
    reached_max_iter = "reached_max_iter"
    residual_tolerance = "residual_tolerance"


@dataclass(frozen=True, eq=False)
class IterationRecord:
    selected_index: int
    h_max_abs: float
    h_runner_up_abs: float
    residual_norm: float
    lambda_set: tuple
    h: np.ndarray  # matching vector of this iteration


@dataclass(frozen=True, eq=False)
class OmpTrace:
    iterations: list
    x_hat: np.ndarray
    converged_reason: StopReason

    @property
    def selected(self):
        return [it.selected_index for it in self.iterations]

    @property
    def support(self):
        return tuple(sorted(self.selected))

    @property
    def residual_norms(self):
        return [it.residual_norm for it in self.iterations]


def matching_vector(residual, A):
    A = as_matrix(A)
    residual = as_vector(residual)
    if A.shape[0] != residual.size:
        raise DimensionMismatch(f"residual has length {residual.size}, A has {A.shape[0]} rows")
    return A.T @ residual


def omp_run(y, A, max_iter, residual_tol=0.0):
    """Run OMP for at most ``max_iter`` iterations.

    Stops early once the residual norm drops to ``residual_tol`` or below.
    Raises RankDeficient if the selected columns become dependent.
    """
    A = as_matrix(A)
    y = as_vector(y)
    m, n = A.shape
    if y.size != m:
        raise DimensionMismatch(f"y has length {y.size}, A has {m} rows")
    if not 0 <= max_iter <= min(m, n):
        raise ValueError(f"max_iter must lie in 0..{min(m, n)}, got {max_iter}")
    if residual_tol < 0:
        raise ValueError("residual_tol must be nonnegative")

    support = []
    coef = np.zeros(0)
    r = y.copy()
    records = []
    reason = StopReason.reached_max_iter
    while len(support) < max_iter:
        if np.linalg.norm(r) <= residual_tol:
            reason = StopReason.residual_tolerance
            break
        h = A.T @ r
        mag = np.abs(h)
        # already-chosen columns are excluded even if rounding left them nonzero
        mag[support] = -1.0
        j = int(np.argmax(mag))
        runner = mag.copy()
        runner[j] = -1.0
        runner_up = float(max(runner.max(), 0.0)) if n > 1 else 0.0
        support.append(j)
        coef = least_squares_on_support(A, y, support)
        r = y - A[:, support] @ coef
        records.append(
            IterationRecord(
                selected_index=j,
                h_max_abs=float(mag[j]),
                h_runner_up_abs=runner_up,
                residual_norm=float(np.linalg.norm(r)),
                lambda_set=tuple(support),
                h=h,
            )
        )

    x_hat = np.zeros(n)
    x_hat[support] = coef
    return OmpTrace(iterations=records, x_hat=x_hat, converged_reason=reason)
