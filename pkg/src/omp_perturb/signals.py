"""Signal models: best k-term approximation, compressibility ratios and
strong-decaying signals."""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import AllZero, BadAlpha, BadK
from .linalg import as_vector

# ratio slack allowed when certifying strong decay
DECAY_TOL = 1e-12


@dataclass(frozen=True)
class SignalProfile:
    """Compressibility summary of a signal with respect to sparsity ``k``.

    ``support`` is sorted ascending; ``order`` lists the same indices by
    descending magnitude (ties toward lower index). ``alpha_certified`` is the
    largest decay ratio the signal satisfies, ``inf`` when at most one entry is
    nonzero and ``None`` when the signal is not strong-decaying at all.
    """

    k: int
    support: tuple
    order: tuple
    t0: float
    beta: float
    gamma: float
    norm_x1: float
    alpha_certified: Optional[float]


def _check_k(k, n):
    if not 1 <= k <= n:
        raise BadK(f"k must satisfy 1 <= k <= {n}, got {k}")


def magnitude_order(x):
    """Indices of ``x`` sorted by descending magnitude, ties to the lower index."""
    return np.argsort(-np.abs(x), kind="stable")


def best_k_approx(x, k):
    """Split ``x`` into its best k-term approximation and the remainder."""
    x = as_vector(x)
    _check_k(k, x.size)
    keep = magnitude_order(x)[:k]
    x1 = np.zeros_like(x)
    x1[keep] = x[keep]
    return x1, x - x1


def decay_ratio(x):
    """Smallest ratio between consecutive nonzero sorted magnitudes."""
    mags = np.sort(np.abs(as_vector(x)))[::-1]
    mags = mags[mags > 0]
    if mags.size < 2:
        return math.inf
    with np.errstate(over="ignore"):
        return float(np.min(mags[:-1] / mags[1:]))


def is_strong_decaying(x, alpha):
    return decay_ratio(x) >= alpha - DECAY_TOL


def profile(x, k):
    x = as_vector(x)
    _check_k(k, x.size)
    if not np.any(x):
        raise AllZero("signal is identically zero")
    x1, x2 = best_k_approx(x, k)
    order = tuple(int(i) for i in magnitude_order(x)[:k] if x[i] != 0)
    support = tuple(sorted(order))
    norm_x1 = float(np.linalg.norm(x1))
    ratio = decay_ratio(x)
    return SignalProfile(
        k=k,
        support=support,
        order=order,
        t0=float(np.min(np.abs(x[list(support)]))),
        beta=float(np.linalg.norm(x2) / norm_x1),
        gamma=float(np.linalg.norm(x2, 1) / (math.sqrt(k) * norm_x1)),
        norm_x1=norm_x1,
        alpha_certified=ratio if ratio > 1 else None,
    )


def gen_strong_decaying(n, k, alpha, t0, seed, *, ratios="exact", tail="sparse",
                        max_ratio=None):
    """Random alpha-strong-decaying signal whose k-th largest magnitude is ``t0``.

    ratios : "exact" uses the ratio ``alpha`` between every consecutive pair;
        "random" draws each ratio uniformly from [alpha, max_ratio] (default
        2*alpha).
    tail : "sparse" leaves the signal k-sparse; "geometric" keeps decaying
        through all n entries below ``t0``.

    Positions and signs come from ``numpy.random.default_rng(seed)``.
    """
    if not 1 <= k <= n:
        raise BadK(f"need 1 <= k <= n, got k={k}, n={n}")
    if alpha <= 1:
        raise BadAlpha(f"alpha must exceed 1, got {alpha}")
    if t0 <= 0:
        raise ValueError("t0 must be positive")
    rng = np.random.default_rng(seed)
    count = n if tail == "geometric" else k
    if tail not in ("sparse", "geometric"):
        raise ValueError(f"unknown tail mode {tail!r}")
    if ratios == "exact":
        steps = np.full(count - 1, float(alpha))
    elif ratios == "random":
        hi = 2 * alpha if max_ratio is None else max_ratio
        steps = rng.uniform(alpha, hi, size=count - 1)
    else:
        raise ValueError(f"unknown ratio mode {ratios!r}")

    # magnitudes indexed by rank; rank k-1 pinned to t0
    mags = np.empty(count)
    mags[k - 1] = t0
    for j in range(k - 2, -1, -1):
        mags[j] = mags[j + 1] * steps[j]
    for j in range(k, count):
        mags[j] = mags[j - 1] / steps[j - 1]
    # drop entries so small that the ratio can no longer be represented exactly
    mags[mags < 1e-250 * t0] = 0.0

    x = np.zeros(n)
    positions = rng.permutation(n)[:count]
    signs = rng.choice([-1.0, 1.0], size=count)
    x[positions] = signs * mags
    return x


def k_star(k, alpha):
    """Effective sparsity (sum alpha^i)^2 / sum alpha^(2i), i = 0..k-1."""
    if alpha <= 1:
        raise BadAlpha(f"alpha must exceed 1, got {alpha}")
    if k < 1:
        raise BadK(f"k must be at least 1, got {k}")
    # scaled by alpha^-(k-1) so large alpha cannot overflow
    p = float(alpha) ** -np.arange(k, dtype=float)
    return float(np.sum(p) ** 2 / np.sum(p * p))
