"""Brute-force reference checks kept apart from the library proper."""
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import BadL, PreconditionBroken
from .guarantees import eps_h_t1, eps_h_t5, lemma2_bound
from .linalg import RANK_TOL, as_matrix, as_vector, check_enumeration, subset_batches
from .rip import ric_exact
from .sensing import Scenario, assemble, relative_bounds
from .signals import profile

TIE_TOL = 1e-12


@dataclass(frozen=True)
class OracleVerdict:
    passed: bool
    worst_case_margin: float
    counterexample_payload: Optional[dict] = None


class BestSupport(NamedTuple):
    support: tuple
    residual: float
    skipped: tuple  # rank-deficient subsets left out of the search


def exhaustive_best_support(y, A, k, cap=None):
    """k-subset of columns with the smallest least-squares residual.

    Residual ties within 1e-12 go to the lexicographically first subset.
    """
    A = as_matrix(A)
    y = as_vector(y)
    m, n = A.shape
    if not 1 <= k <= min(m, n):
        raise ValueError(f"k must lie in 1..{min(m, n)}, got {k}")
    check_enumeration(n, k, cap)
    best_res, best_set = np.inf, None
    skipped = []
    for subsets in subset_batches(n, k):
        A_S = np.transpose(A[:, subsets], (1, 0, 2))  # (batch, m, k)
        sv = np.linalg.svd(A_S, compute_uv=False)
        bad = (sv[:, 0] == 0) | (sv[:, -1] < RANK_TOL * sv[:, 0])
        skipped.extend(tuple(int(j) for j in s) for s in subsets[bad])
        Q, _ = np.linalg.qr(A_S)
        proj = np.einsum("tmk,tk->tm", Q, np.einsum("tmk,m->tk", Q, y))
        res = np.linalg.norm(y[None, :] - proj, axis=1)
        res[bad] = np.inf
        low = float(res.min())
        if not np.isfinite(low):
            continue
        i = int(np.flatnonzero(res <= low + TIE_TOL)[0])
        if res[i] < best_res - TIE_TOL:
            best_res, best_set = float(res[i]), tuple(int(j) for j in subsets[i])
        elif res[i] < best_res:
            best_res = float(res[i])
    return BestSupport(support=best_set, residual=best_res, skipped=tuple(skipped))


def lemma1_closed_form(l, alpha):
    p = alpha ** np.arange(l)
    return float(np.sum(p * p) / np.sum(p) ** 2)


def lemma1_grid_min(l, alpha, grid_points=60):
    """Grid-minimise sum(x^2) / sum(x)^2 over x_1 = 1, x_i / x_{i-1} in [alpha, 4 alpha].

    Passes when the grid minimum does not undercut the closed form and sits at
    the corner where every ratio equals alpha.
    """
    if not 2 <= l <= 4:
        raise BadL(f"l must lie in 2..4, got {l}")
    if grid_points < 10:
        raise ValueError("grid_points must be at least 10")
    if alpha <= 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    ratios = np.linspace(alpha, 4.0 * alpha, grid_points)
    step = ratios[1] - ratios[0]
    grids = np.meshgrid(*([ratios] * (l - 1)), indexing="ij")
    x = [np.ones_like(grids[0])]
    for r in grids:
        x.append(x[-1] * r)
    x = np.stack(x)
    f = np.sum(x * x, axis=0) / np.sum(x, axis=0) ** 2
    idx = np.unravel_index(int(np.argmin(f)), f.shape)
    arg = np.array([ratios[i] for i in idx])
    closed = lemma1_closed_form(l, alpha)
    margin = float(f[idx]) - closed
    at_alpha = bool(np.all(np.abs(arg - alpha) <= step))
    passed = margin >= -1e-9 and at_alpha
    payload = None if passed else {"l": l, "alpha": alpha, "grid_min": float(f[idx]),
                                   "closed_form": closed, "argmin_ratios": arg.tolist()}
    return OracleVerdict(passed=passed, worst_case_margin=margin, counterexample_payload=payload)


def _payload(p):
    return {
        "scenario": p.scenario.value,
        "k": p.k,
        "phi": p.phi.tolist(),
        "E": p.E.tolist(),
        "b": p.b.tolist(),
        "x": p.x.tolist(),
    }


def lemma2_empirical(p, trace, eps_h=None, cap=None):
    """Check |h^l(j) - x*(j)| <= (delta ||x*|| + eps_h) / (1 - delta) along a trace.

    ``delta`` is the exact order-(k+1) isometry constant of the matrix OMP ran
    with. ``eps_h`` defaults to the scenario's effective perturbation bound.
    """
    _, A, _ = assemble(p)
    prof = profile(p.x, p.k)
    support = set(prof.support)
    for it in trace.iterations:
        if it.selected_index not in support:
            raise PreconditionBroken(
                f"iteration selected column {it.selected_index} outside the support"
            )
    if eps_h is None:
        rel = relative_bounds(p, cap)
        f = eps_h_t5 if p.scenario is Scenario.N2prime else eps_h_t1
        eps_h = f(rel.eps, rel.eps_b, prof.beta, prof.gamma, prof.norm_x1)
    delta = ric_exact(A, p.k + 1, cap).delta
    x1 = p.x1

    worst = np.inf
    chosen = []
    for it in trace.iterations:
        x_star = x1.copy()
        x_star[chosen] = 0.0
        bound = lemma2_bound(delta, float(np.linalg.norm(x_star)), eps_h)
        free = np.ones(x1.size, dtype=bool)
        free[chosen] = False
        dev = np.abs(it.h - x_star)[free]
        worst = min(worst, bound - float(dev.max()))
        chosen.append(it.selected_index)

    passed = worst >= -1e-9
    payload = None if passed else _payload(p)
    return OracleVerdict(passed=passed, worst_case_margin=float(worst),
                         counterexample_payload=payload)
