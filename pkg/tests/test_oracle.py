import numpy as np
import pytest

from omp_perturb.errors import BadL, CombinatorialLimit, PreconditionBroken
from omp_perturb.guarantees import check_t1
from omp_perturb.omp import omp_run
from omp_perturb.oracle import (
    exhaustive_best_support,
    lemma1_closed_form,
    lemma1_grid_min,
    lemma2_empirical,
)
from omp_perturb.sensing import (
    PerturbedProblem,
    assemble,
    gen_gaussian,
    gen_partial_orthogonal,
    make_problem,
    normalize_columns,
)
from omp_perturb import counterexample


def test_best_support_identity():
    y = np.array([0.1, 5.0, -0.2, 3.0, 0.0])
    res = exhaustive_best_support(y, np.eye(5), 2)
    assert res.support == (1, 3)
    assert res.residual == pytest.approx(np.hypot(0.1, 0.2))


def test_best_support_noiseless_unique():
    A = gen_gaussian(10, 14, 2)
    x = np.zeros(14)
    x[[2, 9]] = [1.0, -2.0]
    res = exhaustive_best_support(A @ x, A, 2)
    assert res.support == (2, 9) and res.residual <= 1e-10


def test_best_support_ties_and_rank_deficiency():
    A = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    res = exhaustive_best_support(np.array([1.0, 0.0]), A, 1)
    assert res.support == (0,)
    res = exhaustive_best_support(np.array([1.0, 1.0]), A, 2)
    assert (0, 1) in res.skipped and res.support == (0, 2)
    with pytest.raises(CombinatorialLimit):
        exhaustive_best_support(np.ones(30), np.eye(30), 10, cap=1000)


def test_best_support_never_worse_than_omp():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        A = gen_gaussian(8, 12, seed)
        y = rng.standard_normal(8)
        t = omp_run(y, A, 3)
        assert exhaustive_best_support(y, A, 3).residual <= t.residual_norms[-1] + 1e-12


@pytest.mark.parametrize("l", [2, 3, 4])
@pytest.mark.parametrize("alpha", [1.2, 1.5, 2.0, 3.0])
def test_lemma1(l, alpha):
    v = lemma1_grid_min(l, alpha, 40)
    assert v.passed and v.counterexample_payload is None
    assert abs(v.worst_case_margin) <= 1e-6


def test_lemma1_examples():
    assert lemma1_closed_form(2, 2.0) == pytest.approx(5 / 9)
    assert lemma1_grid_min(2, 2.0, 20).worst_case_margin >= -1e-9
    assert lemma1_closed_form(2, 1 + 1e-6) == pytest.approx(0.5, abs=1e-6)
    x = 2.5 ** np.arange(3)
    assert lemma1_closed_form(3, 2.5) == pytest.approx(np.sum(x**2) / np.sum(x) ** 2, rel=1e-12)
    with pytest.raises(BadL):
        lemma1_grid_min(5, 2.0)
    with pytest.raises(ValueError):
        lemma1_grid_min(2, 2.0, 5)


def test_lemma2_identity_is_exact():
    x = np.array([3.0, 0.0, -1.0, 0.0, 2.0])
    p = PerturbedProblem(phi=np.eye(5), E=np.zeros((5, 5)), b=np.zeros(5), x=x,
                         scenario="N0", k=3)
    t = omp_run(p.y_tilde, p.phi, 3)
    v = lemma2_empirical(p, t)
    assert v.passed and v.worst_case_margin == 0.0


def test_lemma2_precondition():
    inst = counterexample.build(2, 1.1, 1.0, 0.5)
    p = inst.problem()
    y, A, _ = assemble(p)
    with pytest.raises(PreconditionBroken):
        lemma2_empirical(p, omp_run(y, A, 2))


def test_lemma2_on_passing_instances():
    passing = 0
    for seed in range(60):
        A = normalize_columns(gen_partial_orthogonal(20, 21, seed))
        rng = np.random.default_rng(seed)
        x = np.zeros(21)
        x[rng.choice(21, 2, replace=False)] = rng.uniform(1, 2, 2)
        p = make_problem(A, x, 2, "N2", eps=0.01, eps_b=0.01, seed=seed)
        if not check_t1(p).satisfied:
            continue
        passing += 1
        y, M, _ = assemble(p)
        v = lemma2_empirical(p, omp_run(y, M, 2))
        assert v.passed, v.worst_case_margin
    assert passing >= 20
