"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest, which
repeats the lines in its terminal summary.
"""
import itertools
import math
import time

import numpy as np
import pytest

from omp_perturb.cli import main as cli_main
from omp_perturb.counterexample import build, tight_error_instance, verify_failure
from omp_perturb.errors import DeltaOutOfRange, EtaTooLarge
from omp_perturb.experiment import ExperimentConfig, run_experiment
from omp_perturb.guarantees import check_t1, check_t3, compare_coherence
from omp_perturb.omp import omp_run
from omp_perturb.oracle import lemma1_closed_form, lemma1_grid_min, lemma2_empirical
from omp_perturb.rip import coherence, coherence_ric_bound_check, ric_exact, ric_lower_bound
from omp_perturb.sensing import (
    PerturbedProblem,
    assemble,
    gen_gaussian,
    gen_partial_orthogonal,
    make_problem,
    normalize_columns,
    submatrix_spectral_norm,
)
from omp_perturb.signals import gen_strong_decaying, k_star

RESULTS = []


def report(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _sweep(configs):
    records = []
    for cfg in configs:
        records.extend(run_experiment(ExperimentConfig(**cfg)))
    return records


# 1 -------------------------------------------------------------------------
def test_counterexample_grid():
    start = time.perf_counter()
    built, bad = 0, []
    for k, eta, rho in itertools.product(range(2, 9), (1.01, 1.1, 1.5), (0.1, 0.5, 0.9)):
        try:
            inst = build(k, eta, 1.0, rho)
        except (EtaTooLarge, DeltaOutOfRange):
            continue
        built += 1
        A = inst.phi_tilde
        lam = np.linalg.eigvalsh(A.T @ A)
        expected = np.sort(np.r_[np.ones(k - 1), 1 - inst.delta, 1 + inst.delta])
        checks = (
            abs(ric_exact(A, k + 1).delta - inst.delta) <= 1e-9,
            np.max(np.abs(lam - expected)) <= 1e-9,
            verify_failure(inst) and omp_run(inst.y_tilde, A, k).selected[0] == k,
            inst.delta <= eta / math.sqrt(k) - math.sqrt(k - 1) / k * rho,
        )
        if not all(checks):
            bad.append((k, eta, rho, checks))
    elapsed = time.perf_counter() - start
    report(1, built > 0 and not bad and elapsed < 10,
           f"{built} valid grid points, {len(bad)} failing, {elapsed:.2f}s (< 10s)")


# 2 -------------------------------------------------------------------------
def test_theorem1_soundness_sweep():
    start = time.perf_counter()
    common = dict(scenario="N2", m=32, ensemble="partial_orthogonal", checker=["T1"])
    records = _sweep([
        dict(common, n=34, k=1, trials=400, seed=101, eps=0.01, eps_b=0.01),
        dict(common, n=33, k=2, trials=550, seed=202, eps=0.005, eps_b=0.005),
        dict(common, n=34, k=2, trials=250, seed=303, eps=0.003, eps_b=0.003,
             signal={"kind": "almost_sparse", "beta_target": 0.002, "gamma_target": 0.004}),
        dict(common, n=33, k=3, trials=150, seed=404, eps=0.002, eps_b=0.002),
    ])
    elapsed = time.perf_counter() - start
    satisfied = sum(r.condition_satisfied for r in records)
    violations = sum(r.violation for r in records)
    report(2, satisfied >= 1000 and violations == 0 and elapsed < 300,
           f"{satisfied} satisfied N2 instances, {violations} violations, {elapsed:.1f}s (< 300s)")


# 3 -------------------------------------------------------------------------
def test_noiseless_degeneration():
    worst = 0.0
    for k in range(1, 21):
        x = np.zeros(k + 1)
        x[:k] = 1.0
        n = k + 1
        p = PerturbedProblem(phi=np.eye(n), E=np.zeros((n, n)), b=np.zeros(n), x=x,
                             scenario="N0", k=k)
        worst = max(worst, abs(check_t1(p).delta_threshold - 1 / (math.sqrt(k) + 1)))
    report(3, worst <= 2.3e-16, f"max |threshold - 1/(sqrt(k)+1)| over k=1..20 is {worst:.2e}")


# 4 -------------------------------------------------------------------------
def test_theorem4_order():
    common = dict(m=32, n=33, ensemble="partial_orthogonal", checker=["T4"])
    records = _sweep([
        dict(common, scenario="N2", k=2, trials=500, seed=505, eps=1e-4, eps_b=1e-4,
             signal={"kind": "strong_decaying", "alpha": 20.0}),
        dict(common, scenario="N0", k=3, trials=60, seed=606,
             signal={"kind": "strong_decaying", "alpha": 40.0}),
    ])
    passing = [r for r in records if r.condition_satisfied]
    broken = sum(not (r.order_respected and r.support_recovered) for r in passing)
    report(4, len(passing) >= 300 and broken == 0,
           f"{len(passing)} T4-passing instances, {broken} out of magnitude order")


# 5 -------------------------------------------------------------------------
def test_theorem3_dominance():
    rng = np.random.default_rng(55)
    worse = 0
    instances = 0
    for trial in range(300):
        k = int(rng.integers(1, 5))
        alpha = float(rng.choice([1.2, 1.5, 2.0, 3.0, 8.0]))
        scenario = str(rng.choice(["N0", "N1", "N2"]))
        tail = str(rng.choice(["sparse", "geometric"]))
        x = gen_strong_decaying(12, k, alpha, 1.0, trial, ratios="random", tail=tail)
        phi = normalize_columns(gen_gaussian(10, 12, trial))
        eps = float(rng.uniform(0, 0.05))
        p = make_problem(phi, x, k, scenario, eps=eps, eps_b=eps, seed=trial)
        t1, t3 = check_t1(p), check_t3(p, alpha)
        instances += 1
        worse += t3.delta_threshold < t1.delta_threshold
    grid_bad = 0
    for k, alpha in itertools.product(range(2, 9), (1.2, 1.5, 2.0, 3.0, 5.0)):
        ks = k_star(k, alpha)
        grid_bad += not (1 <= ks < min(k, (alpha + 1) / (alpha - 1)))
    report(5, worse == 0 and grid_bad == 0,
           f"T3 below T1 on {worse}/{instances} instances; k* bound broken at {grid_bad}/35 "
           "grid points")


# 6 -------------------------------------------------------------------------
def test_lemma1_grid():
    bad = []
    for l, alpha in itertools.product((2, 3, 4), (1.2, 1.5, 2.0, 3.0)):
        v = lemma1_grid_min(l, alpha, grid_points=60)
        if not (v.passed and abs(v.worst_case_margin) <= 1e-6):
            bad.append((l, alpha, v.worst_case_margin))
    report(6, not bad, f"{12 - len(bad)}/12 (l, alpha) pairs match the closed-form minimum "
                       f"(e.g. l=2, alpha=2: {lemma1_closed_form(2, 2.0):.6f})")


# 7 -------------------------------------------------------------------------
def test_lemma2_traces():
    traces, worst = 0, math.inf
    seed = 0
    while traces < 500 and seed < 2000:
        rng = np.random.default_rng(seed)
        k = int(rng.integers(1, 3))
        A = normalize_columns(gen_partial_orthogonal(32, 34, seed))
        x = np.zeros(34)
        x[rng.choice(34, k, replace=False)] = rng.choice([-1, 1], k) * rng.uniform(1, 2, k)
        if seed % 3 == 0:
            rest = np.flatnonzero(x == 0)
            x[rest] = rng.uniform(-1e-3, 1e-3, rest.size)
        p = make_problem(A, x, k, "N2", eps=0.005, eps_b=0.005, seed=seed)
        seed += 1
        if not check_t1(p).satisfied:
            continue
        y, M, _ = assemble(p)
        v = lemma2_empirical(p, omp_run(y, M, k))
        worst = min(worst, v.worst_case_margin)
        traces += 1
    report(7, traces >= 500 and worst >= -1e-9,
           f"{traces} T1-passing traces, worst Lemma 2 margin {worst:.3e} (>= -1e-9)")


# 8 -------------------------------------------------------------------------
def test_ric_cross_validation():
    lower_bad = mono_bad = coh_bad = r_bad = r_count = 0
    for seed in range(100):
        A = gen_gaussian(8, 12, seed)
        d = [ric_exact(A, k).delta for k in range(1, 5)]
        lower_bad += any(ric_lower_bound(A, k, 500, seed) > d[k - 1] + 1e-9 for k in (1, 2, 3))
        mono_bad += any(a > b + 1e-12 for a, b in zip(d, d[1:]))
        B = normalize_columns(gen_gaussian(16, 12, seed))
        coh_bad += not all(coherence_ric_bound_check(B, k) for k in (1, 2, 3))
        mu = coherence(B)
        for k in (2, 3):
            dk = ric_exact(B, k).delta
            if mu * (k - 1) < 1 and dk < 1:
                r_count += 1
                r_bad += compare_coherence(mu, k, 1.0, 0.0, dk).error_ratio_r > 1 + 1e-12
    ok = not (lower_bad or mono_bad or coh_bad or r_bad) and r_count > 0
    report(8, ok, f"lower-bound/monotone/coherence failures {lower_bad}/{mono_bad}/{coh_bad} "
                  f"on 100 matrices; r > 1 in {r_bad}/{r_count} evaluations")


# 9 -------------------------------------------------------------------------
def test_tight_error_equality():
    rng = np.random.default_rng(9)
    worst = 0.0
    for seed in range(50):
        k = int(rng.integers(1, 4))
        eps, eps_b = float(rng.uniform(0, 0.9)), float(rng.uniform(0, 0.5))
        p = tight_error_instance(gen_gaussian(6, 9, seed), k, eps, eps_b)
        lhs = np.linalg.norm(assemble(p)[2])
        rhs = (submatrix_spectral_norm(p.phi_tilde, k) / (1 - eps) * (eps + eps_b)
               * np.linalg.norm(p.x))
        worst = max(worst, abs(lhs - rhs) / max(rhs, 1.0))
    report(9, worst <= 1e-9, f"max relative gap {worst:.2e} over 50 random matrices")


# 10 ------------------------------------------------------------------------
def test_montecarlo_determinism(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        '{"scenario": "N2", "m": 24, "n": 26, "k": 2, "trials": 40, "seed": 77,'
        ' "eps": 0.01, "eps_b": 0.01, "signal": {"kind": "strong_decaying", "alpha": 6.0},'
        ' "checker": ["T1", "T3", "T4"], "ensemble": "partial_orthogonal"}'
    )
    outputs = []
    for run, extra in enumerate(([], [], ["--workers", "2"])):
        out = tmp_path / f"run{run}.csv"
        cli_main(["montecarlo", str(cfg), "--out", str(out), *extra])
        outputs.append(out.read_bytes())
    capsys.readouterr()
    same = outputs[0] == outputs[1] == outputs[2]
    report(10, same, f"{len(outputs)} montecarlo runs, CSV bytes identical: {same}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
