"""Thresholds and error bounds side by side on one small matrix.

    python3 demos/comparisons.py
"""
from omp_perturb.guarantees import (
    check_t1,
    check_t3,
    compare_coherence,
    compare_huangzhu,
    k_star,
)
from omp_perturb.rip import coherence, ric_exact
from omp_perturb.sensing import gen_partial_orthogonal, make_problem, normalize_columns
from omp_perturb.signals import gen_strong_decaying

A = normalize_columns(gen_partial_orthogonal(32, 33, seed=4))
mu = coherence(A)
print(f"32x33 partial orthogonal matrix, coherence {mu:.4f}")
for k in (1, 2, 3):
    dk, dk1 = ric_exact(A, k).delta, ric_exact(A, k + 1).delta
    print(f"\nk={k}: delta_k={dk:.4f} delta_k+1={dk1:.4f}")
    if mu * (k - 1) < 1:
        c = compare_coherence(mu, k, 1.0, 0.01, dk)
        print(f"  coherence-based vs RIC-based error ratio r = {c.error_ratio_r:.4f}")
    hz = compare_huangzhu(k, dk1, dk, 1.0, 0.01)
    print(f"  alternative condition holds: delta {hz.hz_delta_ok}, noise {hz.hz_noise_ok}")

print("\nstrong-decaying thresholds (N2, eps = eps_b = 1e-4):")
for alpha in (1.5, 3.0, 10.0):
    x = gen_strong_decaying(33, 3, alpha, 1.0, seed=1)
    p = make_problem(A, x, 3, "N2", eps=1e-4, eps_b=1e-4, seed=1)
    t1, t3 = check_t1(p), check_t3(p, alpha)
    print(f"  alpha={alpha:>4}: k*={k_star(3, alpha):.3f}  T1 threshold {t1.delta_threshold:.4f}"
          f"  T3 threshold {t3.delta_threshold:.4f}  delta_4 = {t1.delta_actual:.4f}")
