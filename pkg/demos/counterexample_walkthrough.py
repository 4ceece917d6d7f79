"""Build the failing instance for a few (k, eta) pairs and show why OMP errs.

    python3 demos/counterexample_walkthrough.py
"""
import numpy as np

from omp_perturb import omp_run
from omp_perturb.counterexample import build
from omp_perturb.errors import DeltaOutOfRange, EtaTooLarge
from omp_perturb.rip import ric_exact

np.set_printoptions(precision=4, suppress=True)

for k, eta, rho in [(2, 1.1, 0.5), (4, 1.01, 0.1), (6, 1.5, 0.9), (3, 1.5, 0.1)]:
    print(f"k={k} eta={eta} xi/t0={rho}")
    try:
        inst = build(k, eta, 1.0, rho)
    except (EtaTooLarge, DeltaOutOfRange) as exc:
        print(f"  outside the construction's domain: {exc}\n")
        continue
    A = inst.phi_tilde
    h = A.T @ inst.y_tilde
    trace = omp_run(inst.y_tilde, A, k)
    print(f"  delta = {inst.delta:.6f}  (exact RIC {ric_exact(A, k + 1).delta:.6f}, "
          f"bound {inst.delta_bound:.6f}, 1/sqrt(k) = {1 / np.sqrt(k):.6f})")
    print(f"  first matching vector  {h}")
    print(f"  OMP picks {trace.selected}; column {k} is off the support\n")
