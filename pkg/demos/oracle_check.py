"""Closed-form integrals against a brute-force Stieltjes sum.

The oracle sums f over a fine partition and never touches the exact
measure code, so agreement is a real check.  The error shrinks roughly
linearly with the mesh for the left-point rule.
"""

from stieltjes import OracleConfig, compose, cov_lhs, oracle_integrate
from stieltjes.generate import random_instance

for seed in range(5):
    inst = random_instance(seed, integrand="continuous")
    L = compose(inst.N, inst.M)
    exact = float(cov_lhs(inst.f, inst.M, inst.N))
    row = [f"seed {seed}: exact {exact:+.6f}"]
    for mesh in (1e-2, 1e-3, 1e-4):
        approx = oracle_integrate(inst.f, L, OracleConfig(mesh, "left"))
        row.append(f"err@{mesh:g}={abs(approx - exact):.2e}")
    print("  ".join(row))
