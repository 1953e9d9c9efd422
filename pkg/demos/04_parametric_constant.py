"""
Shrinking the constant 4
========================

The factor h_lambda(A) = 2(1 - lambda) + lambda ||A - c(A)|| / w(A - lambda_0)
interpolates between 2 (lambda = 0) and a matrix-dependent value in [1, 2]
(lambda = 1).  The product k = h_lambda(A) h_mu(T) replaces the constant 4
and always lies in [1, 4].  This script tabulates k and looks at how small
it gets for random matrices.
"""

import numpy as np

import grusskit as gk
from grusskit.cli import sweep_rows

# %%
# Two extremes.  For Hermitian matrices h_1 = 1, so k reaches 1.
# For the Jordan block h_1 = 2 and k stays at 4; the bound is still tight
# there, since dist(J2)^2 = 1 = 4 w(J2)^2.
for name in ("diag13", "jordan2"):
    a = gk.fixture(name)
    print(f"{name:<8} h_0 = {gk.h_factor(a, 0.0):.4f}   h_1 = {gk.h_factor(a, 1.0):.4f}")

# %%
# The k surface on a coarse grid (columns: lambda, mu, h_lambda, h_mu, k,
# bound, dist product, slack).
d13 = gk.fixture("diag13")
for row in sweep_rows(d13, d13, 3):
    print("  ".join(f"{v:7.4f}" for v in row))

# %%
# The smallest k, h_1(A) h_1(T), for random draws of each family.
for fam in ("ginibre", "hermitian", "normal", "haar_unitary", "jordan"):
    ks = []
    for seed in range(20):
        a = gk.generate(gk.ZooSpec(fam, 4, seed=seed, perturbation=0.1 if fam == "jordan" else 0.0))
        t = gk.generate(gk.ZooSpec(fam, 4, seed=seed + 1000, perturbation=0.1 if fam == "jordan" else 0.0))
        ks.append(gk.h_factor(a, 1.0) * gk.h_factor(t, 1.0))
    print(f"{fam:<13} k_min over 20 pairs: median {np.median(ks):.3f}, range [{min(ks):.3f}, {max(ks):.3f}]")
