"""
Covariance bounds, term by term
===============================

For operators A, T and a density matrix P the covariance is
V_P(A, T) = tr(PAT) - tr(PA) tr(PT).  It is bounded by a chain of
increasingly crude quantities ending with 4 R_A R_T, where R_A is the
radius of the smallest disc around W(A).  The reports below print every
term and the slack of each link.
"""

import numpy as np

import grusskit as gk

rng_seed = 5
a = gk.generate(gk.ZooSpec("ginibre", 4, seed=rng_seed))
t = gk.generate(gk.ZooSpec("jordan", 4, seed=rng_seed + 1, perturbation=0.1))
p = gk.generate(gk.ZooSpec("density_full", 4, seed=rng_seed + 2))

# %%
# The full chain for a non-normal pair.
print(gk.refined_chain(a, t, p).table())

# %%
# For normal operators the constant drops from 4 to 1 and the distance
# product equals the product of spectral disc radii.
u = gk.generate(gk.ZooSpec("normal", 4, seed=8))
v = gk.generate(gk.ZooSpec("normal", 4, seed=9))
print()
print(gk.normal_chain(u, v, p).table())

# %%
# Non-normal input is refused with the measured residual.
try:
    gk.normal_chain(gk.fixture("jordan2"), gk.fixture("jordan2"), gk.DensityOperator.maximally_mixed(2))
except gk.PreconditionError as exc:
    print("\nrefused:", exc)

# %%
# The same inequality with T = A^{-1} and a pure state gives the
# Kantorovich inequality, tight for diag(1, 4) and x = (1, 1)/sqrt(2).
print("\nKantorovich:", gk.kantorovich_check(gk.fixture("kantorovich_tight"), gk.fixture("kantorovich_vector")))

# %%
# A weaker bound built from P-weighted Hilbert-Schmidt norms.
mid, out = gk.dragomir_bound(a, t, p, 0.3, -0.2j)
print(f"\n|V_P| = {abs(gk.v_p(a, t, p)):.6f} <= {mid:.6f} <= {out:.6f}")
