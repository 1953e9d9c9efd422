"""
How far is a matrix from the scalars?
=====================================

dist(A) = min over complex lambda of ||A - lambda I||.  The minimiser c(A)
is unique.  This script computes it three ways and compares them.
"""

import numpy as np

import grusskit as gk

# %%
# For Hermitian matrices the answer is explicit: c = (max eig + min eig) / 2
# and dist = (max eig - min eig) / 2.
d13 = gk.fixture("diag13")
res = gk.dist_to_scalars(d13)
print(f"diag(1,3): c = {res.c:.6f}, dist = {res.d:.6f}")

# %%
# The same number comes out of a maximisation on the unit sphere:
# dist(A)^2 = max ||Ax||^2 - |<Ax, x>|^2, the largest variance of A in a
# pure state.  The maximising vector is returned too.
sph = gk.dist_sphere(d13)
print("sphere route:", sph.d, "at x =", np.round(sph.x, 4))

# %%
# For a random non-normal matrix the direct minimisation and the sphere
# ascent are independent algorithms.  They agree to solver accuracy.
a = gk.generate(gk.ZooSpec("ginibre", 5, seed=1))
direct, sphere = gk.dist_to_scalars(a), gk.dist_sphere(a)
print(f"random 5x5: direct {direct.d:.12f}  sphere {sphere.d:.12f}")

# %%
# Two more characterisations give lower bounds that reach the distance:
# half the largest commutator norm ||AX - XA|| over unit X, and the largest
# ||(I - Q) A Q|| over rank-one projections Q.
ch = gk.dist_characterizations(a, gk.DEFAULT_SETTINGS.replace(restarts=64))
print(f"commutator / 2: {ch.commutator_half_sup:.10f}   rank-one projection: {ch.rank_one_proj_sup:.10f}")

# %%
# The same machinery works for a general line {lambda T}.  With T = diag(1, 2)
# and A = I, the best lambda balances |1 - lambda| and |1 - 2 lambda|.
line = gk.dist_to_line(np.eye(2), np.diag([1.0, 2.0]))
print(f"dist(I, C diag(1,2)) = {line.d:.8f} at lambda = {line.c:.8f}")
