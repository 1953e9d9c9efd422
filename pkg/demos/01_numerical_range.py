"""
Numerical ranges and their smallest enclosing discs
===================================================

The numerical range W(A) = {<Ax, x> : |x| = 1} is a compact convex set
containing the spectrum.  Every bound in grusskit is phrased through the
smallest disc around W(A); this script shows how that disc is found and
how it relates to the spectrum, the numerical radius and the norm.
"""

import numpy as np

import grusskit as gk

np.set_printoptions(precision=4, suppress=True)

# %%
# A Hermitian matrix has a segment as numerical range: W(diag(1, 3)) = [1, 3].
# Its smallest disc has center 2 and radius 1.
d13 = gk.fixture("diag13")
print("W(diag(1,3)) disc:", gk.numerical_range_disc(d13))

# %%
# The nilpotent Jordan block J2 has spectrum {0} but its numerical range is
# the closed disc of radius 1/2.  The spectrum says nothing about how far
# W(A) reaches, which is why the bounds use W(A) rather than sigma(A).
j2 = gk.fixture("jordan2")
print("spectrum of J2:", gk.spectrum(j2))
print("w(J2) =", gk.numerical_radius(j2), " ||J2|| =", gk.spectral_norm(j2))
print("disc around W(J2):", gk.numerical_range_disc(j2))

# %%
# The boundary of W(A) is traced by the top eigenvectors of the rotated
# Hermitian parts cos(t) Re A + sin(t) Im A.  Here are a few boundary points
# for a random 4x4 matrix and the disc that encloses them.
a = gk.generate(gk.ZooSpec("ginibre", 4, seed=3))
pts = gk.numerical_range_boundary(a, gk.DEFAULT_SETTINGS.replace(grid_angles=12))
print("boundary samples:", pts)
disc = gk.numerical_range_disc(a)
print("disc:", disc, " all inside:", disc.contains(pts, 1e-10))

# %%
# The classical chain r(A) <= w(A) <= ||A|| <= 2 w(A), checked on a few draws.
for fam in ("ginibre", "jordan", "haar_unitary"):
    m = gk.generate(gk.ZooSpec(fam, 5, seed=11, perturbation=0.1 if fam == "jordan" else 0.0))
    r, w, n = gk.spectral_radius(m), gk.numerical_radius(m), gk.spectral_norm(m)
    print(f"{fam:<13} r={r:.4f}  w={w:.4f}  ||A||={n:.4f}  2w={2 * w:.4f}")
