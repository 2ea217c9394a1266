"""Minty variational inequalities and the converse-Minty witness.

MVI(T, x*) over K: find xbar in K with <y* - x*, y - xbar> >= 0 for every
graph pair with y in K. For monotone T every finite subsystem is solvable;
for a violating pair an explicit shift z* makes a two-point MVI unsolvable.
"""
# %%
import numpy as np

from mintykit import (GenSpec, MVIProblem, VPolytope, classify_via_mvi,
                      construct_witness, generate, is_monotone, solve_finite_mvi,
                      solve_mvi)

T = generate(GenSpec(dim=3, num_points=8, family="psd_linear", seed=4))
rng = np.random.Generator(np.random.PCG64(0))
for _ in range(3):
    xstar = rng.normal(size=3)
    r = solve_finite_mvi(T, [0, 2, 5, 7], xstar)
    print("monotone, x* =", np.round(xstar, 2), "->", r.status.value,
          "xbar =", np.round(r.witness, 3))

# %% a non-monotone graph and its witness shift
bad = generate(GenSpec(dim=2, num_points=6, family="perturbed", magnitude=2.0, seed=3))
v = is_monotone(bad)
w = construct_witness(v.violation.pair)
print("\nviolation value", v.violation.value, "on entries", v.violation.entries)
print("z* =", w.zstar, " a =", w.a, " b =", w.b, " delta =", w.delta)
r = solve_mvi(w.problem())
print("two-point MVI at z*:", r.status.value, "conflicting pairs", r.certificate)

# %% over a larger K
K = VPolytope(bad.points)
print("MVI over the hull of all points at z*:", solve_mvi(MVIProblem(bad, w.zstar, K)).status.value)

# %% the combined decision procedure
print("\nclassify psd_linear:", classify_via_mvi(T, 25, rng).holds)
print("classify perturbed: ", classify_via_mvi(bad, 25, rng).holds)
