"""Gamma sets, the covering (KKM) condition and the finite intersection property.

Gamma_{T - x*}(y) is the polyhedron {x : <y* - x*, y - x> >= 0 for all y* in T(y)}.
For base points A, (KKM) asks that the hull [A] be covered by the Gamma
sets, and (FIP) that [A] meet their intersection. Both are decided by
small linear programs.
"""
# %%
import numpy as np

from mintykit import (OperatorGraph, build_gamma_system, check_fip, check_kkm,
                      constructive_fip, fip_property, kkm_property)
from mintykit.randgen import linear_graph

witness = OperatorGraph.single_valued([[0.0], [1.0]], [[0.0], [-1.0]])
sys = build_gamma_system(witness, [0, 1], xstar=[-0.5])
for x, poly in zip(sys.base_points, sys.polyhedra):
    h = poly.constraints[0]
    print(f"Gamma({x[0]:g}): {h.normal[0]:+g} x >= {h.offset:+g}")

k = check_kkm(sys)
print("KKM holds:", k.holds, "| uncovered point:", k.point, "| margin:", k.slack)
print("FIP feasible:", check_fip(sys).feasible)

# %% both properties are about every sub-collection of A
# Samples of -x at x* = 0: Gamma(0) is the whole line, so [A] is covered,
# but Gamma(-1) and Gamma(1) are disjoint rays.
neg = OperatorGraph.single_valued([[-1.0], [0.0], [1.0]], [[1.0], [0.0], [-1.0]])
sys = build_gamma_system(neg, [0, 1, 2], [0.0])
print("\nsingle A:   KKM", check_kkm(sys).holds, " FIP", check_fip(sys).feasible)
kp, fp = kkm_property(sys), fip_property(sys)
print("all subsets: KKM", kp.holds, f"(fails on {kp.subset})",
      " FIP", fp.holds, f"(fails on {fp.subset})")

# %% constructive route: induction on |A| plus a minimax over conv{y_j}
S = np.array([[0.0, 1.0], [-1.0, 0.0]])
square = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
rot = linear_graph(square, S)
xstar = np.array([0.3, -0.2])
sys = build_gamma_system(rot, range(4), xstar)
stats = {}
y = constructive_fip(sys, stats=stats)
print("\nrotation: constructive point", y, "stats", stats)
print("          zero of T - x*     ", np.linalg.solve(S, xstar))
print("          LP witness         ", check_fip(sys).witness)
