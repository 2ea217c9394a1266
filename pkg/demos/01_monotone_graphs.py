"""Finite operator graphs and the two pairwise checks.

A graph is a list of (point, duals) entries. Monotone means
<y* - x*, y - x> >= 0 for every pair; quasimonotone only asks that one of
<x*, x - y>, <y*, y - x> be non-negative.
"""
# %%
import numpy as np

from mintykit import OperatorGraph, is_monotone, is_quasimonotone, shift

# samples of the identity on {0, 1}: the gradient of x^2 / 2
identity = OperatorGraph.single_valued([[0.0], [1.0]], [[0.0], [1.0]])
print("identity monotone:", is_monotone(identity).holds)

# %% samples of 3x^2 (the derivative of x^3) on {-1, 0, 1}
cubic = OperatorGraph.single_valued([[-1.0], [0.0], [1.0]], [[3.0], [0.0], [3.0]])
v = is_monotone(cubic)
print("cubic monotone:", v.holds)
print("  worst pair:", v.violation.x, "->", v.violation.y, "value", v.violation.value)
print("cubic quasimonotone:", is_quasimonotone(cubic).holds)

# %% monotonicity does not care about shifts of the duals...
u = np.array([2.5])
print("shifted cubic monotone:", is_monotone(shift(cubic, u)).holds)

# ...but quasimonotonicity does. Shifting the identity never breaks it,
# while a suitable shift of the cubic does.
for s in (-1.0, 0.0, 1.5):
    print(f"  shift {s:+.1f}: identity quasi={is_quasimonotone(shift(identity, [s])).holds}"
          f"  cubic quasi={is_quasimonotone(shift(cubic, [s])).holds}")

# %% multi-valued entries: every dual selection is checked
multi = OperatorGraph([([0.0], [[0.0], [5.0]]), ([1.0], [[1.0]])])
v = is_monotone(multi)
print("multi-valued:", v.holds, "offending dual indices", v.violation.dual_indices)
