"""SVG pictures of Gamma coverage for 2-D instances.

Green cells of [A] lie in some Gamma set, red ones in none. Dashed lines
are Gamma boundaries, the blue dot is the FIP witness and the red cross
the KKM counterexample. Files go to demos/out/.
"""
# %%
import pathlib

import numpy as np

from mintykit import OperatorGraph, generate, GenSpec, is_monotone, construct_witness
from mintykit.render import render_coverage

out = pathlib.Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

T = generate(GenSpec(dim=2, num_points=4, family="convex_gradient", seed=2))
(out / "monotone.svg").write_text(render_coverage(T, np.zeros(2), title="convex gradient"))

# %% the witness instance lifted to the plane, with an extra point off the segment
W = OperatorGraph.single_valued([[0, 0], [1, 0], [0.5, 0.8]],
                                [[0, 0], [-1, 0], [0, 0.4]])
w = construct_witness(is_monotone(W).violation.pair)
(out / "witness.svg").write_text(render_coverage(W, w.zstar, title="witness shift"))
print("wrote", sorted(p.name for p in out.glob("*.svg")))
