# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Step graphons
#
# A graph on `n` vertices embeds as a step function on `n` equal intervals.
# With zero diagonal blocks the centered operator norm of the embedding is the
# matrix norm over `n`. Padding the diagonal with `p` moves it by at most `p/n`.

# %%
import numpy as np

from spectral_ldp import constructions as cons
from spectral_ldp import core, graphon

g = cons.build_clique(50, 0.1, 1.0).graph
hat, pad = graphon.embed(g, 0.1), graphon.embed(g, 0.1, "padded")
print(50 * hat.shift(0.1).opnorm(), core.centered_opnorm(g, 0.1), (pad - hat).opnorm())

# %% [markdown]
# ## Degree thresholding
#
# Splitting vertices by degree separates the hub-like part of a kernel from
# the rest. The cycle density splits into alternating high/low placements
# and all-low placements.

# %%
u = graphon.embed(cons.build_anticlique(60, 0.1, 0.5, z=4 / 0.6).graph, 0.1).shift(0.1)
u = graphon.StepGraphon(np.clip(u.values, 0, None))
for prof in graphon.scan_b(u, graphon.geometric_b_grid(0.05, 0.5, 5), 0.5, 0.1, s=4):
    print(f"b={prof.b:.3f}  mass={prof.B_mass:.3f}  theta={prof.theta_b:.3f}  eta={prof.eta_b:.3f}")

# %% [markdown]
# The final optimisation step minimises `x + y/2` subject to
# `2 x^{s/2} + y^{s/2} >= 1`; the minimum `1/2` sits on the `x = 0` axis.

# %%
for s in range(2, 13, 2):
    r = graphon.convex_min_split(s)
    print(s, r.value, (r.x, r.y), round(r.y_axis_value, 4))
