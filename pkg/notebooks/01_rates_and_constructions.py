# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Rates and planted constructions
#
# The upper tail of the top eigenvalue of a sparse random graph is driven by
# one of two planted structures: a clique of size about `(1+delta) n p`, or a
# hub of about `delta(1+delta) n p^2` vertices joined to everything. Their
# entropy costs, in units of `n^2 p^2 log(1/p)`, are `(1+delta)^2 / 2` and
# `delta (1+delta)`. The cheaper one wins.

# %%
import numpy as np

from spectral_ldp import constructions as cons
from spectral_ldp import rates

np.set_printoptions(precision=4)

for delta in (0.25, 0.5, 0.99, 1.0, 1.01, 2.0, 4.0):
    r = rates.rate_lambda1(delta)
    print(f"delta={delta:5.2f}  rate={r.value:.4f}  branch={r.branch}")

# %% [markdown]
# ## The cycle route
#
# Bounding `lambda1^s` by the `s`-cycle count leads to the root of
# `P_{C_s}(theta) = (1+delta)^s`, where `P_{C_s}` is the independence polynomial
# of the cycle. As `s` grows the root tends to `delta(1+delta)`.

# %%
print(rates.indpoly_recursive(8).coeffs)
for s, th in rates.theta_sequence(1.0, rates.even_range(4, 24)):
    print(s, round(th, 6))

# %% [markdown]
# ## Constructions at finite size
#
# The clique certificate is a Rayleigh quotient against the uniform vector on
# the clique. The hub certificate uses `v = (1, .., 1, (1+delta)p, ..)`. Both
# are checked against an independent eigensolve.

# %%
c = cons.build_clique(100, 0.1, 1.0)
rep = cons.certify(c)
print(c.planted, rep.rayleigh, rep.eigensolve, c.entropy.normalized)

# %%
# near the crossover the cheaper construction flips
n, p = 10**5, 0.01
for delta in (0.5, 0.9, 1.1, 2.0):
    ec = cons.build_clique(n, p, delta).entropy.normalized
    ea = cons.build_anticlique(n, p, delta).entropy.normalized
    print(f"delta={delta}: clique {ec:.3f}  hub {ea:.3f}")

# %% [markdown]
# At `p = 1e-3` the hub needs about `10^8` vertices before its size reaches a
# few dozen. The two-block quotient certifies it without forming the matrix.

# %%
h = cons.build_anticlique(133_333_333, 1e-3, 0.5)
print(h.planted, h.z, cons.certify(h))
