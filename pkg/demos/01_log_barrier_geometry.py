# %% [markdown]
# # Log-barrier geometry on the simplex
#
# The bandit player runs FTRL with the log-barrier regularizer
# F(q) = sum_i [log(1/n) - log q_i].  This notebook looks at the pieces that
# make it work: the Bregman divergence, the normalization constant, and the
# per-round mixability gap.

# %%
import numpy as np

from sfbandit.potential import LOG_BARRIER, bregman, dual_bregman
from sfbandit.simplex import ftrl_iterate, mixability_gap, solve_lambda, stability_bound

# %% [markdown]
# The scalar divergence is y/x - 1 - log(y/x).  Working in the dual, with
# u = -1/x, gives the same number.

# %%
print(bregman(LOG_BARRIER, 0.25, 0.5))
print(dual_bregman(LOG_BARRIER, -2.0, -4.0))

# %% [markdown]
# An FTRL iterate is psi(theta + lam) with psi(u) = -1/u and lam chosen so the
# coordinates sum to one.  For theta = (0, -1) the constant is the negative
# golden ratio.

# %%
lam = solve_lambda(LOG_BARRIER, [0.0, -1.0])
print(lam, (-1 - np.sqrt(5)) / 2)
print(ftrl_iterate(LOG_BARRIER, 1.0, [0.0, 1.0]))

# %% [markdown]
# The mixability gap prices one FTRL step.  Under the log-barrier it never
# exceeds (eta/2) p.l^2, and this holds for negative and very large losses as well.

# %%
p = np.array([0.7, 0.2, 0.1])
for loss in ([1.0, 0.0, 0.0], [0.0, 0.0, -50.0], [3.0, -2.0, 0.5]):
    m = mixability_gap(LOG_BARRIER, p, loss, 0.5)
    print(loss, round(m, 6), "<=", round(stability_bound(p, loss, 0.5), 6))
