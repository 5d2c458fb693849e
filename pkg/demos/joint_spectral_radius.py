# %% [markdown]
# # Joint spectral radius three ways
#
# For the positive pair A1 = [[2,1],[1,1]], A2 = [[1,1],[1,2]] the periodic
# bound, the brute-force bound and the thermodynamic estimate all meet at
# rho(A1) = (3 + sqrt 5)/2.

# %%
import numpy as np

from thermo_opt import MatrixCocycle, brute_force_jsr, thermo_jsr

pair = MatrixCocycle([[[2, 1], [1, 1]], [[1, 1], [1, 2]]])
r = thermo_jsr(pair)
print("periodic", r.periodic_lower, r.periodic.word)
print("thermo  ", r.thermo, r.thermo_bracket)
print("brute   ", r.brute_upper, "estimate", r.brute.estimate)
print("ordering", r.verdict)

# %% [markdown]
# The raw brute-force maxima rho_n converge slowly. The ratio of
# consecutive maxima is much sharper.

# %%
b = brute_force_jsr(pair, n_max=12)
print(np.round(b.values, 4))

# %% [markdown]
# The golden-ratio pair is only nonnegative. Its almost-additivity constant
# is empirical, so the thermodynamic value is shown as a diagnostic.

# %%
golden = MatrixCocycle([[[1, 1], [0, 1]], [[1, 0], [1, 1]]])
g = thermo_jsr(golden, schedule=(1, 2, 4, 8, 16))
print(g.periodic, g.thermo, g.certified)
