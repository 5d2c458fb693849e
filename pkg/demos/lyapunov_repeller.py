# %% [markdown]
# # Maximal Lyapunov exponent of a diagonal repeller
#
# Two affine branches with derivatives diag(3, 1.5) and diag(4, 2). The
# first coordinate always dominates, so log s_1 is additive and the
# maximum is log 4 on the fixed point of branch 2.

# %%
import numpy as np

from thermo_opt import RepellerSpec, check_hypotheses, build_cocycle, max_lyapunov

spec = RepellerSpec([np.diag([3.0, 1.5]), np.diag([4.0, 2.0])])
print(check_hypotheses(build_cocycle(spec)))

# %%
res = max_lyapunov(spec)
print("alpha", res.alpha, "log 4", np.log(4))
print("argmax", res.argmax_cylinders[:2])
print("expansion bound", res.expansion_bound)

# %% [markdown]
# A rotation branch fails every hypothesis. With the override the run
# goes through, flagged as uncertified.

# %%
rot = RepellerSpec([[[0, 2], [-2, 0]], [[3, 0], [0, 3]]])
r = max_lyapunov(rot, override=True)
print(r.alpha, r.certified, r.hypotheses.kind)
