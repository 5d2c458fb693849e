# %% [markdown]
# # Zero temperature on the full 2-shift
#
# The potential takes the value 0 on symbol 1 and log 3 on symbol 2. Its
# maximal energy is log 3, attained by the fixed point 2222... As t grows
# the Gibbs approximants concentrate on that orbit.

# %%
import math

from thermo_opt import ScalarPotential, extract_maximiser, full_shift, gurevich_pressure, run_path

shift = full_shift(2)
pot = ScalarPotential([0.0, math.log(3)])

# %% [markdown]
# Pressure has the closed form log(1 + 3^t). The estimate comes with a
# bracket that is sound for every t >= 0.

# %%
for t in (1, 2, 4):
    est = gurevich_pressure(shift, pot, t, 14)
    print(t, est.point, math.log(1 + 3 ** t), est.bracket)

# %% [markdown]
# Along the schedule the energy climbs towards log 3 and the entropy rate
# falls to zero.

# %%
path = run_path(shift, pot, (1, 2, 4, 8, 16, 32))
for r in path:
    print("t=%-4g energy=%.6f entropy=%.3e top=%s" % (r.t, r.energy, r.entropy_rate, r.top_cylinders[0]))

# %%
mx = extract_maximiser(path)
print("alpha", mx.alpha, "bracket", mx.alpha_bracket, "orbit", mx.best_periodic_orbit)
