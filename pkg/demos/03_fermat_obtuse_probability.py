# %% [markdown]
# How likely is a Fermat-obtuse triangle?
#
# A triangle is Fermat-obtuse when its largest angle is at least 120 degrees.
# The area of that region can be integrated in two ways. The closed
# integral over X = cos(theta) in [0, 1/2] gives one number. Quadrature over
# the actual region {alpha_max >= 2pi/3} gives another. Sampling decides.

# %%
import math

from shapesphere import measure, montecarlo

alpha = 2 * math.pi / 3

# %%
lit = measure.paper_literal_area(alpha)
reg = measure.region_area(alpha)
print(f"X-integral area  {lit.value:.6f}  ->  p = {3 * lit.value / (4 * math.pi):.6f}")
print(f"region area      {reg.value:.6f}  ->  p = {3 * reg.value / (4 * math.pi):.6f}")

# %%
est = montecarlo.estimate(montecarlo.fermat_obtuse(), montecarlo.McConfig(n=1_000_000, seed=0, workers=4))
print(f"Monte Carlo      p = {est.p_hat:.6f} +- {est.stderr:.6f}")

# %%
# the region value and the sampled value agree; the X-integral one does not
p_reg = 3 * reg.value / (4 * math.pi)
print("z(region) =", round((p_reg - est.p_hat) / est.stderr, 2))
print("z(X-integral) =", round((3 * lit.value / (4 * math.pi) - est.p_hat) / est.stderr, 1))

# %%
# the whole curve Prob(alpha_max >= alpha) for obtuse thresholds
for deg in range(90, 181, 15):
    p = measure.prob_alpha_obtuse(math.radians(deg)).p
    print(f"{deg:4d} deg  {p:.6f}")
