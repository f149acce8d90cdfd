# %% [markdown]
# Right triangles on the shape sphere
#
# A triangle is right-angled at its cluster apex exactly when the cluster's
# theta equals pi/3. So the three families of right triangles are three
# circles, and the obtuse shapes fill the caps inside them.

# %%
import math

import numpy as np

from shapesphere import euclid, measure, montecarlo, shapemap

rng = np.random.default_rng(0)

# %%
# right angle at A: put B and C on a diameter, A anywhere on the circle
n = 5
t = rng.uniform(0.2, math.pi - 0.2, n)
for ti in t:
    tri = euclid.PlanarTriangle((math.cos(ti), math.sin(ti)), (-1.0, 0.0), (1.0, 0.0))
    s = shapemap.shape_coords(tri, 1)
    ang = euclid.vertex_angles(tri)
    print(f"angle at A = {math.degrees(ang.alpha_A):8.4f} deg   theta1 = {s.theta:.15f}   (pi/3 = {math.pi / 3:.15f})")

# %%
# the three caps do not overlap, each covers a quarter of the sphere
cap = measure.cap_area(math.pi / 3).value
print("one cap:", cap, " sphere:", measure.SPHERE_AREA, " ratio:", cap / measure.SPHERE_AREA)
print("Prob(obtuse) =", measure.prob_obtuse().p)

# %%
# the same number by sampling uniform shapes
est = montecarlo.estimate(montecarlo.obtuse(), montecarlo.McConfig(n=400_000, seed=1))
print(f"Monte Carlo: {est.p_hat:.5f} +- {est.stderr:.5f}")
