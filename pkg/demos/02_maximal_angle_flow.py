# %% [markdown]
# Level sets of the largest angle
#
# alpha_max is pi/3 only at the two equilateral shapes. Acute level sets are
# small cusped loops around them, alpha = pi/2 gives the three right-angle
# circles, and obtuse level sets run between the binary collisions.

# %%
import math
import sys
from pathlib import Path

from shapesphere import anglelaw, figure, flow, shapemap

# %%
for deg in (60, 75, 90, 120, 150, 180):
    c = flow.assemble_max_angle_contour(math.radians(deg), 128)
    print(f"{deg:4d} deg  regime={c.regime:<12} arcs={len(c.arcs)}  cusps={len(c.cusps)}"
          f"  limit points={len(c.excluded_limit_points)}  crossings={len(c.intersections)}")

# %%
# cusps: two apex angles tie there
c = flow.assemble_max_angle_contour(math.radians(75))
for p in c.cusps[:2]:
    print("cusp", round(p.theta, 6), round(p.phi, 6), "angles (deg):",
          [round(math.degrees(a), 6) for a in anglelaw.angles_array(p.theta, p.phi)])

# %%
# around E the field rises in every direction; around a binary collision the ring changes class four times
e = flow.probe_critical_point(shapemap.special_point("E"))
b = flow.probe_critical_point(shapemap.special_point("B", 1))
print("E ring min - pi/3:", e.alpha_max.min() - math.pi / 3)
print("B1 ring crossings:", b.crossings, b.sectors)

# %%
# the figure, seen from the equilateral shape E and from the collinear shape U1
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(".")
for name in ("E", "U1"):
    svg = figure.flow_figure(view_axis=shapemap.embed(shapemap.special_points()[name]))
    (out / f"flow_{name}.svg").write_text(svg)
    print("wrote", out / f"flow_{name}.svg")
