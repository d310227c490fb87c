"""Rendering instances and solutions as SVG.

Points are disks colored by their color set and edges by the shared colors
of their endpoints: red/blue/yellow primaries, green/orange/purple pairs,
black for all three.  Output is byte-stable for golden-file testing.
"""

from mcsg import core, render
from mcsg.cli import solve_dispatch

inst = core.generate_random(10, 3, 0.4, 21)
sol = solve_dispatch(inst, "a2")
data = render.render_svg(inst, sol)
with open("solution.svg", "wb") as fh:
    fh.write(data)
print(f"wrote solution.svg ({len(data)} bytes), cost {sol.cost:.4f}, "
      f"ratio bound {sol.ratio_bound:.4f}")
assert data == render.render_svg(inst, sol), "rendering must be deterministic"
