"""Surface holonomy: transporting bigons when fake curvature vanishes.

The surface integrator refuses nothing, but its output is only a
well-defined 2-cell when the fake curvature F_A + dt(B) vanishes.  On a
fake-flat pair the cell's target reproduces the holonomy of the target
path; on a non-flat pair that target law visibly breaks, which is the
whole point of the dichotomy.
"""

import numpy as np

from twogauge import (
    LocalConnection,
    crossed_module,
    load_scenario,
    shipped_bigon,
    surface_holonomy,
)

square = shipped_bigon("unit-square")

# Abelian warm-up: with a trivial base group the answer is a plain
# surface integral, here exp(-1.5 i) over the unit square.
gerbe = crossed_module("GERBE(U1)")
scn = load_scenario("abelian_square.scn")
conn = LocalConnection(gerbe, scn.forms["A"], scn.forms["B"])
res = surface_holonomy(conn, square, grid=128)
h = complex(np.asarray(res.cell.h).ravel()[0])
print(f"abelian square: h = {h:.8f}")
print(f"               vs exp(-1.5i) = {np.exp(-1.5j):.8f}")
print(f"               difference {abs(h - np.exp(-1.5j)):.2e}")
print()

su2 = crossed_module("CONJ(SU2)")
scn = load_scenario("su2_charts.scn")
flat = LocalConnection(su2, scn.forms["A"], scn.forms["B"])
res = surface_holonomy(flat, square, grid=64)
print("fake-flat su(2) pair on the unit square:")
print(f"    fake-curvature residual {res.fake_residual:.2e}  flat={res.flat}")
print(f"    target-law defect       {res.target_defect:.2e}")
print()

scn = load_scenario("su2_nonflat.scn")
loose = LocalConnection(su2, scn.forms["A"], scn.forms["B"])
res = surface_holonomy(loose, square, grid=64)
print("same A with B = 0 (nothing cancels the curvature):")
print(f"    fake-curvature residual {res.fake_residual:.2e}  flat={res.flat}")
print(f"    target-law defect       {res.target_defect:.2e}")
print("    the defect is the broken surface transport, reported, not hidden")
