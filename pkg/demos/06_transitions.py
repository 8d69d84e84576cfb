"""Gluing local connection data across charts.

On an overlap the two charts' (A, B) pairs must be related by a group
map g and a correction 1-form a.  `transform_connection` produces the
rewritten pair; the law checker then verifies both the connection law
and the curvature law at sample points.  Small corruptions of the
transition data light up immediately.
"""

import numpy as np

from twogauge import (
    ExpParamMap,
    FormField,
    LocalConnection,
    check_transition_laws,
    crossed_module,
    load_scenario,
    transform_connection,
)

su2 = crossed_module("CONJ(SU2)")
scn = load_scenario("su2_charts.scn")
right = LocalConnection(su2, scn.forms["A"], scn.forms["B"])
gmap, a_form = scn.gmap, scn.a_form

left = transform_connection(su2, right, gmap, a_form)
points = [np.array([0.15, 0.35]), np.array([0.5, 0.6]),
          np.array([0.85, 0.2])]

rep = check_transition_laws(su2, left, right, gmap, a_form, points, tol=1e-9)
print("constructed overlap:")
for check in rep.checks:
    print(f"    {check.verdict:4s} {check.name}  residual {check.residual:.2e}")
print()

bumped = FormField.from_config(su2.H.algebra, 1, 2,
                               {"1,1": "0.2 * x2 + 0.01", "2,2": "0.1 * x1"})
rep = check_transition_laws(su2, left, right, gmap, bumped, points, tol=1e-9)
print(f"one a-component bumped by 0.01: verdict {rep.to_dict()['verdict']}, "
      f"max residual {rep.max_residual:.2e}")

tilted = ExpParamMap.from_exprs(su2.G, 2,
                                ["0.3 * x1", "0.2 * x2",
                                 "0.1 * x1 * x2 + 0.01"])
rep = check_transition_laws(su2, left, right, tilted, a_form, points,
                            tol=1e-9)
print(f"one g-exponent bumped by 0.01:  verdict {rep.to_dict()['verdict']}, "
      f"max residual {rep.max_residual:.2e}")
