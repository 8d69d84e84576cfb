"""The expression DSL and Lie-algebra-valued differential forms.

Forms carry their coefficients as exact symbolic expressions, so the
exterior derivative is computed by differentiating text, not by finite
differences.  The payoff: a connection pair (A, B) can be checked for
fake flatness to machine precision.
"""

import numpy as np

from twogauge import (
    FormField,
    crossed_module,
    differentiate,
    fake_curvature_form,
    parse,
    three_curvature,
    to_text,
)

e = parse("x1 ^ 2 * sin(x2) + exp(0.5 * x1)")
print("expression      ", to_text(e))
print("d/dx1           ", to_text(differentiate(e, 1)))
print("d/dx2           ", to_text(differentiate(e, 2)))
print()

su2 = crossed_module("CONJ(SU2)")
alg = su2.H.algebra

# A fake-flat pair: B is chosen so that dA + A ^ A + dt(B) cancels.
A = FormField.from_config(alg, 1, 2, {
    "1,1": "x2", "2,2": "sin(x1)", "3,1": "x1 * x2"})
B = FormField.from_config(alg, 2, 2, {
    "1,12": "1 + x1 * x2 * sin(x1)", "2,12": "-cos(x1)",
    "3,12": "x1 - x2 * sin(x1)"})

dA = A.d()
print("A components    ", sorted(A.text_components().items()))
print("dA components   ", sorted(dA.text_components().items()))

fake = fake_curvature_form(su2, A, B)
pts = [np.array([0.3, 0.7]), np.array([-0.5, 0.2]), np.array([0.9, -0.8])]
worst = fake.max_abs_on_grid(pts)
print(f"fake curvature sup over sample points: {worst:.2e}")

H3 = three_curvature(su2, A, B)
print("3-curvature in dimension 2 is structurally zero:",
      H3.is_structurally_zero)
