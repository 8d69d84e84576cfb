"""Crossed modules: the catalog, the axioms, and a deliberate failure.

A crossed module packs two groups G and H, a boundary map t: H -> G,
and an action of G on H.  Two axioms tie the data together: t must be
equivariant for the action, and the action of t(h) must be conjugation
by h (the Peiffer identity).  Everything here is checked exhaustively
because the shipped examples are small finite groups.
"""

from twogauge import (
    crossed_module,
    differential_consistency,
    peiffer_violating_fixture,
    shipped_finite_names,
    shipped_matrix_names,
    validate_crossed_module,
)

print("shipped finite modules:", ", ".join(shipped_finite_names()))
print("shipped matrix modules:", ", ".join(shipped_matrix_names()))
print()

for name in ["CONJ(S3)", "FLIP(Z3)", "GERBE(Z5)"]:
    cm = crossed_module(name)
    rep = validate_crossed_module(cm, mode="exhaustive")
    print(f"{name}: |G| = {cm.G.order}, |H| = {cm.H.order}, "
          f"verdict {rep.to_dict()['verdict']}")
    for check in rep.checks:
        print(f"    {check.verdict:4s} {check.name}")
    print()

# The fixture keeps a genuine action but pairs it with the wrong
# boundary, so equivariance holds while the Peiffer identity cannot.
bad = peiffer_violating_fixture()
rep = validate_crossed_module(bad, mode="exhaustive")
failing = rep.failures[0]
print(f"{bad.name}: verdict {rep.to_dict()['verdict']}")
print(f"    first failing check: {failing.name}, witness {failing.witness}")
print()

# Matrix modules get a differential layer; coarse finite differences
# confirm that dt and the algebra action are the derivatives of t and
# alpha (a sanity bound, not a convergence claim).
su2 = crossed_module("CONJ(SU2)")
rep = differential_consistency(su2)
print(f"{su2.name}: differential layer, verdict {rep.to_dict()['verdict']}")
for check in rep.checks:
    print(f"    {check.verdict:4s} {check.name}  "
          f"residual {check.residual:.2e} (bound {check.tolerance:g})")
