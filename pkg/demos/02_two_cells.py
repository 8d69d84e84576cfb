"""2-cells over a crossed module and the interchange law.

A 2-cell is a pair (g, h) pointing from the group element g to t(h)g.
Cells stack vertically when the arrows match and sit side by side
horizontally without any condition.  The interchange law says the two
ways of flattening a 2x2 pasting diagram agree; it is equivalent to the
Peiffer identity, so breaking Peiffer breaks interchange.
"""

from twogauge import (
    TwoCell,
    check_interchange,
    crossed_module,
    eckmann_hilton_probe,
)

cm = crossed_module("CONJ(S3)")
f = TwoCell(cm, 3, 1)
g = TwoCell(cm, f.target, 2)

print(f"f = {f.label()}  from {cm.G.label(f.source)} to {cm.G.label(f.target)}")
print(f"g = {g.label()}  from {cm.G.label(g.source)} to {cm.G.label(g.target)}")
print(f"f stacked with g: {f.vertical(g).label()}")
print(f"f beside g:       {f.horizontal(g).label()}")
print(f"f undone:         {f.vertical(f.vertical_inverse()).label()}")
print()

for name in ["CONJ(S3)", "FLIP(Z3)", "GERBE(Z2)"]:
    rep = check_interchange(crossed_module(name), mode="exhaustive")
    check = rep.check("interchange")
    print(f"{name}: interchange {check.verdict} over {check.detail}")
print()

# With a trivial base group every 2-cell is a loop at the identity, and
# interchange would force H to be commutative.  The probe hunts for a
# pair of cells whose two pasting orders disagree.
broken = crossed_module("PEIFFER_BROKEN(S3)")
rep = eckmann_hilton_probe(broken)
check = rep.check("pastings-agree")
print(f"{broken.name}: {check.verdict}")
print(f"    witness: {check.witness}")
print("    a trivial base forces commutativity, and S3 refuses")
