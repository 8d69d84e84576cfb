"""2-cells over a crossed module: pasting operations and coherence checks.

A cell is a pair (g, h) with source g and target t(h) g. Vertical pasting
stacks cells along a shared 1-arrow; horizontal pasting runs them side by
side. The interchange identity relating the two is equivalent to the Peiffer
axiom, so `check_interchange` doubles as an independent axiom probe.
"""

from .errors import CompositionError, GroupDomainError
from .report import ValidationReport
from .crossed import EXHAUSTIVE_INTERCHANGE_BUDGET

import numpy as np


class TwoCell:
    """Pair (g, h): a 2-arrow from g to t(h) g."""

    __slots__ = ("cm", "g", "h")

    def __init__(self, cm, g, h):
        self.cm = cm
        self.g = cm.G.renormalize(cm.G._check(g))
        self.h = cm.H.renormalize(cm.H._check(h))

    @classmethod
    def identity(cls, cm, g):
        return cls(cm, g, cm.H.identity)

    @property
    def source(self):
        return self.g

    @property
    def target(self):
        return self.cm.G.mul(self.cm.t(self.h), self.g)

    def vertical(self, other, tol=None):
        """Paste `other` on top: defined when other.source == self.target.

        `tol` loosens the matching check for numerically produced cells.
        """
        if other.cm is not self.cm:
            raise CompositionError("cells live over different crossed modules")
        matches = (self.cm.G.eq(other.source, self.target) if tol is None
                   else self.cm.G.eq(other.source, self.target, tol))
        if not matches:
            raise CompositionError("vertical pasting needs matching 1-arrows",
                                   source=self.cm.G.label(other.source),
                                   target=self.cm.G.label(self.target))
        return TwoCell(self.cm, self.g, self.cm.H.mul(other.h, self.h))

    def horizontal(self, other):
        """Side-by-side pasting: (g1, h1) then (g2, h2) gives
        (g1 g2, h1 * alpha(g1)(h2))."""
        if other.cm is not self.cm:
            raise CompositionError("cells live over different crossed modules")
        cm = self.cm
        return TwoCell(cm, cm.G.mul(self.g, other.g),
                       cm.H.mul(self.h, cm.alpha(self.g, other.h)))

    def vertical_inverse(self):
        cm = self.cm
        return TwoCell(cm, self.target, cm.H.inv(self.h))

    def horizontal_inverse(self):
        cm = self.cm
        gi = cm.G.inv(self.g)
        return TwoCell(cm, gi, cm.alpha(gi, cm.H.inv(self.h)))

    def whisker_left(self, g0):
        """Pre-compose with the identity cell on g0."""
        return TwoCell.identity(self.cm, g0).horizontal(self)

    def whisker_right(self, g0):
        """Post-compose with the identity cell on g0."""
        return self.horizontal(TwoCell.identity(self.cm, g0))

    def eq(self, other, tol=None):
        cm = self.cm
        if tol is None:
            return cm.G.eq(self.g, other.g) and cm.H.eq(self.h, other.h)
        return cm.G.eq(self.g, other.g, tol) and cm.H.eq(self.h, other.h, tol)

    def label(self):
        return f"({self.cm.G.label(self.g)}, {self.cm.H.label(self.h)})"

    def __repr__(self):
        return f"<TwoCell {self.label()}>"


def _interchange_case(cm, g1, g2, h1, h2, h3, h4, tol):
    """Both pasting orders of the 2x2 diagram built from the six parameters."""
    f1 = TwoCell(cm, g1, h1)
    f2 = TwoCell(cm, f1.target, h2)
    f3 = TwoCell(cm, g2, h3)
    f4 = TwoCell(cm, f3.target, h4)
    lhs = f1.vertical(f2).horizontal(f3.vertical(f4))
    rhs = f1.horizontal(f3).vertical(f2.horizontal(f4))
    return lhs.eq(rhs) if tol is None else lhs.eq(rhs, tol)


def check_interchange(cm, mode="auto", samples=200, seed=42, tol=None):
    """Interchange law over a 2x2 pasting grid.

    Exhaustive when |G|^2 |H|^4 <= 10^8 (finite pairs); otherwise sampled.
    Failure witnesses name the six generating elements.
    """
    G, H = cm.G, cm.H
    rep = ValidationReport(f"interchange: {cm.name}")
    exhaustive = (cm.is_finite
                  and G.order ** 2 * H.order ** 4 <= EXHAUSTIVE_INTERCHANGE_BUDGET)
    if mode == "exhaustive" and not exhaustive:
        raise GroupDomainError("exhaustive interchange not available for this pair")
    if mode == "sampled":
        exhaustive = False

    if exhaustive:
        cases = ((g1, g2, h1, h2, h3, h4)
                 for g1 in G.elements() for g2 in G.elements()
                 for h1 in H.elements() for h2 in H.elements()
                 for h3 in H.elements() for h4 in H.elements())
        total = G.order ** 2 * H.order ** 4
        case_tol = None
    else:
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        cases = ((G.random(rng), G.random(rng), H.random(rng),
                  H.random(rng), H.random(rng), H.random(rng))
                 for _ in range(samples))
        total = samples
        case_tol = tol if tol is not None else 1e-9

    worst = None
    bad = 0
    for g1, g2, h1, h2, h3, h4 in cases:
        if not _interchange_case(cm, g1, g2, h1, h2, h3, h4, case_tol):
            bad += 1
            if worst is None:
                worst = {"g1": G.label(g1), "g2": G.label(g2),
                         "h1": H.label(h1), "h2": H.label(h2),
                         "h3": H.label(h3), "h4": H.label(h4)}
    rep.add("interchange", bad == 0, witness=worst,
            detail=f"{total - bad}/{total} cases"
                   + (" (exhaustive)" if exhaustive else " (sampled)"))
    return rep


def eckmann_hilton_probe(cm, samples=100, seed=42):
    """With trivial G the two pastings force H to commute.

    Vertical pasting of (1, h1) then (1, h2) yields (1, h2 h1); horizontal
    yields (1, h1 h2). The probe reports whether they agree, with a
    noncommuting witness pair when they do not.
    """
    if cm.G.kind == "finite":
        if cm.G.order != 1:
            raise GroupDomainError("probe needs a trivial 1-arrow group")
    elif not cm.G.trivial:
        raise GroupDomainError("probe needs a trivial 1-arrow group")
    H = cm.H
    rep = ValidationReport(f"eckmann-hilton: {cm.name}")
    if H.kind == "finite":
        pairs = [(h1, h2) for h1 in H.elements() for h2 in H.elements()]
    else:
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        pairs = [(H.random(rng), H.random(rng)) for _ in range(samples)]
    witness = None
    commutes = True
    e = cm.G.identity
    for h1, h2 in pairs:
        a = TwoCell(cm, e, h1)
        b = TwoCell(cm, e, h2)
        vert = a.vertical(b)
        horiz = a.horizontal(b)
        if not vert.eq(horiz):
            commutes = False
            if witness is None:
                witness = {"h1": H.label(h1), "h2": H.label(h2),
                           "vertical": vert.label(), "horizontal": horiz.label()}
            break
    rep.add("pastings-agree", commutes, witness=witness,
            detail="vertical (1, h2 h1) vs horizontal (1, h1 h2)")
    return rep
