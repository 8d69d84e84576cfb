"""Cover nerves, gluing 2-cocycles, and their diagram checkers.

A nerve is purely combinatorial: chart labels plus the declared double,
triple and quadruple overlaps. Gluing data assigns a base-group value g to
each double, a fiber-group value h to each triple, and optionally a unit
corrector k to each chart. All stored fiber values use the right-multiplied
convention

    g_ij g_jk t(h_ijk) = g_ik        and        g_ii t(k_i) = 1,

so the 2-cell carried by a stored value d with source y is (y, alpha(y)(d)),
whose target is y t(d). Only the triangle is checked by its defining
equation; the tetrahedron, unit laws, and the coboundary transform of h are
all computed by generic TwoCell pasting of the corresponding diagrams, so
their meaning is tied to the one set of composition conventions in
twocells.py rather than to hand-expanded formulas. Closed-form versions of
these pastings exist only in the test suite, as independent oracles.

Overlap values may be constants (finite indices or matrices) or point
functions; a nerve can carry sample points per overlap for the latter.
"""

import itertools
from collections import deque

from .errors import BudgetExceeded, CompositionError, ConfigError, TwoGaugeError
from .groups import TAU_GRP
from .report import ValidationReport
from .twocells import TwoCell


def _faces(overlap):
    return [overlap[:m] + overlap[m + 1:] for m in range(len(overlap))]


class CoverNerve:
    """Chart labels with declared double/triple/quadruple overlaps.

    Degenerate overlaps such as (i, i) or (i, i, j) are allowed; they are
    what the unit laws quantify over. Every face of a declared overlap must
    itself be declared.
    """

    def __init__(self, charts, doubles=(), triples=(), quads=(), samples=None):
        self.charts = list(charts)
        if len(set(self.charts)) != len(self.charts):
            raise ConfigError("nerve chart labels must be distinct")
        self.doubles = [tuple(d) for d in doubles]
        self.triples = [tuple(t) for t in triples]
        self.quads = [tuple(q) for q in quads]
        self.samples = {tuple(k): list(v) for k, v in samples.items()} \
            if samples else {}
        problems = []
        known = set(self.charts)
        for group, width in ((self.doubles, 2), (self.triples, 3), (self.quads, 4)):
            for ov in group:
                if len(ov) != width:
                    problems.append(f"overlap {ov} has the wrong arity")
                elif not set(ov) <= known:
                    problems.append(f"overlap {ov} names unknown charts")
        dset, tset = set(self.doubles), set(self.triples)
        for t in self.triples:
            for edge in _faces(t):
                if edge not in dset:
                    problems.append(f"edge {edge} of triple {t} is not a declared double")
        for q in self.quads:
            for face in _faces(q):
                if face not in tset:
                    problems.append(f"face {face} of quad {q} is not a declared triple")
        if problems:
            raise ConfigError(problems)

    def points(self, overlap):
        """Sample points for one overlap; [None] means constant data."""
        return self.samples.get(tuple(overlap), [None])

    @property
    def is_strict(self):
        """True when no overlap repeats a chart label."""
        return all(len(set(ov)) == len(ov)
                   for ov in self.doubles + self.triples + self.quads)

    def __repr__(self):
        return (f"<CoverNerve charts={len(self.charts)} doubles={len(self.doubles)} "
                f"triples={len(self.triples)} quads={len(self.quads)}>")


def _complete(charts, width):
    return list(itertools.combinations(charts, width))


def nerve(name):
    """Shipped combinatorial covers by name."""
    if name == "single-chart":
        return CoverNerve([0])
    if name == "two-charts":
        return CoverNerve([0, 1], doubles=[(0, 1)])
    if name == "triangle":
        return CoverNerve([0, 1, 2], doubles=_complete(range(3), 2),
                          triples=[(0, 1, 2)])
    if name == "sphere":
        # boundary of the solid tetrahedron: all faces, empty interior
        return CoverNerve(range(4), doubles=_complete(range(4), 2),
                          triples=_complete(range(4), 3))
    if name == "tetrahedron":
        return CoverNerve(range(4), doubles=_complete(range(4), 2),
                          triples=_complete(range(4), 3),
                          quads=[(0, 1, 2, 3)])
    if name == "pair-with-units":
        return CoverNerve([0, 1],
                          doubles=[(0, 0), (0, 1), (1, 1)],
                          triples=[(0, 0, 1), (0, 1, 1)])
    raise ConfigError(f"unknown nerve {name!r}; shipped: {', '.join(NERVE_FIXTURES)}")


NERVE_FIXTURES = ["single-chart", "two-charts", "triangle", "sphere",
                  "tetrahedron", "pair-with-units"]


def _eval(value, point):
    if hasattr(value, "at"):
        return value.at(point)
    if callable(value):
        return value(point)
    return value


class GluingCocycle:
    """Transition data over a nerve: g per double, h per triple, k per chart.

    Every declared overlap must have data (checked up front, all omissions
    reported together). Unit correctors k default to the group identity,
    which is the normalized case.
    """

    def __init__(self, cm, nerve, g, h=None, k=None):
        self.cm = cm
        self.nerve = nerve
        self.g = {tuple(key): val for key, val in g.items()}
        self.h = {tuple(key): val for key, val in (h or {}).items()}
        self.k = dict(k) if k else {}
        problems = []
        for d in nerve.doubles:
            if d not in self.g:
                problems.append(f"double {d} has no g value")
        for t in nerve.triples:
            if t not in self.h:
                problems.append(f"triple {t} has no h value")
        for key in self.g:
            if key not in set(nerve.doubles):
                problems.append(f"g value for undeclared double {key}")
        for key in self.h:
            if key not in set(nerve.triples):
                problems.append(f"h value for undeclared triple {key}")
        for key in self.k:
            if key not in set(nerve.charts):
                problems.append(f"k value for unknown chart {key!r}")
        if problems:
            raise ConfigError(problems)

    def g_at(self, pair, point=None):
        return _eval(self.g[tuple(pair)], point)

    def h_at(self, triple, point=None):
        return _eval(self.h[tuple(triple)], point)

    def k_at(self, chart, point=None):
        if chart in self.k:
            return _eval(self.k[chart], point)
        return self.cm.H.identity


def _cell(cm, source, value):
    # the 2-cell from `source` to `source t(value)` carrying stored data
    return TwoCell(cm, source, cm.alpha(source, value))


def _residual(group, x, y):
    if group.kind == "finite":
        return 0.0 if x == y else 1.0
    import numpy as np
    return float(np.linalg.norm(np.asarray(x) - np.asarray(y)))


def _pick(nerve, declared, where, what):
    if where is None:
        return list(declared)
    where = tuple(where)
    if where not in set(declared):
        raise ConfigError(f"{what} {where} is not declared on this nerve")
    return [where]


def check_triangle(data, where=None, tol=TAU_GRP):
    """g_ij g_jk t(h_ijk) = g_ik on each declared (or the given) triple."""
    cm = data.cm
    G = cm.G
    rep = ValidationReport("triangle laws")
    for tri in _pick(data.nerve, data.nerve.triples, where, "triple"):
        i, j, k = tri
        worst, witness = 0.0, None
        for p in data.nerve.points(tri):
            lhs = G.mul(G.mul(data.g_at((i, j), p), data.g_at((j, k), p)),
                        cm.t(data.h_at(tri, p)))
            rhs = data.g_at((i, k), p)
            r = _residual(G, lhs, rhs)
            if r > worst:
                worst, witness = r, {"triple": list(tri), "point": p}
        ok = worst <= (0.0 if G.kind == "finite" else tol)
        rep.add(f"triangle({i},{j},{k})", ok, residual=worst, tolerance=tol,
                witness=None if ok else witness)
    return rep


def _tetra_sides(cm, gv, hv, quad, tol=None):
    """The two pastings around a quadruple; gv/hv map overlaps to values."""
    i, j, k, l = quad
    C_ijk = _cell(cm, cm.G.mul(gv((i, j)), gv((j, k))), hv((i, j, k)))
    C_ikl = _cell(cm, cm.G.mul(gv((i, k)), gv((k, l))), hv((i, k, l)))
    C_jkl = _cell(cm, cm.G.mul(gv((j, k)), gv((k, l))), hv((j, k, l)))
    C_ijl = _cell(cm, cm.G.mul(gv((i, j)), gv((j, l))), hv((i, j, l)))
    side1 = C_ijk.whisker_right(gv((k, l))).vertical(C_ikl, tol=tol)
    side2 = C_jkl.whisker_left(gv((i, j))).vertical(C_ijl, tol=tol)
    return side1, side2


def check_tetrahedron(data, where=None, tol=TAU_GRP):
    """Pasting equality of the two routes around each quadruple.

    Both routes are composed with the generic 2-cell operations, so this
    check inherits the composition conventions instead of restating them.
    """
    cm = data.cm
    rep = ValidationReport("tetrahedron laws")
    finite = cm.G.kind == "finite"
    ctol = None if finite else 10 * tol
    for quad in _pick(data.nerve, data.nerve.quads, where, "quad"):
        worst, witness, broken = 0.0, None, None
        for p in data.nerve.points(quad):
            try:
                s1, s2 = _tetra_sides(cm, lambda d: data.g_at(d, p),
                                      lambda t: data.h_at(t, p), quad,
                                      tol=ctol)
            except CompositionError as exc:
                broken = {"quad": list(quad), "point": p, "reason": str(exc)}
                break
            r = max(_residual(cm.G, s1.g, s2.g), _residual(cm.H, s1.h, s2.h))
            if r > worst:
                worst, witness = r, {"quad": list(quad), "point": p,
                                     "left": s1.h, "right": s2.h}
        name = "tetrahedron({},{},{},{})".format(*quad)
        if broken is not None:
            rep.add(name, False, witness=broken,
                    detail="prerequisite triangle fails, sides do not compose")
            continue
        ok = worst <= (0.0 if finite else tol)
        rep.add(name, ok, residual=worst, tolerance=tol,
                witness=None if ok else witness)
    return rep


def check_unit_laws(data, where=None, tol=TAU_GRP):
    """Unit-corrector diagrams on degenerate overlaps.

    For each chart with (i, i) declared: g_ii t(k_i) = 1. For each declared
    (i, i, j): the k_i cell whiskered by g_ij equals the h_iij cell. For each
    (i, j, j): the k_j cell whiskered on the other side equals the h_ijj
    cell. Whiskers and comparisons go through the 2-cell engine.
    """
    cm = data.cm
    G = cm.G
    rep = ValidationReport("unit laws")
    finite = G.kind == "finite"
    etol = 0.0 if finite else tol
    charts = data.nerve.charts if where is None else [where]
    dset = set(data.nerve.doubles)
    touched = False
    for i in charts:
        if (i, i) not in dset:
            continue
        touched = True
        worst, witness = 0.0, None
        for p in data.nerve.points((i, i)):
            lhs = G.mul(data.g_at((i, i), p), cm.t(data.k_at(i, p)))
            r = _residual(G, lhs, G.identity)
            if r > worst:
                worst, witness = r, {"chart": i, "point": p}
        rep.add(f"unit-target({i})", worst <= etol, residual=worst,
                tolerance=tol, witness=None if worst <= etol else witness)
    for tri in data.nerve.triples:
        a, b, c = tri
        if a == b != c and (where is None or where == a):
            touched = True
            worst = 0.0
            for p in data.nerve.points(tri):
                K = _cell(cm, data.g_at((a, a), p), data.k_at(a, p))
                left = K.whisker_right(data.g_at((b, c), p))
                law = _cell(cm, G.mul(data.g_at((a, a), p), data.g_at((b, c), p)),
                            data.h_at(tri, p))
                worst = max(worst, _residual(cm.H, left.h, law.h))
            rep.add(f"left-unit({a},{c})", worst <= etol, residual=worst,
                    tolerance=tol)
        if a != b == c and (where is None or where == b):
            touched = True
            worst = 0.0
            for p in data.nerve.points(tri):
                K = _cell(cm, data.g_at((b, b), p), data.k_at(b, p))
                right = K.whisker_left(data.g_at((a, b), p))
                law = _cell(cm, G.mul(data.g_at((a, b), p), data.g_at((b, b), p)),
                            data.h_at(tri, p))
                worst = max(worst, _residual(cm.H, right.h, law.h))
            rep.add(f"right-unit({a},{b})", worst <= etol, residual=worst,
                    tolerance=tol)
    if not touched:
        rep.skip("unit-laws", "no degenerate overlaps declared")
    return rep


# ------------------------------------------------------------ coboundary side

def _unbridge(cm, cell):
    # recover stored data from a cell: the inverse of _cell
    return cm.alpha(cm.G.inv(cell.g), cell.h)


def _transformed_double(cm, gv, lam, bv, pair):
    i, j = pair
    G = cm.G
    return G.mul(G.mul(G.mul(lam(i), gv(pair)), cm.t(bv(pair))), G.inv(lam(j)))


def _transformed_triple(cm, gv, hv, lam, bv, tri):
    """New h over a triple, as the pasting around the changed squares."""
    i, j, k = tri
    G = cm.G

    def beta(pair):
        a, b = pair
        src = G.mul(G.mul(lam(a), gv(pair)), G.inv(lam(b)))
        return _cell(cm, src, cm.alpha(lam(b), bv(pair)))

    X = beta((i, j)).horizontal(beta((j, k)))
    mid = (TwoCell.identity(cm, lam(i))
           .horizontal(_cell(cm, G.mul(gv((i, j)), gv((j, k))), hv(tri)))
           .horizontal(TwoCell.identity(cm, G.inv(lam(k)))))
    comp = X.vertical_inverse().vertical(mid).vertical(beta((i, k)))
    return _unbridge(cm, comp)


def _transformed_unit(cm, gv, kv, lam, bv, chart):
    i = chart
    G = cm.G
    src = G.mul(G.mul(lam(i), gv((i, i))), G.inv(lam(i)))
    beta = _cell(cm, src, cm.alpha(lam(i), bv((i, i))))
    mid = (TwoCell.identity(cm, lam(i))
           .horizontal(_cell(cm, gv((i, i)), kv(i)))
           .horizontal(TwoCell.identity(cm, G.inv(lam(i)))))
    comp = beta.vertical_inverse().vertical(mid)
    return _unbridge(cm, comp)


def coboundary_act(data, lam=None, b=None, check=True):
    """Change of local trivializations: g'_ij = lam_i g_ij t(b_ij) lam_j^-1.

    h and k transform by the pasting of the corresponding diagrams. Finite
    mode only. With check=True the result is re-validated; a failure there
    would mean the pasting itself is broken, so it raises.
    """
    cm = data.cm
    if not cm.is_finite:
        raise ConfigError("coboundary action is implemented for finite mode")
    lam = dict(lam) if lam else {}
    b = {tuple(key): val for key, val in b.items()} if b else {}

    def lam_at(i):
        return lam.get(i, cm.G.identity)

    def b_at(pair):
        return b.get(tuple(pair), cm.H.identity)

    gv, hv, kv = data.g_at, data.h_at, data.k_at
    new_g = {d: _transformed_double(cm, gv, lam_at, b_at, d)
             for d in data.nerve.doubles}
    new_h = {t: _transformed_triple(cm, gv, hv, lam_at, b_at, t)
             for t in data.nerve.triples}
    new_k = {}
    dset = set(data.nerve.doubles)
    for i in data.nerve.charts:
        if (i, i) in dset:
            new_k[i] = _transformed_unit(cm, gv, kv, lam_at, b_at, i)
    out = GluingCocycle(cm, data.nerve, new_g, new_h, new_k)
    if check:
        # closure: the change of trivializations must preserve every verdict
        for checker in (check_triangle, check_tetrahedron, check_unit_laws):
            before = {c.name: c.verdict for c in checker(data).checks}
            after = {c.name: c.verdict for c in checker(out).checks}
            if before != after:
                raise TwoGaugeError(
                    f"coboundary pasting changed verdicts: {before} -> {after}")
    return out


# ---------------------------------------------------------- finite census

def classify_finite(cm, nerve, budget=10 ** 7):
    """Enumerate normalized cocycles and their coboundary orbits.

    Normalized means k_i = 1 with data only on strictly increasing overlaps.
    Enumeration is lexicographic in (overlap order, element index); orbit
    representatives are the lexicographically least states, so the census is
    deterministic. Refuses when |G|^#doubles * |H|^#triples exceeds budget.
    """
    if not cm.is_finite:
        raise ConfigError("classification needs a finite crossed module")
    if not nerve.is_strict:
        raise ConfigError("classification expects strictly increasing overlaps")
    G, H = cm.G, cm.H
    doubles = sorted(nerve.doubles)
    triples = sorted(nerve.triples)
    quads = sorted(nerve.quads)
    size = G.order ** len(doubles) * H.order ** len(triples)
    if size > budget:
        raise BudgetExceeded(
            f"{size} candidate assignments exceed the budget {budget}",
            size=size, budget=budget)

    preimage = {}
    for hval in H.elements():
        preimage.setdefault(cm.t(hval), []).append(hval)
    d_index = {d: n for n, d in enumerate(doubles)}
    t_index = {t: n for n, t in enumerate(triples)}

    def survives(gs, hs):
        gv = lambda d: gs[d_index[d]]
        hv = lambda t: hs[t_index[t]]
        for quad in quads:
            s1, s2 = _tetra_sides(cm, gv, hv, quad)
            if not s1.eq(s2):
                return False
        return True

    cocycles = []
    for gs in itertools.product(G.elements(), repeat=len(doubles)):
        options = []
        feasible = True
        for (i, j, k) in triples:
            gij = gs[d_index[(i, j)]]
            gjk = gs[d_index[(j, k)]]
            gik = gs[d_index[(i, k)]]
            coset = preimage.get(G.mul(G.inv(G.mul(gij, gjk)), gik))
            if not coset:
                feasible = False
                break
            options.append(coset)
        if not feasible:
            continue
        for hs in itertools.product(*options):
            if survives(gs, hs):
                cocycles.append((gs, hs))

    index = {state: n for n, state in enumerate(cocycles)}

    def apply_change(state, lam, bmap):
        gs, hs = state
        gv = lambda d: gs[d_index[d]]
        hv = lambda t: hs[t_index[t]]
        lam_at = lambda i: lam.get(i, G.identity)
        b_at = lambda d: bmap.get(d, H.identity)
        new_gs = tuple(_transformed_double(cm, gv, lam_at, b_at, d)
                       for d in doubles)
        new_hs = tuple(_transformed_triple(cm, gv, hv, lam_at, b_at, t)
                       for t in triples)
        return new_gs, new_hs

    moves = []
    for i in nerve.charts:
        for lam_val in G.elements():
            if lam_val != G.identity:
                moves.append(({i: lam_val}, {}))
    for d in doubles:
        for b_val in H.elements():
            if b_val != H.identity:
                moves.append(({}, {d: b_val}))

    seen = [False] * len(cocycles)
    orbits = []
    for start in range(len(cocycles)):
        if seen[start]:
            continue
        queue = deque([start])
        seen[start] = True
        members = [start]
        while queue:
            cur = queue.popleft()
            for lam, bmap in moves:
                nxt = index[apply_change(cocycles[cur], lam, bmap)]
                if not seen[nxt]:
                    seen[nxt] = True
                    members.append(nxt)
                    queue.append(nxt)
        orbits.append(min(cocycles[m] for m in members))

    orbits.sort()

    def encode(state):
        gs, hs = state
        return {"g": {",".join(map(str, d)): int(gs[d_index[d]]) for d in doubles},
                "h": {",".join(map(str, t)): int(hs[t_index[t]]) for t in triples}}

    return {"cocycles": len(cocycles), "orbits": len(orbits),
            "representatives": [encode(s) for s in orbits]}
