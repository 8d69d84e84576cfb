"""Crossed modules: boundary map, action, differential data, validators, catalog.

A crossed module is a pair of groups (G, H) with a homomorphism t: H -> G and
an action alpha of G on H by automorphisms, subject to

    equivariance:  t(alpha(g)(h)) = g t(h) g^-1
    Peiffer:       alpha(t(h))(h') = h h' h^-1

The differential layer (for matrix pairs) carries dt: h -> g, the bilinear
dalpha: g x h -> h, the linearized action of group elements on the algebra,
and the group-direction derivative d/de alpha(exp(e y))(h) h^-1 used in the
triple-overlap transition law.

Shipped catalog (spec identifiers accepted by `crossed_module`):

    CONJ(SU2), CONJ(S3), CONJ(U1)   adjoint pairs (G, G, id, conjugation)
    AUT(SU2)                        (SO(3), SU(2), covering map, lifted conjugation)
    AUT(S3), AUT(Z<n>)              automorphism 2-groups of finite groups
    GERBE(U1), GERBE(Z<n>)          abelian pairs with trivial G and t
    FLIP(Z3)                        Z/2 acting on Z/3 by negation, t trivial
    PEIFFER_BROKEN(S3)              invalid fixture: trivial t and action on S3
"""

import re

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import GroupDomainError
from .groups import (
    SO3, SU2, TRIVIAL, U1, FiniteGroup, MatrixGroup, TAU_GRP,
    automorphism_group, _SIGMA,
)
from .report import ValidationReport

EXHAUSTIVE_VALIDATE_BUDGET = 10 ** 6
EXHAUSTIVE_INTERCHANGE_BUDGET = 10 ** 8


class CrossedModule:
    def __init__(self, name, G, H, t, alpha, *, dt=None, dalpha=None,
                 act_algebra=None, dalpha_group=None, dt_inverse=None):
        self.name = name
        self.G = G
        self.H = H
        self._t = t
        self._alpha = alpha
        self._dt = dt
        self._dalpha = dalpha
        self._act_algebra = act_algebra
        self._dalpha_group = dalpha_group
        self._dt_inverse = dt_inverse

    def t(self, h):
        return self._t(h)

    def alpha(self, g, h):
        return self._alpha(g, h)

    @property
    def is_finite(self):
        return self.G.kind == "finite" and self.H.kind == "finite"

    @property
    def has_differential(self):
        return self._dt is not None

    def dt(self, x):
        if self._dt is None:
            raise GroupDomainError(f"{self.name} has no differential data")
        return self._dt(x)

    def dt_matrix(self):
        """Matrix of dt in the shipped bases (g-coords per h-basis column)."""
        hdim = self.H.algebra.dim
        gdim = self.G.algebra.dim
        M = np.zeros((gdim, hdim))
        for b in range(hdim):
            M[:, b] = self.G.algebra.coords(self.dt(self.H.algebra.basis[b]))
        return M

    def dalpha(self, y, x):
        if self._dalpha is None:
            raise GroupDomainError(f"{self.name} has no differential data")
        return self._dalpha(y, x)

    def dalpha_matrix(self):
        """D[a, b, c] with dalpha(e_b^g)(e_c^h) = sum_a D[a,b,c] e_a^h."""
        gdim = self.G.algebra.dim
        hdim = self.H.algebra.dim
        D = np.zeros((hdim, gdim, hdim))
        for b in range(gdim):
            for c in range(hdim):
                D[:, b, c] = self.H.algebra.coords(
                    self.dalpha(self.G.algebra.basis[b], self.H.algebra.basis[c]))
        return D

    def act_algebra(self, g, x):
        """Linearization of alpha(g) on the H algebra."""
        if self._act_algebra is None:
            raise GroupDomainError(f"{self.name} has no differential data")
        return self._act_algebra(g, x)

    def dalpha_group(self, y, h):
        """d/de alpha(exp(e y))(h) h^-1 at e = 0, an H-algebra value."""
        if self._dalpha_group is not None:
            return self._dalpha_group(y, h)
        if self._dalpha is None:
            raise GroupDomainError(f"{self.name} has no differential data")
        # central-difference fallback through the group-level action
        eps = 1e-6
        gp = self.G.exp(eps * y)
        gm = self.G.exp(-eps * y)
        d = (self.alpha(gp, h) - self.alpha(gm, h)) / (2 * eps)
        return self.H.algebra.project(d @ self.H.inv(h))

    def __repr__(self):
        return f"<CrossedModule {self.name}>"


# ------------------------------------------------------------------ validators

def _sampled_elements(group, rng, n):
    return [group.random(rng) for _ in range(n)]


def validate_crossed_module(cm, mode="auto", samples=60, seed=42):
    """Axiom check: homomorphism, action, equivariance, Peiffer.

    mode 'exhaustive' walks every tuple (finite pairs only, budget
    |G| * |H|^2 <= 10^6); 'sampled' draws `samples` random tuples; 'auto'
    picks exhaustive when available within budget.
    """
    G, H = cm.G, cm.H
    rep = ValidationReport(f"crossed module axioms: {cm.name}")
    exhaustive = cm.is_finite and G.order * H.order ** 2 <= EXHAUSTIVE_VALIDATE_BUDGET
    if mode == "exhaustive" and not exhaustive:
        raise GroupDomainError("exhaustive validation not available for this pair")
    if mode == "sampled":
        exhaustive = False

    if exhaustive:
        gs, hs = list(G.elements()), list(H.elements())
        pairs_hh = [(h1, h2) for h1 in hs for h2 in hs]
        pairs_gh = [(g, h) for g in gs for h in hs]
        triples = [(g, h1, h2) for g in gs for h1 in hs for h2 in hs]
        gg_h = [(g1, g2, h) for g1 in gs for g2 in gs for h in hs]
        tol = None
    else:
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        gs = _sampled_elements(G, rng, max(4, samples // 8))
        hs = _sampled_elements(H, rng, max(4, samples // 8))
        pairs_hh = [(H.random(rng), H.random(rng)) for _ in range(samples)]
        pairs_gh = [(G.random(rng), H.random(rng)) for _ in range(samples)]
        triples = [(G.random(rng), H.random(rng), H.random(rng)) for _ in range(samples)]
        gg_h = [(G.random(rng), G.random(rng), H.random(rng)) for _ in range(samples)]
        tol = TAU_GRP

    def eq_g(a, b):
        return G.eq(a, b) if tol is None else G.eq(a, b, tol)

    def eq_h(a, b):
        return H.eq(a, b) if tol is None else H.eq(a, b, tol)

    def run(name, cases, predicate, describe):
        worst = None
        count = 0
        for case in cases:
            if not predicate(*case):
                count += 1
                if worst is None:
                    worst = describe(*case)
        rep.add(name, count == 0, witness=worst,
                detail=None if count == 0 else f"{count} violations")

    run("t-homomorphism", pairs_hh,
        lambda h1, h2: eq_g(cm.t(H.mul(h1, h2)), G.mul(cm.t(h1), cm.t(h2))),
        lambda h1, h2: {"h1": H.label(h1), "h2": H.label(h2)})
    singles = [(h,) for h in (H.elements() if exhaustive else [h for h, _ in pairs_hh])]
    run("alpha-identity", singles,
        lambda h: eq_h(cm.alpha(G.identity, h), h),
        lambda h: {"h": H.label(h)})
    run("alpha-automorphism", triples,
        lambda g, h1, h2: eq_h(cm.alpha(g, H.mul(h1, h2)),
                               H.mul(cm.alpha(g, h1), cm.alpha(g, h2))),
        lambda g, h1, h2: {"g": G.label(g), "h1": H.label(h1), "h2": H.label(h2)})
    run("alpha-action", gg_h,
        lambda g1, g2, h: eq_h(cm.alpha(G.mul(g1, g2), h),
                               cm.alpha(g1, cm.alpha(g2, h))),
        lambda g1, g2, h: {"g1": G.label(g1), "g2": G.label(g2), "h": H.label(h)})
    run("equivariance", pairs_gh,
        lambda g, h: eq_g(cm.t(cm.alpha(g, h)), G.conj(g, cm.t(h))),
        lambda g, h: {"g": G.label(g), "h": H.label(h)})
    run("peiffer", pairs_hh,
        lambda h1, h2: eq_h(cm.alpha(cm.t(h1), h2), H.conj(h1, h2)),
        lambda h1, h2: {"h1": H.label(h1), "h2": H.label(h2)})
    return rep


def differential_consistency(cm, samples=20, eps=1e-3, seed=42, bound=10.0):
    """First-order agreement of (t, alpha) with (dt, dalpha).

    For x in the H algebra: || t(exp(eps x)) - exp(eps dt(x)) || = O(eps^2).
    For y in the G algebra and h = exp(x): since alpha(g) is an automorphism,
    log(alpha(exp(eps y))(h)) = x + eps dalpha(y)(x) + O(eps^2).
    Reports max residual / eps^2 against `bound`.
    """
    if not cm.has_differential:
        raise GroupDomainError(f"{cm.name} has no differential data")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    rep = ValidationReport(f"differential consistency: {cm.name}")
    G, H = cm.G, cm.H
    worst_t = 0.0
    worst_a = 0.0
    for _ in range(samples):
        x = H.algebra.random(rng, scale=0.5)
        y = G.algebra.random(rng, scale=0.5)
        r_t = np.linalg.norm(cm.t(H.exp(eps * x)) - G.exp(eps * cm.dt(x)))
        worst_t = max(worst_t, r_t / eps ** 2)
        h = H.exp(x)
        lhs = H.log(cm.alpha(G.exp(eps * y), h))
        r_a = np.linalg.norm(lhs - (x + eps * cm.dalpha(y, x)))
        worst_a = max(worst_a, r_a / eps ** 2)
    rep.add("dt-first-order", worst_t <= bound, residual=worst_t, tolerance=bound)
    rep.add("dalpha-first-order", worst_a <= bound, residual=worst_a, tolerance=bound)
    return rep


# -------------------------------------------------------------------- catalog

def _conj_matrix_module(name, group_factory):
    M = group_factory()
    return CrossedModule(
        name, M, group_factory(),
        t=lambda h: h,
        alpha=lambda g, h: M.conj(g, h),
        dt=lambda x: x,
        dalpha=lambda y, x: y @ x - x @ y,
        act_algebra=lambda g, x: g @ x @ M.inv(g),
        dalpha_group=lambda y, h: M.algebra.project(y - h @ y @ M.inv(h)),
        dt_inverse=lambda y: y,
    )


def _su2_from_quaternion(q):
    x, y, z, w = q
    return w * np.eye(2, dtype=complex) - 1j * (x * _SIGMA[0] + y * _SIGMA[1] + z * _SIGMA[2])


def _covering_su2_to_so3(u):
    R = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            R[i, j] = 0.5 * np.real(np.trace(_SIGMA[i] @ u @ _SIGMA[j] @ u.conj().T))
    return R


def _aut_su2_module():
    G = SO3()
    H = SU2()

    def lift(R):
        # either preimage works: alpha conjugates, so the sign cancels
        q = Rotation.from_matrix(np.asarray(R, dtype=float)).as_quat()
        return _su2_from_quaternion(q)

    def dt(x):
        a = np.array([1j * np.trace(s @ x) for s in _SIGMA]).real
        return np.array([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])

    def dt_inv(y):
        a = np.array([y[2, 1], y[0, 2], y[1, 0]])
        return -0.5j * (a[0] * _SIGMA[0] + a[1] * _SIGMA[1] + a[2] * _SIGMA[2])

    def act(g, x):
        u = lift(g)
        return u @ x @ u.conj().T

    return CrossedModule(
        "AUT(SU2)", G, H,
        t=_covering_su2_to_so3,
        alpha=lambda g, h: (lambda u: u @ h @ u.conj().T)(lift(g)),
        dt=dt,
        dalpha=lambda y, x: (lambda yh: yh @ x - x @ yh)(dt_inv(y)),
        act_algebra=act,
        dalpha_group=lambda y, h: (lambda yh: H.algebra.project(
            yh - h @ yh @ h.conj().T))(dt_inv(y)),
        dt_inverse=dt_inv,
    )


def _gerbe_matrix_module():
    G = TRIVIAL()
    H = U1()
    return CrossedModule(
        "GERBE(U1)", G, H,
        t=lambda h: G.identity,
        alpha=lambda g, h: h,
        dt=lambda x: np.zeros((1, 1)),
        dalpha=lambda y, x: np.zeros((1, 1), dtype=complex),
        act_algebra=lambda g, x: x,
        dalpha_group=lambda y, h: np.zeros((1, 1), dtype=complex),
    )


def _finite_conj_module(name, group_factory):
    G = group_factory()
    H = group_factory()
    return CrossedModule(name, G, H, t=lambda h: h,
                         alpha=lambda g, h: G.conj(g, h))


def _aut_finite_module(name, base):
    aut, images = automorphism_group(base)
    inner = []
    for h in base.elements():
        conj_h = tuple(base.conj(h, x) for x in base.elements())
        inner.append(images.index(conj_h))
    return CrossedModule(
        name, aut, base,
        t=lambda h: inner[h],
        alpha=lambda g, h: images[g][h])


def _gerbe_finite_module(n):
    G = FiniteGroup.trivial()
    H = FiniteGroup.cyclic(n)
    return CrossedModule(f"GERBE(Z{n})", G, H,
                         t=lambda h: 0, alpha=lambda g, h: h)


def _flip_module():
    G = FiniteGroup.cyclic(2)
    H = FiniteGroup.cyclic(3)
    return CrossedModule("FLIP(Z3)", G, H,
                         t=lambda h: 0,
                         alpha=lambda g, h: h if g == 0 else (-h) % 3)


def peiffer_violating_fixture():
    """Invalid on purpose: trivial t and trivial action on a nonabelian H."""
    G = FiniteGroup.trivial()
    H = FiniteGroup.symmetric(3)
    return CrossedModule("PEIFFER_BROKEN(S3)", G, H,
                         t=lambda h: 0, alpha=lambda g, h: h)


_CATALOG = {
    "CONJ(SU2)": lambda: _conj_matrix_module("CONJ(SU2)", SU2),
    "CONJ(U1)": lambda: _conj_matrix_module("CONJ(U1)", U1),
    "CONJ(S3)": lambda: _finite_conj_module("CONJ(S3)", lambda: FiniteGroup.symmetric(3)),
    "AUT(SU2)": _aut_su2_module,
    "AUT(S3)": lambda: _aut_finite_module("AUT(S3)", FiniteGroup.symmetric(3)),
    "GERBE(U1)": _gerbe_matrix_module,
    "FLIP(Z3)": _flip_module,
    "PEIFFER_BROKEN(S3)": peiffer_violating_fixture,
}


def crossed_module(name):
    """Look up a shipped crossed module by identifier (see module docstring)."""
    key = name.strip()
    if key in _CATALOG:
        return _CATALOG[key]()
    m = re.fullmatch(r"GERBE\(Z(\d+)\)", key)
    if m:
        return _gerbe_finite_module(int(m.group(1)))
    m = re.fullmatch(r"AUT\(Z(\d+)\)", key)
    if m:
        n = int(m.group(1))
        return _aut_finite_module(f"AUT(Z{n})", FiniteGroup.cyclic(n))
    raise GroupDomainError(f"unknown crossed module {name!r}; shipped: "
                           + ", ".join(sorted(_CATALOG) + ["GERBE(Z<n>)", "AUT(Z<n>)"]))


def shipped_finite_names():
    """Finite catalog entries (every one validates exhaustively)."""
    return ["CONJ(S3)", "AUT(S3)", "AUT(Z5)", "FLIP(Z3)",
            "GERBE(Z2)", "GERBE(Z3)", "GERBE(Z5)"]


def shipped_matrix_names():
    return ["CONJ(U1)", "CONJ(SU2)", "AUT(SU2)", "GERBE(U1)"]


def from_tables(cfg):
    """Inline finite crossed module from explicit tables.

    cfg keys: G {table, names?}, H {table, names?}, t (list: G-index per
    H element), alpha (|G| x |H| table of H-indices).
    """
    G = FiniteGroup(cfg["G"]["table"], names=cfg["G"].get("names"),
                    name=cfg["G"].get("name", "G"))
    H = FiniteGroup(cfg["H"]["table"], names=cfg["H"].get("names"),
                    name=cfg["H"].get("name", "H"))
    t_map = [int(v) for v in cfg["t"]]
    alpha_tab = np.asarray(cfg["alpha"], dtype=int)
    if len(t_map) != H.order or alpha_tab.shape != (G.order, H.order):
        raise GroupDomainError("inline crossed module tables have wrong shape")
    return CrossedModule(cfg.get("name", "inline"), G, H,
                         t=lambda h: t_map[h],
                         alpha=lambda g, h: int(alpha_tab[g, h]))
