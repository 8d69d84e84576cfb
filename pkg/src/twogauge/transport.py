"""Holonomy integrators and gauge-law checkers.

Path transport solves W'(s) = -A(c(s))(c'(s)) W(s), W(0) = 1, with classical
fourth-order Runge-Kutta and per-step reprojection to the group. With that
sign, a constant field A0 dx1 along the unit x-segment transports to
exp(-A0), and concatenation satisfies

    transport(p1 then p2) = transport(p2) @ transport(p1).

Surface transport over a bigon runs one transport sweep per row t, forms

    b(t) = integral_s  act(W(s,t)^-1)( B(dS/ds, dS/dt) )  (composite Simpson)

and integrates k'(t) = -k(t) b(t) outward, again with RK4; the surface
element is h = k(1). Rows are cached at step ends so a grid-N call costs
about 2N sweeps. For a fake-flat connection the pair (source holonomy, h)
is a valid 2-cell: t(h) g_source = g_target. The act(W^-1) direction is the
one that makes that law hold; flipping it breaks the law at O(1) (covered
by a regression test).
"""

import numpy as np

from .errors import GeometryError
from .forms import (
    FormField, PointwiseForm, action_wedge_pointwise, curvature,
    fake_curvature_form, forms_close, square_wedge, three_curvature,
)
from .geometry import Path
from .maps import maurer_cartan, right_log_derivative
from .report import ValidationReport
from .twocells import TwoCell

DEFAULT_STEPS = 1000
DEFAULT_GRID = 128
TAU_FAKE = 1e-6


class LocalConnection:
    """Connection data on one chart: 1-form A in g, 2-form B in h."""

    def __init__(self, cm, A, B):
        if A.degree != 1 or B.degree != 2:
            raise GeometryError("a local connection is a (1-form, 2-form) pair")
        if A.dim != B.dim:
            raise GeometryError("A and B live on different chart dimensions")
        if A.algebra.dim != cm.G.algebra.dim or B.algebra.dim != cm.H.algebra.dim:
            raise GeometryError("connection values do not match the crossed module")
        self.cm = cm
        self.A = A
        self.B = B
        self.dim = A.dim

    @property
    def is_symbolic(self):
        return isinstance(self.A, FormField) and isinstance(self.B, FormField)

    def fake_curvature(self):
        """F_A + dt(B), symbolic connections only."""
        if not self.is_symbolic:
            raise GeometryError("fake curvature form needs symbolic components")
        return fake_curvature_form(self.cm, self.A, self.B)

    def fake_curvature_at(self, point, u, v):
        """Pointwise F_A(u,v) + dt(B(u,v)); works for numeric components too."""
        h = 1e-5
        p = np.asarray(point, dtype=float)
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.is_symbolic:
            return self.fake_curvature().at(point, u, v)
        dAu = (np.asarray(self.A.at(tuple(p + h * u), v))
               - np.asarray(self.A.at(tuple(p - h * u), v))) / (2 * h)
        dAv = (np.asarray(self.A.at(tuple(p + h * v), u))
               - np.asarray(self.A.at(tuple(p - h * v), u))) / (2 * h)
        Au, Av = self.A.at(tuple(p), u), self.A.at(tuple(p), v)
        F = dAu - dAv + (Au @ Av - Av @ Au)
        return F + self.cm.dt(self.B.at(tuple(p), u, v))


def fake_flat_connection(cm, A):
    """Symbolic connection with B = -dt^(-1)(F_A); needs aligned dt = identity."""
    M = cm.dt_matrix()
    if M.shape[0] != M.shape[1] or np.linalg.norm(M - np.eye(M.shape[0])) > 1e-12:
        raise GeometryError("automatic fake-flat completion needs an identity dt")
    F = curvature(A)
    B = (-F).map_algebra(np.eye(M.shape[0]), cm.H.algebra)
    return LocalConnection(cm, A, B)


def _rk4_transport(group, rhs, steps, s0=0.0, s1=1.0):
    """Integrate W' = rhs(s) @ W from s0 to s1, W(s0) = identity."""
    W = group.identity
    h = (s1 - s0) / steps
    M_end = rhs(s0)
    for k in range(steps):
        s = s0 + k * h
        M1 = M_end
        M2 = rhs(s + h / 2)
        M_end = rhs(s + h)
        K1 = M1 @ W
        K2 = M2 @ (W + (h / 2) * K1)
        K3 = M2 @ (W + (h / 2) * K2)
        K4 = M_end @ (W + h * K3)
        W = W + (h / 6) * (K1 + 2 * K2 + 2 * K3 + K4)
        W = group.renormalize(W)
    return W


def path_holonomy(cm_or_group, A, path, steps=DEFAULT_STEPS):
    """Transport the 1-arrow group along a path: solves W' = -A(c') W."""
    group = cm_or_group.G if hasattr(cm_or_group, "G") else cm_or_group
    if group.kind != "matrix":
        raise GeometryError("transport integrates matrix groups only")
    if group.trivial:
        return group.identity

    def rhs(s):
        return -np.asarray(A.at(tuple(path.value(s)), path.velocity(s)))

    return _rk4_transport(group, rhs, steps)


def holonomy_product(group, elements):
    """Fold transports of consecutive pieces: later pieces multiply on the left."""
    out = group.identity
    for w in elements:
        out = group.mul(w, out)
    return out


class SurfaceResult:
    """Outcome of a surface transport: 2-cell candidate plus diagnostics."""

    def __init__(self, cell, fake_residual, flat, target_holonomy, grid):
        self.cell = cell
        self.g = cell.g
        self.h = cell.h
        self.fake_residual = float(fake_residual)
        self.flat = bool(flat)
        self.target_holonomy = target_holonomy
        self.grid = int(grid)

    @property
    def target_defect(self):
        G = self.cell.cm.G
        return float(np.linalg.norm(
            np.asarray(self.cell.target) - np.asarray(self.target_holonomy)))

    def __repr__(self):
        return (f"<SurfaceResult flat={self.flat} fake={self.fake_residual:.2e} "
                f"target_defect={self.target_defect:.2e}>")


def fake_residual_on_bigon(conn, bigon, samples=9):
    """Max fake-curvature norm on the bigon's own tangent pairs."""
    worst = 0.0
    fake = conn.fake_curvature() if conn.is_symbolic else None
    for s in np.linspace(0.05, 0.95, samples):
        for t in np.linspace(0.05, 0.95, samples):
            p = bigon.value(s, t)
            u, v = bigon.d_s(s, t), bigon.d_t(s, t)
            val = fake.at(tuple(p), u, v) if fake is not None \
                else conn.fake_curvature_at(p, u, v)
            worst = max(worst, float(np.linalg.norm(val)))
    return worst


def surface_holonomy(conn, bigon, grid=DEFAULT_GRID, fake_tol=TAU_FAKE,
                     fake_samples=9):
    """Transport the 2-arrow group across a bigon; see module docstring."""
    cm = conn.cm
    G, H = cm.G, cm.H
    if H.kind != "matrix" or G.kind != "matrix":
        raise GeometryError("surface transport integrates matrix pairs only")
    if bigon.dim != conn.dim:
        raise GeometryError("bigon and connection live on different dimensions")
    n2 = 2 * grid
    hs = 1.0 / n2
    simpson_w = np.ones(n2 + 1)
    simpson_w[1:-1:2] = 4.0
    simpson_w[2:-1:2] = 2.0
    simpson_w *= hs / 3.0

    g_trivial = G.trivial

    def row(t):
        """One sweep: returns (b(t), W(1,t)) for the row at height t."""
        points = [bigon.value(k * hs, t) for k in range(n2 + 1)]
        vel_s = [bigon.d_s(k * hs, t) for k in range(n2 + 1)]
        b = H.algebra.zero()
        if g_trivial:
            for k in range(n2 + 1):
                Bv = conn.B.at(tuple(points[k]), vel_s[k], bigon.d_t(k * hs, t))
                b = b + simpson_w[k] * np.asarray(Bv)
            return b, G.identity
        W = G.identity
        Bv = conn.B.at(tuple(points[0]), vel_s[0], bigon.d_t(0.0, t))
        b = b + simpson_w[0] * np.asarray(cm.act_algebra(G.inv(W), Bv))
        M_end = -np.asarray(conn.A.at(tuple(points[0]), vel_s[0]))
        for k in range(n2):
            s = k * hs
            M1 = M_end
            pm = bigon.value(s + hs / 2, t)
            M2 = -np.asarray(conn.A.at(tuple(pm), bigon.d_s(s + hs / 2, t)))
            M_end = -np.asarray(conn.A.at(tuple(points[k + 1]), vel_s[k + 1]))
            K1 = M1 @ W
            K2 = M2 @ (W + (hs / 2) * K1)
            K3 = M2 @ (W + (hs / 2) * K2)
            K4 = M_end @ (W + hs * K3)
            W = G.renormalize(W + (hs / 6) * (K1 + 2 * K2 + 2 * K3 + K4))
            Bv = conn.B.at(tuple(points[k + 1]), vel_s[k + 1],
                           bigon.d_t((k + 1) * hs, t))
            b = b + simpson_w[k + 1] * np.asarray(cm.act_algebra(G.inv(W), Bv))
        return b, W

    ht = 1.0 / grid
    k_el = H.identity
    b_end, W_source = row(0.0)
    for j in range(grid):
        t = j * ht
        b1 = b_end
        b2, _ = row(t + ht / 2)
        b_end, W_last = row(t + ht)
        K1 = -k_el @ b1
        K2 = -(k_el + (ht / 2) * K1) @ b2
        K3 = -(k_el + (ht / 2) * K2) @ b2
        K4 = -(k_el + ht * K3) @ b_end
        k_el = H.renormalize(k_el + (ht / 6) * (K1 + 2 * K2 + 2 * K3 + K4))

    _, W_target = row(1.0)
    fake = fake_residual_on_bigon(conn, bigon, fake_samples)
    # k satisfies hol(target) = hol(source) t(k); conjugating by the source
    # holonomy converts to the cell convention hol(target) = t(h) hol(source),
    # under which transported cells paste by the 2-group's own rules
    h_el = cm.alpha(W_source, k_el)
    cell = TwoCell(cm, W_source, h_el)
    return SurfaceResult(cell, fake, fake <= fake_tol, W_target, grid)


def kernel_check(conn, points, tol=1e-8):
    """dt applied to the 3-curvature dB + dalpha(A)^B, sampled at points.

    For a fake-flat connection this image vanishes identically (the
    boundary of the 3-curvature is the derivative of the flatness relation).
    """
    cm = conn.cm
    H3 = three_curvature(cm, conn.A, conn.B)
    M = cm.dt_matrix()
    image = H3.map_algebra(M, cm.G.algebra)
    worst = image.max_abs_on_grid(points)
    rep = ValidationReport("3-curvature boundary image")
    rep.add("dt-of-3-curvature", worst <= tol, residual=worst, tolerance=tol)
    return rep


def convergence_study(cm_or_group, A, path, grids=(8, 16, 32, 64),
                      reference_factor=4):
    """Transport error versus step count; the reference is 4x the finest grid."""
    grids = sorted(int(g) for g in grids)
    ref = path_holonomy(cm_or_group, A, path, steps=grids[-1] * reference_factor)
    errors = []
    for n in grids:
        W = path_holonomy(cm_or_group, A, path, steps=n)
        errors.append(float(np.linalg.norm(np.asarray(W) - np.asarray(ref))))
    floor = 1e-14
    logs = [(np.log(1.0 / n), np.log(max(e, floor))) for n, e in zip(grids, errors)]
    xs, ys = zip(*logs)
    order = float(np.polyfit(xs, ys, 1)[0])
    return {"grids": list(grids), "errors": errors, "order": order}


# ------------------------------------------------------- gauge and transitions

def transform_connection(cm, conn, gmap, a_form):
    """Chart change: A' = g A g^-1 + g d(g^-1) - dt(a); B' = act(g) B + k.

    The overlap curvature k is built against the transformed A', matching
    how the two charts are compared in `check_transition_laws`.
    """
    if a_form.degree != 1:
        raise GeometryError("the shift form has degree 1")
    if not isinstance(a_form, FormField):
        raise GeometryError("the shift form must be symbolic")
    mc = maurer_cartan(gmap)

    def A_fn(p, v):
        g = gmap.at(p)
        return (g @ conn.A.at(p, v) @ cm.G.inv(g) + mc.at(p, v)
                - cm.dt(a_form.at(p, v)))

    A_new = PointwiseForm(cm.G.algebra, 1, conn.dim, A_fn)
    k_free = PointwiseForm.from_field(a_form.d() + square_wedge(a_form))
    k_full = k_free + action_wedge_pointwise(cm, A_new, a_form)

    def B_fn(p, u, v):
        return cm.act_algebra(gmap.at(p), conn.B.at(p, u, v)) + k_full.at(p, u, v)

    B_new = PointwiseForm(cm.H.algebra, 2, conn.dim, B_fn)
    return LocalConnection(cm, A_new, B_new)


def check_transition_laws(cm, left, right, gmap, a_form, points, tol=1e-9):
    """Are two charts related by (g, a)? Residuals of both gauge laws.

    left plays chart i, right chart j: the laws compare left against the
    (g, a)-transform of right, sampled at `points` on coordinate directions.
    """
    transformed = transform_connection(cm, right, gmap, a_form)
    rep = ValidationReport("transition laws")
    worst1, ok1 = forms_close(_as_pointwise(left.A), transformed.A, points, tol)
    rep.add("connection-law", ok1, residual=worst1, tolerance=tol)
    worst2, ok2 = forms_close(_as_pointwise(left.B), transformed.B, points, tol)
    rep.add("surface-law", ok2, residual=worst2, tolerance=tol)
    return rep


def check_transition_laws_plain(cm, left, right, gmap, points, tol=1e-9):
    """1-bundle specialization: zero shift form, so B' is just the pushforward."""
    zero_a = FormField.zero(cm.H.algebra, 1, left.dim)
    return check_transition_laws(cm, left, right, gmap, zero_a, points, tol)


def _as_pointwise(form):
    return form if isinstance(form, PointwiseForm) else PointwiseForm.from_field(form)


def check_triple_overlap(cm, a_ij, a_jk, a_ik, g_ij, hmap, A_i, points, tol=1e-9):
    """Cocycle law for the shift forms on a triple overlap.

    a_ij + act(g_ij) a_jk  =  h a_ik h^-1 + (dh) h^-1 + D(A_i)(h)

    where h is the overlap 2-transition map and D(y)(h) is the derivative
    of the action in the group direction, d/de alpha(exp(e y))(h) h^-1.
    """
    rldh = right_log_derivative(hmap)
    rep = ValidationReport("triple overlap law")
    worst = 0.0
    for p in points:
        h = hmap.at(p)
        hi = cm.H.inv(h)
        for v in np.eye(len(p)):
            lhs = (np.asarray(a_ij.at(p, v))
                   + cm.act_algebra(g_ij.at(p), a_jk.at(p, v)))
            rhs = (h @ np.asarray(a_ik.at(p, v)) @ hi
                   + rldh.at(p, v)
                   + cm.dalpha_group(A_i.at(p, v), h))
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    rep.add("shift-cocycle", worst <= tol, residual=worst, tolerance=tol)
    return rep
