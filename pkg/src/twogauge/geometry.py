"""Paths and bigons on R^n with sitting instants.

Every shipped parametrization is constant on a margin near the ends of its
parameter interval (width `delta`, default 0.1). That makes concatenation
smooth without matching derivatives at the seam: both sides arrive with all
derivatives zero. The margin is produced by the standard smooth step built
from exp(-1/u).

Velocities are exact: expression-backed curves differentiate symbolically,
combinators chain closed-form derivatives, and the ramp's derivative is
computed analytically.

Parametrization conventions, fixed here and relied on elsewhere:

    concatenation   (p1 then p2)(s) = p1(2s) for s <= 1/2, else p2(2s - 1)
    reversal        (reversed p)(s) = p(1 - s)
    bigon vertical  stack in t: S1(s, 2t) then S2(s, 2t - 1)
    bigon horizontal side by side in s: S1(2s, t) then S2(2s - 1, t)
"""

import math

import numpy as np

from .errors import CompositionError, GeometryError
from .expr import compile_expr, differentiate, max_var_index, parse

DEFAULT_SITTING = 0.1
TAU_GEO = 1e-9


def _bump(u):
    return math.exp(-1.0 / u) if u > 0.0 else 0.0


def _bump_derivative(u):
    return math.exp(-1.0 / u) / (u * u) if u > 0.0 else 0.0


def smooth_step(u):
    """C-infinity monotone step: 0 for u <= 0, 1 for u >= 1."""
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    b = _bump(u)
    c = _bump(1.0 - u)
    return b / (b + c)


def smooth_step_derivative(u):
    if u <= 0.0 or u >= 1.0:
        return 0.0
    b = _bump(u)
    c = _bump(1.0 - u)
    db = _bump_derivative(u)
    dc = _bump_derivative(1.0 - u)
    return (db * c + b * dc) / (b + c) ** 2


class Ramp:
    """Sitting ramp: 0 on [0, delta], 1 on [1-delta, 1], smooth between."""

    def __init__(self, delta=DEFAULT_SITTING):
        if not (0.0 <= delta < 0.5):
            raise GeometryError("sitting margin must lie in [0, 0.5)")
        self.delta = float(delta)

    def __call__(self, s):
        if self.delta == 0.0:
            return min(max(s, 0.0), 1.0)
        return smooth_step((s - self.delta) / (1.0 - 2.0 * self.delta))

    def derivative(self, s):
        if self.delta == 0.0:
            return 1.0 if 0.0 < s < 1.0 else 0.0
        w = 1.0 - 2.0 * self.delta
        return smooth_step_derivative((s - self.delta) / w) / w


class Reparam:
    """Smooth map [0,1] -> [0,1] fixing the ends, with exact derivative."""

    def __init__(self, fn, dfn, label="reparam"):
        self._fn = fn
        self._dfn = dfn
        self.label = label
        if abs(fn(0.0)) > TAU_GEO or abs(fn(1.0) - 1.0) > TAU_GEO:
            raise GeometryError(f"{label} must fix 0 and 1")
        prev = 0.0
        for k in range(1, 65):
            v = fn(k / 64)
            if v < prev - 1e-12:
                raise GeometryError(f"{label} is not monotone near s={k / 64:.3f}")
            prev = v

    def __call__(self, s):
        return self._fn(s)

    def derivative(self, s):
        return self._dfn(s)

    @classmethod
    def identity(cls):
        return cls(lambda s: s, lambda s: 1.0, "identity")

    @classmethod
    def sitting(cls, delta=DEFAULT_SITTING):
        r = Ramp(delta)
        return cls(r, r.derivative, f"sitting({delta})")

    @classmethod
    def power_of_sitting(cls, exponent, delta=DEFAULT_SITTING):
        r = Ramp(delta)
        k = int(exponent)
        return cls(lambda s: r(s) ** k,
                   lambda s: k * r(s) ** (k - 1) * r.derivative(s) if k > 1
                   else r.derivative(s),
                   f"sitting({delta})^{k}")

    @classmethod
    def from_expr(cls, text):
        e = parse(text)
        if max_var_index(e) > 1:
            raise GeometryError("a reparametrization uses the single variable x1")
        fn = compile_expr(e)
        dfn = compile_expr(differentiate(e, 1))
        return cls(lambda s: fn((s,)), lambda s: dfn((s,)), text)


class Path:
    """Smooth map [0,1] -> R^dim with exact velocity."""

    def __init__(self, value, velocity, dim):
        self._value = value
        self._velocity = velocity
        self.dim = int(dim)
        self.start = np.asarray(value(0.0), dtype=float)
        self.end = np.asarray(value(1.0), dtype=float)

    def value(self, s):
        return np.asarray(self._value(float(s)), dtype=float)

    def velocity(self, s):
        return np.asarray(self._velocity(float(s)), dtype=float)

    @classmethod
    def from_exprs(cls, texts, delta=DEFAULT_SITTING):
        """Coordinate expressions in x1; the sitting ramp is pre-composed."""
        exprs = [parse(t) if isinstance(t, str) else t for t in texts]
        for e in exprs:
            if max_var_index(e) > 1:
                raise GeometryError("path coordinates use the single variable x1")
        fns = [compile_expr(e) for e in exprs]
        dfns = [compile_expr(differentiate(e, 1)) for e in exprs]
        r = Ramp(delta)

        def value(s):
            u = r(s)
            return np.array([f((u,)) for f in fns])

        def velocity(s):
            u = r(s)
            du = r.derivative(s)
            return np.array([f((u,)) * du for f in dfns])

        return cls(value, velocity, len(exprs))

    @classmethod
    def line(cls, p0, p1, delta=DEFAULT_SITTING):
        p0 = np.asarray(p0, dtype=float)
        p1 = np.asarray(p1, dtype=float)
        r = Ramp(delta)
        d = p1 - p0
        return cls(lambda s: p0 + r(s) * d,
                   lambda s: r.derivative(s) * d, len(p0))

    @classmethod
    def arc(cls, center, radius, angle0, angle1, delta=DEFAULT_SITTING):
        center = np.asarray(center, dtype=float)
        r = Ramp(delta)
        span = angle1 - angle0

        def value(s):
            th = angle0 + r(s) * span
            return center + radius * np.array([math.cos(th), math.sin(th)])

        def velocity(s):
            th = angle0 + r(s) * span
            return (radius * span * r.derivative(s)
                    * np.array([-math.sin(th), math.cos(th)]))

        return cls(value, velocity, 2)

    @classmethod
    def constant(cls, point):
        p = np.asarray(point, dtype=float)
        z = np.zeros_like(p)
        return cls(lambda s: p, lambda s: z, len(p))

    def compose(self, other, tol=TAU_GEO):
        """This path first, then `other`; endpoints must meet."""
        if other.dim != self.dim:
            raise CompositionError("paths live in different dimensions")
        if np.linalg.norm(self.end - other.start) > tol:
            raise CompositionError("paths do not share the junction point",
                                   source=other.start.tolist(),
                                   target=self.end.tolist())
        p1, p2 = self, other

        def value(s):
            return p1._value(2 * s) if s <= 0.5 else p2._value(2 * s - 1)

        def velocity(s):
            if s <= 0.5:
                return 2 * np.asarray(p1._velocity(2 * s))
            return 2 * np.asarray(p2._velocity(2 * s - 1))

        return Path(value, velocity, self.dim)

    def reverse(self):
        return Path(lambda s: self._value(1 - s),
                    lambda s: -np.asarray(self._velocity(1 - s)), self.dim)

    def reparametrize(self, phi):
        return Path(lambda s: self._value(phi(s)),
                    lambda s: phi.derivative(s) * np.asarray(self._velocity(phi(s))),
                    self.dim)

    def is_loop(self, tol=TAU_GEO):
        return np.linalg.norm(self.start - self.end) <= tol

    def certify_sitting(self, delta=DEFAULT_SITTING, samples=25, tol=TAU_GEO):
        """Max deviation from the endpoints inside the sitting margins."""
        worst = 0.0
        for k in range(samples):
            s = delta * 0.95 * k / (samples - 1)
            worst = max(worst,
                        float(np.linalg.norm(self.value(s) - self.start)),
                        float(np.linalg.norm(self.velocity(s))),
                        float(np.linalg.norm(self.value(1 - s) - self.end)),
                        float(np.linalg.norm(self.velocity(1 - s))))
        return worst, worst <= tol


class Bigon:
    """Smooth map [0,1]^2 -> R^dim between two paths sharing endpoints.

    t = 0 traces the source path, t = 1 the target path; rows freeze near
    t in {0, 1} and the whole map is constant near s in {0, 1}.
    """

    def __init__(self, value, d_s, d_t, dim):
        self._value = value
        self._ds = d_s
        self._dt = d_t
        self.dim = int(dim)

    def value(self, s, t):
        return np.asarray(self._value(float(s), float(t)), dtype=float)

    def d_s(self, s, t):
        return np.asarray(self._ds(float(s), float(t)), dtype=float)

    def d_t(self, s, t):
        return np.asarray(self._dt(float(s), float(t)), dtype=float)

    @property
    def corner_start(self):
        return self.value(0.0, 0.0)

    @property
    def corner_end(self):
        return self.value(1.0, 0.0)

    def source(self):
        return Path(lambda s: self._value(s, 0.0),
                    lambda s: self._ds(s, 0.0), self.dim)

    def target(self):
        return Path(lambda s: self._value(s, 1.0),
                    lambda s: self._ds(s, 1.0), self.dim)

    @classmethod
    def from_exprs(cls, texts, delta=DEFAULT_SITTING):
        """Coordinate expressions in x1 (sweep) and x2 (deformation).

        Both parameters are pre-composed with the sitting ramp. The raw
        expressions must already be s-constant at x1 in {0, 1} for the
        result to be a bigon; `certify` checks the outcome.
        """
        exprs = [parse(t) if isinstance(t, str) else t for t in texts]
        for e in exprs:
            if max_var_index(e) > 2:
                raise GeometryError("bigon coordinates use x1 and x2 only")
        fns = [compile_expr(e) for e in exprs]
        dsf = [compile_expr(differentiate(e, 1)) for e in exprs]
        dtf = [compile_expr(differentiate(e, 2)) for e in exprs]
        r = Ramp(delta)

        def value(s, t):
            q = (r(s), r(t))
            return np.array([f(q) for f in fns])

        def d_s(s, t):
            q = (r(s), r(t))
            du = r.derivative(s)
            return np.array([f(q) * du for f in dsf])

        def d_t(s, t):
            q = (r(s), r(t))
            dv = r.derivative(t)
            return np.array([f(q) * dv for f in dtf])

        return cls(value, d_s, d_t, len(exprs))

    @classmethod
    def interpolate(cls, p0, p1, delta=DEFAULT_SITTING, tol=TAU_GEO):
        """Straight-line sweep between two paths with the same endpoints."""
        if p0.dim != p1.dim:
            raise CompositionError("paths live in different dimensions")
        if (np.linalg.norm(p0.start - p1.start) > tol
                or np.linalg.norm(p0.end - p1.end) > tol):
            raise CompositionError("interpolation needs paths with equal endpoints",
                                   source=[p0.start.tolist(), p0.end.tolist()],
                                   target=[p1.start.tolist(), p1.end.tolist()])
        r = Ramp(delta)

        def value(s, t):
            w = r(t)
            return (1 - w) * p0.value(s) + w * p1.value(s)

        def d_s(s, t):
            w = r(t)
            return (1 - w) * p0.velocity(s) + w * p1.velocity(s)

        def d_t(s, t):
            return r.derivative(t) * (p1.value(s) - p0.value(s))

        return cls(value, d_s, d_t, p0.dim)

    @classmethod
    def identity(cls, path):
        z = np.zeros(path.dim)
        return cls(lambda s, t: path.value(s),
                   lambda s, t: path.velocity(s),
                   lambda s, t: z, path.dim)

    @classmethod
    def constant(cls, point):
        return cls.identity(Path.constant(point))

    @classmethod
    def thin_sliver(cls, path, phi0, phi1, delta=DEFAULT_SITTING):
        """Reparametrization sweep inside one path; sweeps zero area."""
        r = Ramp(delta)

        def mix(s, t):
            w = r(t)
            return (1 - w) * phi0(s) + w * phi1(s)

        def value(s, t):
            return path.value(mix(s, t))

        def d_s(s, t):
            w = r(t)
            du = (1 - w) * phi0.derivative(s) + w * phi1.derivative(s)
            return du * path.velocity(mix(s, t))

        def d_t(s, t):
            return r.derivative(t) * (phi1(s) - phi0(s)) * path.velocity(mix(s, t))

        return cls(value, d_s, d_t, path.dim)

    def vertical(self, other, tol=1e-7):
        """Stack in the deformation direction: self first, then `other`."""
        if other.dim != self.dim:
            raise CompositionError("bigons live in different dimensions")
        worst = max(np.linalg.norm(self.value(s, 1.0) - other.value(s, 0.0))
                    for s in np.linspace(0, 1, 9))
        if worst > tol:
            raise CompositionError(
                f"target and source paths differ by {worst:.2e}")
        b1, b2 = self, other

        def value(s, t):
            return b1._value(s, 2 * t) if t <= 0.5 else b2._value(s, 2 * t - 1)

        def d_s(s, t):
            return b1._ds(s, 2 * t) if t <= 0.5 else b2._ds(s, 2 * t - 1)

        def d_t(s, t):
            if t <= 0.5:
                return 2 * np.asarray(b1._dt(s, 2 * t))
            return 2 * np.asarray(b2._dt(s, 2 * t - 1))

        return Bigon(value, d_s, d_t, self.dim)

    def horizontal(self, other, tol=1e-7):
        """Side by side in the sweep direction: self first, then `other`."""
        if other.dim != self.dim:
            raise CompositionError("bigons live in different dimensions")
        gap = np.linalg.norm(self.value(1.0, 0.0) - other.value(0.0, 0.0))
        if gap > tol:
            raise CompositionError(f"corner points differ by {gap:.2e}",
                                   source=other.value(0.0, 0.0).tolist(),
                                   target=self.value(1.0, 0.0).tolist())
        b1, b2 = self, other

        def value(s, t):
            return b1._value(2 * s, t) if s <= 0.5 else b2._value(2 * s - 1, t)

        def d_s(s, t):
            if s <= 0.5:
                return 2 * np.asarray(b1._ds(2 * s, t))
            return 2 * np.asarray(b2._ds(2 * s - 1, t))

        def d_t(s, t):
            return b1._dt(2 * s, t) if s <= 0.5 else b2._dt(2 * s - 1, t)

        return Bigon(value, d_s, d_t, self.dim)

    def reverse_t(self):
        """Swap source and target."""
        return Bigon(lambda s, t: self._value(s, 1 - t),
                     lambda s, t: self._ds(s, 1 - t),
                     lambda s, t: -np.asarray(self._dt(s, 1 - t)), self.dim)

    def reparametrize_s(self, phi):
        return Bigon(lambda s, t: self._value(phi(s), t),
                     lambda s, t: phi.derivative(s) * np.asarray(self._ds(phi(s), t)),
                     lambda s, t: self._dt(phi(s), t), self.dim)

    def reparametrize_t(self, phi):
        return Bigon(lambda s, t: self._value(s, phi(t)),
                     lambda s, t: self._ds(s, phi(t)),
                     lambda s, t: phi.derivative(t) * np.asarray(self._dt(s, phi(t))),
                     self.dim)

    def certify(self, delta=DEFAULT_SITTING, samples=9, tol=TAU_GEO):
        """Sitting margins in both directions; returns (max residual, ok)."""
        worst = 0.0
        grid = np.linspace(0, 1, samples)
        margin = np.linspace(0, delta * 0.95, 5)
        for t in grid:
            p, q = self.value(0.0, 0.0), self.value(1.0, 0.0)
            for m in margin:
                worst = max(worst,
                            float(np.linalg.norm(self.value(m, t) - p)),
                            float(np.linalg.norm(self.value(1 - m, t) - q)),
                            float(np.linalg.norm(self.d_s(m, t))),
                            float(np.linalg.norm(self.d_t(m, t))),
                            float(np.linalg.norm(self.d_s(1 - m, t))),
                            float(np.linalg.norm(self.d_t(1 - m, t))))
        for s in grid:
            bottom, top = self.value(s, 0.0), self.value(s, 1.0)
            for m in margin:
                worst = max(worst,
                            float(np.linalg.norm(self.value(s, m) - bottom)),
                            float(np.linalg.norm(self.value(s, 1 - m) - top)),
                            float(np.linalg.norm(self.d_t(s, m))),
                            float(np.linalg.norm(self.d_t(s, 1 - m))))
        return worst, worst <= tol

    def swept_area(self, n=64):
        """Signed area integral of det(d_s, d_t) (midpoint rule; dim 2 only)."""
        if self.dim != 2:
            raise GeometryError("swept area is defined for plane bigons")
        total = 0.0
        h = 1.0 / n
        for i in range(n):
            for j in range(n):
                s, t = (i + 0.5) * h, (j + 0.5) * h
                u, v = self.d_s(s, t), self.d_t(s, t)
                total += (u[0] * v[1] - u[1] * v[0]) * h * h
        return total


def _pi_path(height=1.0, delta=DEFAULT_SITTING):
    up = Path.line((0.0, 0.0), (0.0, height), delta)
    across = Path.line((0.0, height), (1.0, height), delta)
    down = Path.line((1.0, height), (1.0, 0.0), delta)
    return up.compose(across).compose(down)


def shipped_path(name, delta=DEFAULT_SITTING):
    if name == "segment-x":
        return Path.line((0.0, 0.0), (1.0, 0.0), delta)
    if name == "segment-y":
        return Path.line((0.0, 0.0), (0.0, 1.0), delta)
    if name == "circle-arc":
        return Path.arc((0.0, 0.0), 1.0, 0.0, math.pi / 2, delta)
    if name == "full-circle":
        return Path.arc((0.0, 0.0), 1.0, 0.0, 2 * math.pi, delta)
    if name == "constant-origin":
        return Path.constant((0.0, 0.0))
    if name == "pi-detour":
        return _pi_path(1.0, delta)
    raise GeometryError(f"unknown path fixture {name!r}")


def shipped_bigon(name, delta=DEFAULT_SITTING):
    if name == "unit-square":
        return Bigon.interpolate(shipped_path("segment-x", delta),
                                 _pi_path(1.0, delta), delta)
    if name == "half-square-lower":
        return Bigon.interpolate(shipped_path("segment-x", delta),
                                 _pi_path(0.5, delta), delta)
    if name == "half-square-upper":
        return Bigon.interpolate(_pi_path(0.5, delta), _pi_path(1.0, delta), delta)
    if name == "thin-sliver":
        return Bigon.thin_sliver(shipped_path("segment-x", delta),
                                 Reparam.sitting(delta),
                                 Reparam.power_of_sitting(2, delta), delta)
    if name == "identity-segment":
        return Bigon.identity(shipped_path("segment-x", delta))
    if name == "constant-origin":
        return Bigon.constant((0.0, 0.0))
    raise GeometryError(f"unknown bigon fixture {name!r}")


PATH_FIXTURES = ["segment-x", "segment-y", "circle-arc", "full-circle",
                 "constant-origin", "pi-detour"]
BIGON_FIXTURES = ["unit-square", "half-square-lower", "half-square-upper",
                  "thin-sliver", "identity-segment", "constant-origin"]
