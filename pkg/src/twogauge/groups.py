"""Concrete groups: finite multiplication tables and matrix families.

Finite groups live on index sets {0..n-1} with a Cayley table validated on
construction (associativity, identity, inverses). Matrix groups are the named
families U1, SU2, SO3, GL(n) and the one-element TRIVIAL group, each paired
with its Lie algebra and a fixed, documented basis:

    u(1):  e1 = [[1j]]
    su(2): ek = -i/2 * sigma_k            (k = 1, 2, 3)
    so(3): Lk with (Lk) v = e_k x v       (cross-product generators)
    gl(n): elementary matrices E_ij, row-major

exp is scaling-and-squaring Pade (scipy expm); log eigen-checks the argument
first and refuses cut-locus points with the offending eigenvalue in the error.
Group products renormalize by polar projection when the membership drift
exceeds TAU_GRP / 10.
"""

import itertools

import numpy as np
import scipy.linalg

from .errors import GroupDomainError, LogRangeError

TAU_GRP = 1e-9

_SIGMA = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


# ---------------------------------------------------------------- finite side

def _perm_mul(p, q):
    """Composition 'apply q first, then p' on index tuples."""
    return tuple(p[i] for i in q)


def _cycle_notation(p):
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        parts.append("(" + "".join(str(k + 1) for k in cyc) + ")")
    return "".join(parts) if parts else "e"


class FiniteGroup:
    """Group on {0..n-1} given by an n x n multiplication table."""

    kind = "finite"

    def __init__(self, table, names=None, name="finite"):
        table = np.asarray(table, dtype=int)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise GroupDomainError("multiplication table must be square")
        n = table.shape[0]
        if n == 0 or table.min() < 0 or table.max() >= n:
            raise GroupDomainError("table entries must index the element set")
        ident = None
        for e in range(n):
            if all(table[e, a] == a and table[a, e] == a for a in range(n)):
                ident = e
                break
        if ident is None:
            raise GroupDomainError("table has no identity element")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if table[table[a, b], c] != table[a, table[b, c]]:
                        raise GroupDomainError(
                            f"table not associative at ({a},{b},{c})")
        inv = np.full(n, -1, dtype=int)
        for a in range(n):
            hits = np.nonzero(table[a] == ident)[0]
            if len(hits) != 1 or table[hits[0], a] != ident:
                raise GroupDomainError(f"element {a} has no two-sided inverse")
            inv[a] = hits[0]
        self.table = table
        self.order = n
        self.identity = ident
        self._inv = inv
        self.name = name
        self.names = list(names) if names else [str(i) for i in range(n)]
        if len(self.names) != n:
            raise GroupDomainError("names length must match group order")

    def elements(self):
        return range(self.order)

    def contains(self, a):
        return isinstance(a, (int, np.integer)) and 0 <= int(a) < self.order

    def _check(self, a):
        if not self.contains(a):
            raise GroupDomainError(f"{a!r} is not an element of {self.name}")
        return int(a)

    def mul(self, a, b):
        return int(self.table[self._check(a), self._check(b)])

    def inv(self, a):
        return int(self._inv[self._check(a)])

    def conj(self, g, h):
        return self.mul(self.mul(g, h), self.inv(g))

    def eq(self, a, b, tol=None):
        return self._check(a) == self._check(b)

    def renormalize(self, a):
        return self._check(a)

    def random(self, rng):
        return int(rng.integers(self.order))

    def label(self, a):
        return self.names[self._check(a)]

    def index_of(self, name):
        return self.names.index(name)

    def __repr__(self):
        return f"<FiniteGroup {self.name} order={self.order}>"

    @classmethod
    def trivial(cls):
        return cls([[0]], names=["e"], name="1")

    @classmethod
    def cyclic(cls, n):
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return cls(table, names=[str(a) for a in range(n)], name=f"Z{n}")

    @classmethod
    def symmetric(cls, n):
        perms = sorted(itertools.permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[_perm_mul(p, q)] for q in perms] for p in perms]
        g = cls(table, names=[_cycle_notation(p) for p in perms], name=f"S{n}")
        g.perms = perms
        return g


def automorphisms(group):
    """All automorphisms of a finite group, as image arrays phi[a].

    Backtracking over the Cayley table; order is deterministic (images tried
    in increasing element order).
    """
    n = group.order
    table = group.table
    found = []
    phi = [-1] * n
    used = [False] * n
    phi[group.identity] = group.identity
    used[group.identity] = True

    order_of = [1] * n
    for a in range(n):
        k, x = 1, a
        while x != group.identity:
            x = group.mul(x, a)
            k += 1
        order_of[a] = k

    def place(i):
        if i == n:
            # propagation above is a pruning heuristic; verify fully here
            if all(phi[table[x, y]] == table[phi[x], phi[y]]
                   for x in range(n) for y in range(n)):
                found.append(tuple(phi))
            return
        if phi[i] != -1:
            place(i + 1)
            return
        for img in range(n):
            if used[img] or order_of[img] != order_of[i]:
                continue
            # tentatively set and propagate products with already-placed elements
            updates = []
            ok = True
            phi[i] = img
            used[img] = True
            updates.append(i)
            for a in range(n):
                if phi[a] == -1 or not ok:
                    continue
                for x, y in ((i, a), (a, i)):
                    if phi[x] == -1 or phi[y] == -1:
                        continue
                    z = table[x, y]
                    img_z = table[phi[x], phi[y]]
                    if phi[z] == -1:
                        if used[img_z]:
                            ok = False
                            break
                        phi[z] = img_z
                        used[img_z] = True
                        updates.append(z)
                    elif phi[z] != img_z:
                        ok = False
                        break
            if ok:
                place(i + 1)
            for z in reversed(updates):
                used[phi[z]] = False
                phi[z] = -1
        return

    place(0)
    return sorted(found)


def automorphism_group(group):
    """The automorphism group of a finite group, plus the list of image arrays."""
    autos = automorphisms(group)
    index = {a: i for i, a in enumerate(autos)}
    table = [[index[tuple(p[q[x]] for x in range(group.order))] for q in autos]
             for p in autos]
    names = []
    for p in autos:
        name = None
        if group.name.startswith("Z"):
            gen_img = p[1] if group.order > 1 else 0
            name = f"x->{gen_img}x"
        else:
            for k in range(group.order):
                if all(p[x] == group.conj(k, x) for x in range(group.order)):
                    name = f"conj[{group.label(k)}]"
                    break
        names.append(name or f"auto{index[p]}")
    aut = FiniteGroup(table, names=names, name=f"Aut({group.name})")
    return aut, autos


# ---------------------------------------------------------------- matrix side

class LieAlgebra:
    """Real Lie algebra of matrices with a fixed basis and projection."""

    def __init__(self, name, basis, n, dtype, projector):
        self.name = name
        self.basis = [np.asarray(b, dtype=dtype) for b in basis]
        self.dim = len(self.basis)
        self.n = n
        self.dtype = dtype
        self._project = projector
        if self.dim:
            flat = np.stack([np.concatenate([b.real.ravel(), b.imag.ravel()])
                             for b in self.basis])
            self._pinv = np.linalg.pinv(flat.T)
            self._stack = np.stack(self.basis)
        else:
            self._pinv = None
            self._stack = np.zeros((0, n, n), dtype=dtype)
        self._structure = None

    def zero(self):
        return np.zeros((self.n, self.n), dtype=self.dtype)

    def project(self, X):
        return self._project(np.asarray(X, dtype=self.dtype))

    def contains(self, X, tol=TAU_GRP):
        X = np.asarray(X, dtype=self.dtype)
        if X.shape != (self.n, self.n):
            return False
        return np.linalg.norm(self.project(X) - X) <= tol

    def coords(self, X):
        if self.dim == 0:
            return np.zeros(0)
        X = np.asarray(X, dtype=self.dtype)
        flat = np.concatenate([X.real.ravel(), X.imag.ravel()])
        return self._pinv @ flat

    def from_coords(self, c):
        if self.dim == 0:
            return self.zero()
        return np.tensordot(np.asarray(c, dtype=float), self._stack, axes=1)

    def random(self, rng, scale=0.6):
        c = rng.normal(size=self.dim) * scale
        nrm = np.linalg.norm(c)
        if nrm > 1.0:
            c = c / nrm
        return self.from_coords(c)

    def structure_constants(self):
        """f[a, b, c] with [e_b, e_c] = sum_a f[a,b,c] e_a."""
        if self._structure is None:
            f = np.zeros((self.dim, self.dim, self.dim))
            for b in range(self.dim):
                for c in range(self.dim):
                    f[:, b, c] = self.coords(
                        self.basis[b] @ self.basis[c] - self.basis[c] @ self.basis[b])
            self._structure = f
        return self._structure

    def __repr__(self):
        return f"<LieAlgebra {self.name} dim={self.dim}>"


def _proj_skew_hermitian(X):
    return (X - X.conj().T) / 2


def _proj_su(X):
    Y = (X - X.conj().T) / 2
    return Y - (np.trace(Y) / X.shape[0]) * np.eye(X.shape[0])


def _proj_antisymmetric(X):
    return np.real(X - X.T) / 2 if np.iscomplexobj(X) else (X - X.T) / 2


def u1_algebra():
    return LieAlgebra("u(1)", [np.array([[1j]])], 1, complex, _proj_skew_hermitian)


def su2_algebra():
    basis = [-0.5j * s for s in _SIGMA]
    return LieAlgebra("su(2)", basis, 2, complex, _proj_su)


def so3_algebra():
    L1 = np.array([[0., 0., 0.], [0., 0., -1.], [0., 1., 0.]])
    L2 = np.array([[0., 0., 1.], [0., 0., 0.], [-1., 0., 0.]])
    L3 = np.array([[0., -1., 0.], [1., 0., 0.], [0., 0., 0.]])
    return LieAlgebra("so(3)", [L1, L2, L3], 3, float, _proj_antisymmetric)


def gl_algebra(n):
    basis = []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n))
            E[i, j] = 1.0
            basis.append(E)
    return LieAlgebra(f"gl({n})", basis, n, float, lambda X: np.real(X))


def trivial_algebra():
    return LieAlgebra("0", [], 1, float, lambda X: np.zeros((1, 1)))


class MatrixGroup:
    """A named matrix group with membership test, polar projection, exp and log."""

    kind = "matrix"

    def __init__(self, name, n, algebra, *, dtype=complex, unitary=False,
                 special=False, invertible_only=False, trivial=False):
        self.name = name
        self.n = n
        self.algebra = algebra
        self.dtype = dtype
        self.unitary = unitary
        self.special = special
        self.invertible_only = invertible_only
        self.trivial = trivial

    @property
    def identity(self):
        return np.eye(self.n, dtype=self.dtype)

    def _cast(self, g):
        g = np.asarray(g)
        if self.dtype is float and np.iscomplexobj(g):
            if g.size and np.abs(g.imag).max() > 1e-9:
                raise GroupDomainError(
                    f"{self.name} is a real matrix group, got complex entries")
            g = g.real
        return g.astype(self.dtype, copy=False)

    def defect(self, g):
        """Distance from the group's defining constraints (not from membership)."""
        g = self._cast(g)
        if g.shape != (self.n, self.n):
            return np.inf
        if self.trivial:
            return float(np.linalg.norm(g - np.eye(self.n)))
        d = 0.0
        if self.unitary:
            d = float(np.linalg.norm(g.conj().T @ g - np.eye(self.n)))
            if self.special:
                d = max(d, float(abs(np.linalg.det(g) - 1.0)))
        elif self.invertible_only:
            d = 0.0 if abs(np.linalg.det(g)) > 1e-12 else np.inf
        if self.dtype is float:
            d = max(d, float(np.linalg.norm(np.asarray(g).imag)))
        return d

    def contains(self, g, tol=TAU_GRP):
        g = np.asarray(g)
        if g.shape != (self.n, self.n):
            return False
        return self.defect(g) <= tol

    def _check(self, g):
        g = self._cast(g)
        if g.shape != (self.n, self.n):
            raise GroupDomainError(
                f"expected {self.n}x{self.n} matrix for {self.name}, got shape {g.shape}")
        if self.defect(g) > 1e-6:
            raise GroupDomainError(f"matrix is not in {self.name} (defect {self.defect(g):.2e})")
        return g

    def project(self, g):
        """Nearest group element (polar projection; det-corrected for special groups)."""
        g = self._cast(g)
        if self.trivial:
            return np.eye(self.n)
        if self.invertible_only:
            return g
        u, _, vh = np.linalg.svd(g)
        q = u @ vh
        if self.special:
            det = np.linalg.det(q)
            q = q / det ** (1.0 / self.n)
        if self.dtype is float:
            q = np.real(q)
        return q

    def renormalize(self, g):
        if self.invertible_only or self.trivial:
            return g
        if self.defect(g) > TAU_GRP / 10:
            return self.project(g)
        return g

    def mul(self, a, b):
        return self.renormalize(self._check(a) @ self._check(b))

    def inv(self, a):
        a = self._check(a)
        if self.unitary:
            return a.conj().T
        if self.trivial:
            return a
        return np.linalg.inv(a)

    def conj(self, g, h):
        return self.renormalize(self._check(g) @ self._check(h) @ self.inv(g))

    def eq(self, a, b, tol=TAU_GRP):
        a = np.asarray(a)
        b = np.asarray(b)
        return a.shape == b.shape and np.linalg.norm(a - b) <= tol

    def exp(self, x):
        if self.algebra.dim == 0:
            return self.identity
        g = scipy.linalg.expm(np.asarray(x, dtype=self.dtype))
        return self.renormalize(g)

    def log(self, g):
        """Principal logarithm; refuses arguments at the cut locus.

        For the compact families the cut locus is exactly where an eigenvalue
        reaches the negative real axis; the offending eigenvalue is reported.
        """
        g = self._check(g)
        if self.algebra.dim == 0:
            return self.algebra.zero()
        w = np.linalg.eigvals(g)
        if self.unitary or self.dtype is float:
            angles = np.abs(np.angle(w))
            k = int(np.argmax(angles))
            if angles[k] >= np.pi - 1e-8:
                raise LogRangeError(
                    f"log at cut locus of {self.name}: eigenvalue {w[k]:.6g} "
                    "has phase at pi", eigenvalue=w[k])
        else:
            if np.any(np.abs(w) < 1e-12):
                raise LogRangeError("log of a singular matrix", eigenvalue=w[np.argmin(np.abs(w))])
        X = scipy.linalg.logm(g)
        return self.algebra.project(X)

    def random(self, rng, scale=0.6):
        if self.trivial:
            return self.identity
        if self.invertible_only:
            g = np.eye(self.n) + 0.3 * rng.normal(size=(self.n, self.n))
            while abs(np.linalg.det(g)) < 1e-3:
                g = np.eye(self.n) + 0.3 * rng.normal(size=(self.n, self.n))
            return g
        return self.exp(self.algebra.random(rng, scale))

    def label(self, g):
        return np.array2string(np.asarray(g), precision=4, suppress_small=True)

    def __repr__(self):
        return f"<MatrixGroup {self.name}>"


def U1():
    return MatrixGroup("U1", 1, u1_algebra(), unitary=True)


def SU2():
    return MatrixGroup("SU2", 2, su2_algebra(), unitary=True, special=True)


def SO3():
    return MatrixGroup("SO3", 3, so3_algebra(), dtype=float, unitary=True, special=True)


def GL(n):
    return MatrixGroup(f"GL{n}", n, gl_algebra(n), dtype=float, invertible_only=True)


def TRIVIAL():
    return MatrixGroup("TRIVIAL", 1, trivial_algebra(), dtype=float, trivial=True)


def group_arithmetic(group, op, a, b=None):
    """Dispatch helper: op in {'mul','inv','eq'} with membership checks."""
    if op == "mul":
        return group.mul(a, b)
    if op == "inv":
        return group.inv(a)
    if op == "eq":
        return group.eq(a, b)
    raise GroupDomainError(f"unknown operation {op!r}")
