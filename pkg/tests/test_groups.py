"""Group kernel: table validation, permutation oracle, exp/log contracts."""

import numpy as np
import pytest

from twogauge.errors import GroupDomainError, LogRangeError
from twogauge.groups import (
    GL, SO3, SU2, TRIVIAL, U1, FiniteGroup, automorphism_group, automorphisms,
)


def _perm_oracle(p, q):
    # independent composition: apply q first, then p
    return tuple(p[q[i]] for i in range(len(p)))


def _series_expm(x, terms=60):
    # independent oracle: plain power series, summed to machine precision
    x = np.asarray(x, dtype=complex)
    acc = np.eye(x.shape[0], dtype=complex)
    term = np.eye(x.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ x / k
        acc = acc + term
    return acc


# -------------------------------------------------------------------- finite

def test_table_validation_rejects_broken_tables():
    with pytest.raises(GroupDomainError):
        FiniteGroup([[0, 1], [1, 1]])  # 1 has no inverse
    with pytest.raises(GroupDomainError):
        FiniteGroup([[1, 0], [0, 0]])  # no identity row/col pair
    bad = [[0, 1, 2], [1, 2, 0], [2, 1, 0]]  # not associative
    with pytest.raises(GroupDomainError):
        FiniteGroup(bad)


def test_cyclic_group():
    z5 = FiniteGroup.cyclic(5)
    assert z5.mul(3, 4) == 2
    assert z5.inv(2) == 3
    assert z5.identity == 0


def test_symmetric_group_matches_permutation_oracle():
    s3 = FiniteGroup.symmetric(3)
    assert s3.order == 6
    for a, p in enumerate(s3.perms):
        for b, q in enumerate(s3.perms):
            assert s3.perms[s3.mul(a, b)] == _perm_oracle(p, q)
    # the pinned concrete product: (12) then composed with (13) applied second
    a = s3.perms.index((1, 0, 2))  # swaps slots 1,2 in 1-based labels
    b = s3.perms.index((2, 1, 0))
    assert s3.perms[s3.mul(b, a)] == _perm_oracle((2, 1, 0), (1, 0, 2))


def test_finite_membership_errors():
    z3 = FiniteGroup.cyclic(3)
    with pytest.raises(GroupDomainError):
        z3.mul(0, 5)
    with pytest.raises(GroupDomainError):
        z3.inv(-1)


def test_automorphisms_s3():
    s3 = FiniteGroup.symmetric(3)
    autos = automorphisms(s3)
    assert len(autos) == 6  # S3 is complete: Aut(S3) = Inn(S3) = S3
    aut, imgs = automorphism_group(s3)
    assert aut.order == 6
    # every automorphism is inner for S3
    assert all(name.startswith("conj[") for name in aut.names)


def test_automorphisms_cyclic():
    z5 = FiniteGroup.cyclic(5)
    autos = automorphisms(z5)
    assert len(autos) == 4  # units mod 5
    aut, imgs = automorphism_group(z5)
    assert sorted(p[1] for p in imgs) == [1, 2, 3, 4]


# -------------------------------------------------------------------- matrix

@pytest.mark.parametrize("factory", [U1, SU2, SO3])
def test_exp_matches_series_oracle(factory):
    g = factory()
    rng = np.random.default_rng(42)
    for _ in range(10):
        x = g.algebra.random(rng)
        got = g.exp(x)
        want = _series_expm(x)
        if g.dtype is float:
            want = want.real
        assert np.linalg.norm(got - want) < 1e-13


@pytest.mark.parametrize("factory", [U1, SU2, SO3])
def test_log_round_trip(factory):
    g = factory()
    rng = np.random.default_rng(7)
    for _ in range(20):
        x = g.algebra.random(rng, scale=0.8)
        back = g.log(g.exp(x))
        assert np.linalg.norm(back - x) < 1e-10
        assert g.algebra.contains(back)


def test_log_cut_locus_reports_eigenvalue():
    su2 = SU2()
    minus_one = -np.eye(2, dtype=complex)
    with pytest.raises(LogRangeError) as err:
        su2.log(minus_one)
    assert err.value.eigenvalue is not None
    assert abs(err.value.eigenvalue + 1.0) < 1e-9

    so3 = SO3()
    # rotation by pi about z is the SO(3) cut locus
    rot_pi = np.diag([-1.0, -1.0, 1.0])
    with pytest.raises(LogRangeError):
        so3.log(rot_pi)


def test_membership_and_projection():
    su2 = SU2()
    rng = np.random.default_rng(3)
    g = su2.random(rng)
    assert su2.contains(g)
    noisy = g + 1e-8 * rng.normal(size=(2, 2))
    fixed = su2.project(noisy)
    assert su2.contains(fixed)
    assert np.linalg.norm(fixed - g) < 1e-7

    so3 = SO3()
    r = so3.random(rng)
    assert so3.contains(r)
    assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)
    assert abs(np.linalg.det(r) - 1) < 1e-12


def test_mixed_operand_errors():
    su2 = SU2()
    with pytest.raises(GroupDomainError):
        su2.mul(np.eye(2), np.eye(3))
    with pytest.raises(GroupDomainError):
        su2.mul(np.eye(2), 2 * np.eye(2))  # not unitary
    so3 = SO3()
    with pytest.raises(GroupDomainError):
        so3.mul(np.eye(3), 1j * np.eye(3))


def test_algebra_bases_and_structure_constants():
    su2 = su2 = SU2().algebra
    f = su2.structure_constants()
    # [e1, e2] = e3 and cyclic
    assert np.allclose(f[:, 0, 1], [0, 0, 1])
    assert np.allclose(f[:, 1, 2], [1, 0, 0])
    assert np.allclose(f[:, 2, 0], [0, 1, 0])
    so3 = SO3().algebra
    f3 = so3.structure_constants()
    assert np.allclose(f3[:, 0, 1], [0, 0, 1])
    # coords/from_coords round trip
    rng = np.random.default_rng(0)
    c = rng.normal(size=3)
    assert np.allclose(su2.coords(su2.from_coords(c)), c)
    assert np.allclose(so3.coords(so3.from_coords(c)), c)


def test_trivial_and_gl():
    t = TRIVIAL()
    assert t.contains(np.eye(1))
    assert not t.contains(2 * np.eye(1))
    assert t.algebra.dim == 0
    gl2 = GL(2)
    rng = np.random.default_rng(1)
    g = gl2.random(rng)
    assert gl2.contains(g)
    assert np.allclose(gl2.mul(g, gl2.inv(g)), np.eye(2), atol=1e-10)
