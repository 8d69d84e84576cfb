"""Crossed module axioms, differential consistency, catalog integrity."""

import numpy as np
import pytest

from twogauge.crossed import (
    crossed_module, differential_consistency, from_tables,
    peiffer_violating_fixture, shipped_finite_names, shipped_matrix_names,
    validate_crossed_module,
)
from twogauge.errors import GroupDomainError
from twogauge.groups import FiniteGroup


AXIOM_NAMES = {"t-homomorphism", "alpha-identity", "alpha-automorphism",
               "alpha-action", "equivariance", "peiffer"}


@pytest.mark.parametrize("name", shipped_finite_names())
def test_finite_catalog_validates_exhaustively(name):
    cm = crossed_module(name)
    rep = validate_crossed_module(cm, mode="exhaustive")
    assert rep.passed
    assert {c.name for c in rep.checks} == AXIOM_NAMES


@pytest.mark.parametrize("name", shipped_matrix_names())
def test_matrix_catalog_validates_sampled(name):
    cm = crossed_module(name)
    rep = validate_crossed_module(cm, mode="sampled", samples=40)
    assert rep.passed


def test_peiffer_fixture_fails_with_witness():
    rep = validate_crossed_module(peiffer_violating_fixture())
    assert not rep.passed
    assert [c.name for c in rep.failures] == ["peiffer"]
    w = rep.check("peiffer").witness
    # trivial action on nonabelian S3: found a genuinely noncommuting pair
    assert set(w) == {"h1", "h2"}
    H = FiniteGroup.symmetric(3)
    h1 = H.names.index(w["h1"])
    h2 = H.names.index(w["h2"])
    assert H.mul(h1, h2) != H.mul(h2, h1)


def test_exhaustive_mode_rejected_for_matrix_pairs():
    with pytest.raises(GroupDomainError):
        validate_crossed_module(crossed_module("CONJ(SU2)"), mode="exhaustive")


@pytest.mark.parametrize("name", shipped_matrix_names())
def test_differential_consistency(name):
    rep = differential_consistency(crossed_module(name), samples=20, eps=1e-3)
    assert rep.passed
    for c in rep.checks:
        assert c.residual <= 10.0


def test_differential_requires_data():
    with pytest.raises(GroupDomainError):
        differential_consistency(crossed_module("CONJ(S3)"))


def test_aut_su2_covering_and_lift():
    cm = crossed_module("AUT(SU2)")
    rng = np.random.default_rng(7)
    for _ in range(10):
        h = cm.H.random(rng)
        R = cm.t(h)
        cm.G._check(R)
        # covering is 2:1, a homomorphism, and conjugation-compatible
        h2 = cm.H.random(rng)
        assert np.linalg.norm(cm.t(cm.H.mul(h, h2)) - cm.G.mul(cm.t(h), cm.t(h2))) < 1e-9
        assert np.linalg.norm(cm.t(-h) - R) < 1e-12
        g = cm.G.random(rng)
        assert np.linalg.norm(cm.t(cm.alpha(g, h)) - cm.G.conj(g, cm.t(h))) < 1e-9


def test_aut_su2_dt_matrix_and_inverse():
    cm = crossed_module("AUT(SU2)")
    M = cm.dt_matrix()
    assert M.shape == (3, 3)
    # shipped bases are aligned: dt carries e_k^su2 to e_k^so3
    assert np.allclose(M, np.eye(3), atol=1e-12)
    rng = np.random.default_rng(3)
    y = cm.G.algebra.random(rng)
    assert np.linalg.norm(cm.dt(cm._dt_inverse(y)) - y) < 1e-12


def test_dalpha_group_matches_finite_difference():
    # closed form against the generic central-difference fallback
    for name in ["CONJ(SU2)", "AUT(SU2)"]:
        cm = crossed_module(name)
        rng = np.random.default_rng(11)
        for _ in range(5):
            y = cm.G.algebra.random(rng)
            h = cm.H.random(rng)
            closed = cm.dalpha_group(y, h)
            saved = cm._dalpha_group
            cm._dalpha_group = None
            try:
                fd = cm.dalpha_group(y, h)
            finally:
                cm._dalpha_group = saved
            assert np.linalg.norm(closed - fd) < 1e-8


def test_act_algebra_is_algebra_automorphism():
    cm = crossed_module("AUT(SU2)")
    rng = np.random.default_rng(5)
    g = cm.G.random(rng)
    x1 = cm.H.algebra.random(rng)
    x2 = cm.H.algebra.random(rng)
    lhs = cm.act_algebra(g, x1 @ x2 - x2 @ x1)
    r1 = cm.act_algebra(g, x1)
    r2 = cm.act_algebra(g, x2)
    assert np.linalg.norm(lhs - (r1 @ r2 - r2 @ r1)) < 1e-10
    # exponential naturality: alpha(g)(exp x) = exp(act(g) x)
    assert np.linalg.norm(cm.alpha(g, cm.H.exp(x1)) - cm.H.exp(cm.act_algebra(g, x1))) < 1e-10


def test_gerbe_requires_abelian_h():
    # trivial t + trivial action satisfies Peiffer iff H is abelian
    assert validate_crossed_module(crossed_module("GERBE(Z5)")).passed
    assert not validate_crossed_module(peiffer_violating_fixture()).passed


def test_flip_module_action_table():
    cm = crossed_module("FLIP(Z3)")
    assert cm.alpha(1, 1) == 2
    assert cm.alpha(1, 2) == 1
    assert cm.alpha(0, 1) == 1
    assert validate_crossed_module(cm).passed


def test_from_tables_roundtrip_and_shape_errors():
    cfg = {"name": "flip-inline",
           "G": {"table": [[0, 1], [1, 0]]},
           "H": {"table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]},
           "t": [0, 0, 0],
           "alpha": [[0, 1, 2], [0, 2, 1]]}
    cm = from_tables(cfg)
    assert validate_crossed_module(cm, mode="exhaustive").passed
    bad = dict(cfg, t=[0, 0])
    with pytest.raises(GroupDomainError):
        from_tables(bad)


def test_unknown_name_lists_catalog():
    with pytest.raises(GroupDomainError) as ei:
        crossed_module("NOPE(1)")
    assert "CONJ(SU2)" in str(ei.value)


def test_aut_z5_structure():
    cm = crossed_module("AUT(Z5)")
    assert cm.G.order == 4 and cm.H.order == 5
    # t is trivial (Z5 abelian, no inner automorphisms)
    assert all(cm.t(h) == cm.G.identity for h in cm.H.elements())
    rep = validate_crossed_module(cm, mode="exhaustive")
    assert rep.passed
