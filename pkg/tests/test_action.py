import math

import numpy as np
import pytest

from so3chain import hilbert
from so3chain.action import (
    action_rhs,
    action_terms,
    action_verify,
    e23_zero_mode,
    enumerate_partitions,
    s_factor,
    specialized_actions,
    zero_mode_action,
    zero_mode_residual,
)
from so3chain.bethe import bethe_vector
from so3chain.chain import ChainSpec, monodromy, vacuum_eigenvalues
from so3chain.errors import CardinalityError
from so3chain.gauss import frame
from so3chain.rational import RationalKit
from so3chain.spectrum import solve_be

from conftest import draw_params, draw_point


def test_partition_counts():
    eta = list(range(3))  # r = 1
    assert len(enumerate_partitions(eta, 1, 3)) == 1
    only = enumerate_partitions(eta, 1, 3)[0]
    assert only[0] == () and only[2] == ()
    assert len(enumerate_partitions(eta, 1, 2)) == 3
    eta4 = list(range(4))  # r = 2
    assert len(enumerate_partitions(eta4, 1, 1)) == math.comb(4, 2)
    # general count: C(n, i-1) * C(n-i+1, 3-j)
    assert len(enumerate_partitions(eta4, 2, 2)) == 4 * 3


def test_partition_cardinality_errors():
    with pytest.raises(CardinalityError):
        enumerate_partitions([1, 2], 3, 1)  # needs 2 + 2 > 2 elements
    with pytest.raises(CardinalityError):
        enumerate_partitions([1, 2, 3], 4, 1)


def test_s_factor_frozen_values():
    assert s_factor(1, 3) == pytest.approx(-0.5)
    assert s_factor(3, 3) == pytest.approx(2.0)
    assert s_factor(1, 1) == pytest.approx(2.0)  # 2^1 * (-1)^2
    assert s_factor(2, 3) == pytest.approx(1.0)
    assert s_factor(1, 2) == pytest.approx(-1.0)
    assert s_factor(3, 1) == pytest.approx(-8.0)


def test_action_13_is_single_stretched_vector(chain2, rng):
    z = draw_point(rng, chain2)
    ps = draw_params(rng, chain2, 1)
    lam3 = vacuum_eigenvalues(chain2, z)[2]
    rhs = action_rhs(chain2, 1, 3, z, ps)
    direct = -0.5 * lam3 * bethe_vector(chain2, ps + [z, z + chain2.c / 2]).vector
    assert np.linalg.norm(rhs - direct) < 1e-10 * np.linalg.norm(direct)


def test_action_23_on_vacuum(chain2, rng):
    z = draw_point(rng, chain2)
    lam3 = vacuum_eigenvalues(chain2, z)[2]
    rhs = action_rhs(chain2, 2, 3, z, [])
    b1 = lam3 * bethe_vector(chain2, [z]).vector
    t23 = monodromy(chain2, z).block(2, 3) @ hilbert.vacuum(2)
    assert np.linalg.norm(rhs - b1) < 1e-12 * np.linalg.norm(b1)
    assert np.linalg.norm(rhs - t23) < 1e-12 * np.linalg.norm(t23)


def test_lower_triangular_action_empty_sum(chain2, rng):
    z = draw_point(rng, chain2)
    # T31 drops the excitation number by two: empty partition set below r = 2
    assert np.linalg.norm(action_rhs(chain2, 3, 1, z, [])) == 0.0
    vac = hilbert.vacuum(2)
    assert np.linalg.norm(monodromy(chain2, z).block(3, 1) @ vac) < 1e-12
    assert action_verify(chain2, 3, 1, z, []) < 1e-10


def test_t22_action_hand_expanded_at_r1(chain2, rng):
    # three contributing partitions at r = 1, written out termwise
    # (the ff factors over the empty remainder sets are 1)
    kit = RationalKit(chain2.c)
    z = draw_point(rng, chain2)
    (u1,) = draw_params(rng, chain2, 1)
    zp = z + chain2.c / 2
    lam = lambda w: vacuum_eigenvalues(chain2, w)  # noqa: E731
    l2z, l3z = lam(z)[1], lam(z)[2]
    ratio = lam(u1)[1] / lam(u1)[2]
    bv = lambda pts: bethe_vector(chain2, pts).vector  # noqa: E731
    expected = (
        l2z * kit.ff(u1, z) * kit.ff(zp, u1) * bv([u1])
        + 2 * l3z * kit.gg(z, u1) * ratio * bv([z])
        - 2 * l2z / kit.hh(z, u1) * bv([zp])
    )
    rhs = action_rhs(chain2, 2, 2, z, [u1])
    assert np.linalg.norm(rhs - expected) < 1e-10 * np.linalg.norm(expected)
    direct = monodromy(chain2, z).block(2, 2) @ bv([u1])
    assert np.linalg.norm(direct - expected) < 1e-10 * np.linalg.norm(expected)


def test_action_verify_full_grid_small(chain2, rng):
    # spot coverage here; the full grid runs in the acceptance suite
    z = draw_point(rng, chain2)
    for r in (0, 1, 2):
        ps = draw_params(rng, chain2, r)
        for i in range(1, 4):
            for j in range(1, 4):
                assert action_verify(chain2, i, j, z, ps) < 1e-8, (i, j, r)


def test_action_verify_single_site(chain1, rng):
    z = draw_point(rng, chain1)
    ps = draw_params(rng, chain1, 2)
    for i in range(1, 4):
        for j in range(1, 4):
            assert action_verify(chain1, i, j, z, ps) < 1e-8


def test_pruning_counts_distinguished_pair(chain2, rng):
    z = draw_point(rng, chain2)
    ps = draw_params(rng, chain2, 1)
    terms, pruned = action_terms(chain2, 2, 2, z, ps)
    # r = 1: C(3,1)*C(2,1) = 6 partitions, 3 killed by the exact zero
    assert len(terms) + pruned == 6
    assert pruned == 3


def test_specialized_forms_match_partition_sum(chain2, rng):
    z = draw_point(rng, chain2)
    for which, (i, j) in {
        "lac1": (1, 1),
        "lac2": (2, 2),
        "lac3": (3, 3),
        "lac4": (1, 3),
        "lac5": (1, 2),
        "lac6": (2, 3),
        "T12Act": (1, 2),
    }.items():
        for r in (0, 1, 2):
            ps = draw_params(rng, chain2, r)
            rhs = action_rhs(chain2, i, j, z, ps)
            spec_form = specialized_actions(chain2, which, z, ps)
            scale = max(np.linalg.norm(rhs), 1e-30)
            assert np.linalg.norm(spec_form - rhs) / scale < 1e-10, (which, r)


def test_lac1_leading_coefficient_uses_lambda1(chain2, rng):
    # the T11 reduction lambda2(z) lambda2(z+c/2) / lambda3(z+c/2) = lambda1(z)
    # holds identically on the fundamental chain
    z = draw_point(rng, chain2)
    lam_z = vacuum_eigenvalues(chain2, z)
    lam_zp = vacuum_eigenvalues(chain2, z + chain2.c / 2)
    assert abs(lam_z[1] * lam_zp[1] / lam_zp[2] - lam_z[0]) < 1e-12 * abs(lam_z[0])


def test_zero_mode_action_vacuum_and_generic(chain2, rng):
    assert np.linalg.norm(e23_zero_mode(chain2) @ hilbert.vacuum(2)) == 0.0
    assert np.linalg.norm(zero_mode_action(chain2, [])) == 0.0
    for r in (1, 2, 3):
        ps = draw_params(rng, chain2, r)
        assert zero_mode_residual(chain2, ps) < 1e-8


def test_zero_mode_annihilates_on_shell():
    spec = ChainSpec(L=2, c=1.0, xi=(-0.6, 0.6))
    roots = solve_be(spec, 1, seeds=[[0.3]])[0]
    state = bethe_vector(spec, list(roots))
    out = e23_zero_mode(spec) @ state.vector
    assert np.linalg.norm(out) < 1e-8 * np.linalg.norm(state.vector)


def test_t13_vacuum_matches_f31_square(chain2, rng):
    # the corner action at r = 0 against the quadratic coordinate relation
    z = draw_point(rng, chain2)
    lam3 = vacuum_eigenvalues(chain2, z)[2]
    vac = hilbert.vacuum(2)
    lhs = monodromy(chain2, z).block(1, 3) @ vac
    f32 = frame(chain2, z).F32
    core = bethe_vector(chain2, [z, z + chain2.c / 2]).vector
    assert np.linalg.norm(core - f32 @ f32 @ vac) < 1e-9
    assert np.linalg.norm(lhs + 0.5 * lam3 * core) < 1e-9 * max(np.linalg.norm(lhs), 1e-30)
