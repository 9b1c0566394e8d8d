import numpy as np
import pytest

from so3chain.chain import ChainSpec, vacuum_eigenvalues
from so3chain.errors import RealityError
from so3chain.gl2ref import (
    Gl2ChainSpec,
    gl2_bethe,
    gl2_monodromy,
    gl2_rtt_residual,
    gl2_scalar,
    gl2_vacuum,
    gl2_vacuum_eigenvalues,
    sp_corr_test,
)


@pytest.fixture(scope="module")
def parent():
    return ChainSpec(L=2, c=1.0, xi=(0.31, -0.42))


@pytest.fixture(scope="module")
def ref(parent):
    return Gl2ChainSpec.from_so3(parent)


def test_doubling_layout(parent, ref):
    assert ref.n_sites == 4
    assert ref.c == parent.c / 2
    assert np.allclose(ref.xi, (0.31, 0.81, -0.42, 0.08))


def test_vacuum_ratio_matches_parent(parent, ref, rng):
    # the whole point of the doubling: lambda1/lambda2 of the reference equals
    # lambda2/lambda3 of the parent as a function of u
    for _ in range(10):
        u = complex(rng.uniform(-3, 3), rng.uniform(-2, 2))
        if min(abs(u - x) for x in ref.xi) < 0.2:
            continue
        if min(abs(u - s) for s in parent.singular_points()) < 0.2:
            continue
        l1, l2 = gl2_vacuum_eigenvalues(ref, u)
        lam = vacuum_eigenvalues(parent, u)
        assert abs(l1 / l2 - lam[1] / lam[2]) < 1e-12 * abs(l1 / l2)


def test_reference_rtt(ref):
    assert gl2_rtt_residual(ref, 1.3 + 0.4j, -0.7 + 0.9j) < 1e-10


def test_reference_monodromy_large_u(ref):
    t = gl2_monodromy(ref, 1e7)
    for i in range(2):
        for j in range(2):
            target = np.eye(ref.dim) if i == j else 0
            assert np.linalg.norm(t[i][j] - target) < 1e-5


def test_reference_vacuum_eigenvalues_direct(ref, rng):
    u = 2.7 + 0.4j
    t = gl2_monodromy(ref, u)
    vac = gl2_vacuum(ref)
    l1, l2 = gl2_vacuum_eigenvalues(ref, u)
    assert np.linalg.norm(t[0][0] @ vac - l1 * vac) < 1e-12 * abs(l1)
    assert np.linalg.norm(t[1][1] @ vac - l2 * vac) < 1e-12
    assert np.linalg.norm(t[1][0] @ vac) < 1e-12


def test_scalar_r0_and_symmetry(ref):
    assert gl2_scalar(ref, [], []) == pytest.approx(1.0)
    us, vs = [0.9, -1.3], [1.7, 0.6]
    s = gl2_scalar(ref, us, vs)
    assert gl2_scalar(ref, us[::-1], vs) == pytest.approx(s)
    assert gl2_scalar(ref, us, vs[::-1]) == pytest.approx(s)


def test_scalar_two_site_brute_force():
    # one parent site -> two reference sites, dim 4: expand the pairing by hand
    spec2 = Gl2ChainSpec(n_sites=2, c=0.5, xi=(0.0, 0.5))
    u, v = 1.9, -1.4
    t12u = gl2_monodromy(spec2, u)[0][1]
    t12v = gl2_monodromy(spec2, v)[0][1]
    vac = gl2_vacuum(spec2)
    expected = complex((t12u @ vac).conj() @ (t12v @ vac))
    assert gl2_scalar(spec2, [u], [v]) == pytest.approx(expected)


def test_sp_corr_r0_is_one(parent):
    rep = sp_corr_test(parent, 0, samples=3, seed=1)
    assert rep["rho_mean"] == pytest.approx(1.0)
    assert rep["rho_spread"] == 0.0


def test_sp_corr_constancy(parent):
    for r in (1, 2):
        rep = sp_corr_test(parent, r, samples=10, seed=7)
        assert rep["rho_spread"] < 1e-6
        # the dagger-dual convention constant: rho/2^{-r} lands at 4^r
        assert abs(rep["two_pow_minus_r_ratio"] - 4.0**r) < 1e-6 * 4.0**r


def test_sp_corr_requires_real_chain():
    spec = ChainSpec(L=2, c=1.0, xi=(0.31 + 0.1j, -0.42))
    with pytest.raises(RealityError):
        sp_corr_test(spec, 1, samples=2, seed=0)
