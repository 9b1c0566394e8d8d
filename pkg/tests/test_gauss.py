import numpy as np
import pytest

from so3chain import hilbert
from so3chain.chain import ChainSpec, central_z_formula, monodromy, vacuum_eigenvalues
from so3chain.errors import PoleError, SingularError
from so3chain.gauss import (
    commutator_suite,
    frame,
    gauss_decompose,
    identity_suite,
    inverse_frame,
    point_valid,
    reconstruct,
    tilde_coordinates,
)

from conftest import draw_point


def test_roundtrip_reconstruction(chain2, rng):
    u = draw_point(rng, chain2)
    t = monodromy(chain2, u)
    rec = reconstruct(gauss_decompose(t))
    for i in range(3):
        for j in range(3):
            assert hilbert.rel_residual(rec[i][j], t.blocks[i][j]) < 1e-9


def test_diagonal_coordinates_on_vacuum(chain2, rng):
    u = draw_point(rng, chain2)
    f = frame(chain2, u)
    vac = hilbert.vacuum(2)
    lam = vacuum_eigenvalues(chain2, u)
    for k, l in zip((f.k1, f.k2, f.k3), lam):
        assert np.linalg.norm(k @ vac - l * vac) < 1e-10 * abs(l)
    for e in (f.E12, f.E13, f.E23):
        assert np.linalg.norm(e @ vac) < 1e-12


def test_k3_vacuum_frozen_value():
    spec = ChainSpec(L=1, c=1.0, xi=(0.0,))
    f = frame(spec, 2.0)
    vac = hilbert.vacuum(1)
    assert np.allclose(f.k3 @ vac, 0.6 * vac)  # 3/5 from the eigenvalue table


def test_extraction_is_deterministic(chain2, rng):
    u = draw_point(rng, chain2)
    f1 = gauss_decompose(monodromy(chain2, u))
    f2 = gauss_decompose(monodromy(chain2, u))
    for name in ("k1", "k2", "k3", "F21", "F31", "F32", "E12", "E13", "E23"):
        assert getattr(f1, name).tobytes() == getattr(f2, name).tobytes()


def test_singular_error_names_offender():
    spec = ChainSpec(L=1, c=1.0, xi=(0.0,))
    # k3(u) = diag((u-c/2)/(u+c/2), 1, (u+c)/u) degenerates at u = c/2
    with pytest.raises(SingularError) as exc:
        gauss_decompose(monodromy(spec, 0.5 + 1e-14))
    assert exc.value.which == "k3"


def test_tilde_coordinates_and_frame_inverse(chain2, rng):
    u = draw_point(rng, chain2)
    f = frame(chain2, u)
    td = tilde_coordinates(f)
    assert np.array_equal(td["Ft21"], -f.F21)
    assert np.array_equal(td["Et12"], -f.E12)
    # F(u) F(u)^{-1} = I as 3x3 operator matrices
    dim = chain2.dim
    eye = np.eye(dim)
    zero = np.zeros((dim, dim))
    fmat = [[eye, f.F21, f.F31], [zero, eye, f.F32], [zero, zero, eye]]
    finv = [[eye, td["Ft21"], td["Ft31"]], [zero, eye, td["Ft32"]], [zero, zero, eye]]
    for i in range(3):
        for j in range(3):
            acc = sum(fmat[i][a] @ finv[a][j] for a in range(3))
            assert np.linalg.norm(acc - (eye if i == j else zero)) < 1e-9


def test_transpose_inverse_assembly(chain2, rng):
    u = draw_point(rng, chain2)
    _, that = inverse_frame(frame(chain2, u))
    z = central_z_formula(chain2, u)
    tm = monodromy(chain2, u - chain2.c / 2).blocks
    for i in range(3):
        for j in range(3):
            assert hilbert.rel_residual(z * that[i][j], tm[i][j]) < 1e-8


def test_k1_identity_with_extracted_central_value(chain2, rng):
    # identity (a) with z(u) taken from the scalar-product extraction rather
    # than the closed form: both sides computed independently
    from so3chain.chain import central_z
    from so3chain import hilbert as h

    u = draw_point(rng, chain2)
    z = central_z(chain2, u)
    f0 = frame(chain2, u)
    fm = frame(chain2, u - chain2.c / 2)
    rhs = z * h.inverse(fm.k3, "k3")
    assert h.rel_residual(f0.k1, rhs) < 1e-8


def test_identity_suite_single_site_squares():
    spec = ChainSpec(L=1, c=1.0, xi=(0.0,))
    res = identity_suite(spec, 2.3 + 0.9j)
    assert res["f31_square"] < 1e-12
    assert res["e13_square"] < 1e-12


def test_identity_suite_random_chains(rng):
    worst = {}
    for L in (1, 2, 3):
        for _ in range(3):
            from so3chain.runners import random_chain

            spec = random_chain(rng, L)
            for _ in range(3):
                u = draw_point(rng, spec)
                for name, res in identity_suite(spec, u).items():
                    worst[name] = max(worst.get(name, 0.0), res)
    for name, res in worst.items():
        assert res < 1e-8, (name, res)


def test_commutator_suite_random_chain(chain2, rng):
    worst = {}
    for _ in range(4):
        u, v = draw_point(rng, chain2), draw_point(rng, chain2)
        try:
            res = commutator_suite(chain2, u, v)
        except PoleError:
            continue
        for name, r in res.items():
            worst[name] = max(worst.get(name, 0.0), r)
    assert worst, "no valid point pairs drawn"
    for name, res in worst.items():
        assert res < 1e-8, (name, res)


def test_commutator_suite_excluded_spacings(chain2, rng):
    u = draw_point(rng, chain2)
    with pytest.raises(PoleError):
        commutator_suite(chain2, u, u + chain2.c / 2)


def test_exchange_identity_at_half_spacing(chain2, rng):
    # the quadratic exchange identity specialized to v = u + c/2:
    # c F32(u + c/2) F32(u) = (c/2)(F32(u)^2 + F32(u + c/2)^2)
    c = chain2.c
    u = draw_point(rng, chain2)
    f0 = frame(chain2, u).F32
    fp = frame(chain2, u + c / 2).F32
    lhs = c * fp @ f0
    rhs = (c / 2) * (f0 @ f0 + fp @ fp)
    assert np.linalg.norm(lhs - rhs) < 1e-8 * max(np.linalg.norm(lhs), 1.0)


def test_point_validity_guard(chain2):
    assert not point_valid(chain2, chain2.xi[0])
    assert not point_valid(chain2, chain2.xi[0] + chain2.c / 2)
    with pytest.raises(PoleError):
        identity_suite(chain2, chain2.xi[0] + chain2.c)
