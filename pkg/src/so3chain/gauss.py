"""Gauss (triangular) coordinates of the monodromy matrix and the full
catalogue of coordinate identities, realized as finite-dimensional operator
identities on the chain.

The decomposition is T(u) = F(u) D(u) E(u) with F unit upper-triangular,
D = diag(k_1, k_2, k_3) and E unit lower-triangular; extraction starts from
the bottom-right corner (k_3 = T_33) and works upward, inverting k_3 and
the derived k_2.

Since the fundamental chain has z(u) != 1, the diagonal-coordinate
identities are tested in their z-carrying form:

    (a) k_1(u) = z(u) k_3(u - c/2)^{-1}
    (c) z(u)   = k_2(u) k_2(u + c/2) k_3(u - c/2) k_3(u + c/2)^{-1}

while all F/E identities are insensitive to the scalar factor and keep
their usual form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import chain as chain_mod
from . import hilbert
from .chain import ChainSpec, MonodromyEval, central_z_formula, monodromy
from .errors import PoleError
from .rational import RationalKit

POINT_TOL = 1e-6


@dataclass(frozen=True)
class GaussFrame:
    """The nine Gauss coordinates at one spectral point, each a dim x dim matrix."""

    u: complex
    k1: np.ndarray
    k2: np.ndarray
    k3: np.ndarray
    F21: np.ndarray
    F31: np.ndarray
    F32: np.ndarray
    E12: np.ndarray
    E13: np.ndarray
    E23: np.ndarray


def gauss_decompose(t: MonodromyEval) -> GaussFrame:
    """Extract the Gauss coordinates from a monodromy evaluation.

    Raises SingularError naming which diagonal coordinate degenerated.
    """
    T = t.block
    k3 = T(3, 3)
    k3_inv = hilbert.inverse(k3, which="k3")
    E13 = k3_inv @ T(3, 1)
    E23 = k3_inv @ T(3, 2)
    F32 = T(2, 3) @ k3_inv
    F31 = T(1, 3) @ k3_inv
    k2 = T(2, 2) - F32 @ k3 @ E23
    k2_inv = hilbert.inverse(k2, which="k2")
    E12 = k2_inv @ (T(2, 1) - F32 @ k3 @ E13)
    F21 = (T(1, 2) - F31 @ k3 @ E23) @ k2_inv
    k1 = T(1, 1) - F21 @ k2 @ E12 - F31 @ k3 @ E13
    frame = GaussFrame(
        u=t.u, k1=k1, k2=k2, k3=k3, F21=F21, F31=F31, F32=F32, E12=E12, E13=E13, E23=E23
    )
    for m in (k1, k2, k3, F21, F31, F32, E12, E13, E23):
        m.setflags(write=False)
    return frame


def reconstruct(frame: GaussFrame):
    """Rebuild the 3x3 monodromy blocks from a Gauss frame (roundtrip check)."""
    f = frame
    return (
        (
            f.k1 + f.F21 @ f.k2 @ f.E12 + f.F31 @ f.k3 @ f.E13,
            f.F21 @ f.k2 + f.F31 @ f.k3 @ f.E23,
            f.F31 @ f.k3,
        ),
        (
            f.k2 @ f.E12 + f.F32 @ f.k3 @ f.E13,
            f.k2 + f.F32 @ f.k3 @ f.E23,
            f.F32 @ f.k3,
        ),
        (f.k3 @ f.E13, f.k3 @ f.E23, f.k3),
    )


@lru_cache(maxsize=4096)
def frame(spec: ChainSpec, u: complex) -> GaussFrame:
    """Gauss frame of the chain at u (cached; extraction is deterministic)."""
    return gauss_decompose(monodromy(spec, complex(u)))


def tilde_coordinates(f: GaussFrame):
    """Coordinates of F(u)^{-1} and E(u)^{-1}:

    Ft_{i+1,i} = -F_{i+1,i},  Ft_31 = -F31 + F21 F32,
    Et_{i,i+1} = -E_{i,i+1},  Et_13 = -E13 + E23 E12.
    """
    return {
        "Ft21": -f.F21,
        "Ft32": -f.F32,
        "Ft31": -f.F31 + f.F21 @ f.F32,
        "Et12": -f.E12,
        "Et23": -f.E23,
        "Et13": -f.E13 + f.E23 @ f.E12,
    }


def inverse_frame(f: GaussFrame):
    """Tilde coordinates plus the transpose-inverse monodromy assembled from them.

    Returns (tilde, that_blocks) where that_blocks is the 3x3 block matrix

        That_{i,j}(u) = sum_l Et_{l,4-j} k_l^{-1} Ft_{4-i,l},

    which on the chain satisfies That(u) = z(u)^{-1} T(u - c/2).
    """
    td = tilde_coordinates(f)
    k1i = hilbert.inverse(f.k1, which="k1")
    k2i = hilbert.inverse(f.k2, which="k2")
    k3i = hilbert.inverse(f.k3, which="k3")
    Ft21, Ft31, Ft32 = td["Ft21"], td["Ft31"], td["Ft32"]
    Et12, Et13, Et23 = td["Et12"], td["Et13"], td["Et23"]
    that = (
        (
            k3i + Et23 @ k2i @ Ft32 + Et13 @ k1i @ Ft31,
            k2i @ Ft32 + Et12 @ k1i @ Ft31,
            k1i @ Ft31,
        ),
        (
            Et23 @ k2i + Et13 @ k1i @ Ft21,
            k2i + Et12 @ k1i @ Ft21,
            k1i @ Ft21,
        ),
        (Et13 @ k1i, Et12 @ k1i, k1i),
    )
    return td, that


def point_valid(spec: ChainSpec, u: complex, tol: float = POINT_TOL) -> bool:
    """Accept u only if u, u +/- c/2, u +/- c all avoid the chain singular set."""
    c = spec.c
    sing = spec.singular_points()
    for shift in (0, c / 2, -c / 2, c, -c):
        w = u + shift
        for s in sing:
            if abs(w - s) < tol:
                return False
    return True


def _require_valid(spec: ChainSpec, u: complex):
    if not point_valid(spec, u):
        raise PoleError(f"evaluation point {u} too close to the chain singular set")


def identity_suite(spec: ChainSpec, u: complex) -> dict:
    """Residuals of the single-point coordinate identities at u.

    (a) k1(u) = z(u) k3(u - c/2)^{-1}
    (b) F21(u) = -F32(u + c/2) and E12(u) = -E23(u + c/2)
    (c) z(u) = k2(u) k2(u + c/2) k3(u - c/2) k3(u + c/2)^{-1}
    (d) F31(u) = -F32(u)^2 / 2 and E13(u) = -E23(u)^2 / 2
    plus the reconstruction roundtrip and the transpose-inverse assembly
    That(u) = z(u)^{-1} T(u - c/2).
    """
    _require_valid(spec, u)
    c = spec.c
    f0 = frame(spec, u)
    fp = frame(spec, u + c / 2)
    fm = frame(spec, u - c / 2)
    z = central_z_formula(spec, u)
    zp = central_z_formula(spec, u + c / 2)
    eye = np.eye(spec.dim, dtype=complex)
    res = {}

    res["k1_from_k3"] = hilbert.rel_residual(f0.k1, z * hilbert.inverse(fm.k3, "k3"))
    res["f21_shift"] = hilbert.rel_residual(f0.F21, -fp.F32)
    res["e12_shift"] = hilbert.rel_residual(f0.E12, -fp.E23)
    res["central_from_k"] = hilbert.rel_residual(
        z * eye, f0.k2 @ fp.k2 @ fm.k3 @ hilbert.inverse(fp.k3, "k3")
    )
    res["f31_square"] = hilbert.rel_residual(f0.F31, -0.5 * (f0.F32 @ f0.F32))
    res["e13_square"] = hilbert.rel_residual(f0.E13, -0.5 * (f0.E23 @ f0.E23))

    t_blocks = monodromy(spec, u).blocks
    rec = reconstruct(f0)
    res["gauss_roundtrip"] = max(
        hilbert.rel_residual(rec[i][j], t_blocks[i][j]) for i in range(3) for j in range(3)
    )

    _, that = inverse_frame(f0)
    tm = monodromy(spec, u - c / 2).blocks
    res["transpose_inverse"] = max(
        hilbert.rel_residual(z * that[i][j], tm[i][j]) for i in range(3) for j in range(3)
    )

    # vacuum data: k_i |0> = lambda_i(u) |0>, E-coordinates annihilate |0>
    vac = hilbert.vacuum(spec.L, spec.allow_large)
    lam = chain_mod.vacuum_eigenvalues(spec, u)
    res["k_on_vacuum"] = max(
        float(np.linalg.norm(k @ vac - l * vac) / abs(l))
        for k, l in zip((f0.k1, f0.k2, f0.k3), lam)
    )
    res["e_annihilates_vacuum"] = max(
        float(np.linalg.norm(e @ vac)) for e in (f0.E12, f0.E13, f0.E23)
    )

    # equivalent arrangement of (a): k1(u) k3(u - c/2) = z(u)
    res["central_from_k1k3"] = hilbert.rel_residual(z * eye, f0.k1 @ fm.k3)
    return res


def commutator_suite(spec: ChainSpec, u: complex, v: complex) -> dict:
    """Residuals of the two-point commutation identities at (u, v).

    Covers the k3 conjugations, the [E23, F32] commutator, the k2
    conjugations, the quadratic exchange identities for F32 and E23, and
    the same-point shift relations (k3-conjugation by c, and the
    commutator at spacing c).
    """
    _require_valid(spec, u)
    _require_valid(spec, v)
    c = spec.c
    for bad in (0, c, -c, c / 2, -c / 2):
        if abs((u - v) - bad) < POINT_TOL:
            raise PoleError(f"excluded spacing u - v = {bad}")
    kit = RationalKit(c)
    fu = frame(spec, u)
    fv = frame(spec, v)
    fuc = frame(spec, u + c)
    fup = frame(spec, u + c / 2)
    k3u_inv = hilbert.inverse(fu.k3, "k3")
    k2u_inv = hilbert.inverse(fu.k2, "k2")
    res = {}

    # k3(u) F32(v) k3(u)^{-1} = f(u,v) F32(v) - g(u,v) F32(u), and the E-counterpart
    res["k3_conj_f"] = hilbert.rel_residual(
        fu.k3 @ fv.F32 @ k3u_inv, kit.f(u, v) * fv.F32 - kit.g(u, v) * fu.F32
    )
    res["k3_conj_e"] = hilbert.rel_residual(
        k3u_inv @ fv.E23 @ fu.k3, kit.f(u, v) * fv.E23 - kit.g(u, v) * fu.E23
    )

    # [E23(u), F32(v)] = g(u,v) (k2(v) k3(v)^{-1} - k2(u) k3(u)^{-1})
    k3v_inv = hilbert.inverse(fv.k3, "k3")
    res["ef_commutator"] = hilbert.rel_residual(
        fu.E23 @ fv.F32 - fv.F32 @ fu.E23,
        kit.g(u, v) * (fv.k2 @ k3v_inv - fu.k2 @ k3u_inv),
    )

    # k2(u) F32(v) k2(u)^{-1} = f(u,v)/f(u,v+c/2) F32(v) + g(u,v) F32(u)
    #                           + g(v,u+c/2) F32(u+c/2), and the E-counterpart
    coeff = kit.f(u, v) / kit.f(u, v + c / 2)
    res["k2_conj_f"] = hilbert.rel_residual(
        fu.k2 @ fv.F32 @ k2u_inv,
        coeff * fv.F32 + kit.g(u, v) * fu.F32 + kit.g(v, u + c / 2) * fup.F32,
    )
    res["k2_conj_e"] = hilbert.rel_residual(
        k2u_inv @ fv.E23 @ fu.k2,
        coeff * fv.E23 + kit.g(u, v) * fu.E23 + kit.g(v, u + c / 2) * fup.E23,
    )

    # quadratic exchange identities
    d = u - v
    res["ff_exchange"] = hilbert.rel_residual(
        (d + c / 2) * fu.F32 @ fv.F32 - (d - c / 2) * fv.F32 @ fu.F32,
        (c / 2) * (fu.F32 @ fu.F32 + fv.F32 @ fv.F32),
    )
    res["ee_exchange"] = hilbert.rel_residual(
        (d - c / 2) * fu.E23 @ fv.E23 - (d + c / 2) * fv.E23 @ fu.E23,
        -(c / 2) * (fu.E23 @ fu.E23 + fv.E23 @ fv.E23),
    )

    # same-point shift relations
    res["k3_shift_f"] = hilbert.rel_residual(k3u_inv @ fu.F32 @ fu.k3, fuc.F32)
    res["k3_shift_e"] = hilbert.rel_residual(fu.k3 @ fu.E23 @ k3u_inv, fuc.E23)
    # [E23(u+c), F32(u)] = k2(u) k3(u)^{-1} - k2(u+c) k3(u+c)^{-1}
    res["ef_spacing_c"] = hilbert.rel_residual(
        fuc.E23 @ fu.F32 - fu.F32 @ fuc.E23,
        fu.k2 @ k3u_inv - fuc.k2 @ hilbert.inverse(fuc.k3, "k3"),
    )
    return res
