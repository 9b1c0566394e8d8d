"""Inhomogeneous fundamental chain: Lax operators, monodromy matrix,
vacuum eigenvalues, the central scalar z(u), zero modes, and the exchange
(RTT) residual checker.

The monodromy matrix is the ordered product T(u) = L_L(u) ... L_1(u) of
local Lax operators L_k(u) = R(u, xi_k), read as a 3x3 matrix in the
auxiliary space whose entries act on site k.  On this chain the central
scalar is z(u) = prod_k (1 - c^2/(u - xi_k)^2), not 1, so every identity
that is usually quoted at z = 1 is handled in its z-carrying form
downstream (see the gauss module).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import hilbert, rmat
from .errors import NotScalarError, PoleError

SEPARATION_TOL = 1e-8
SCALAR_TOL = 1e-9


@dataclass(frozen=True)
class ChainSpec:
    """Immutable chain description: site count, coupling, inhomogeneities.

    By default the inhomogeneities must keep the singular set non-degenerate
    (pairwise separations and their c/2-shifts at least SEPARATION_TOL);
    ``strict=False`` lifts that check so that homogeneous chains can be
    built deliberately (every evaluation point still avoids the poles).
    """

    L: int
    c: complex
    xi: tuple
    allow_large: bool = False
    strict: bool = True

    def __post_init__(self):
        hilbert.check_sites(self.L, self.allow_large)
        xi = tuple(complex(x) for x in self.xi)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "c", complex(self.c))
        if self.c == 0:
            raise ValueError("coupling constant must be nonzero")
        if len(xi) != self.L:
            raise ValueError(f"expected {self.L} inhomogeneities, got {len(xi)}")
        if not self.strict:
            return
        half = self.c / 2
        for j in range(self.L):
            for k in range(j + 1, self.L):
                d = xi[j] - xi[k]
                for shift in (0, half, -half):
                    if abs(d - shift) < SEPARATION_TOL:
                        raise ValueError(
                            "degenerate inhomogeneities: "
                            f"|xi_{j + 1} - xi_{k + 1} - {shift}| < {SEPARATION_TOL}"
                        )

    @property
    def dim(self) -> int:
        return 3**self.L

    def singular_points(self) -> list:
        """Points where Lax entries or their c/2-shifts degenerate."""
        half = self.c / 2
        pts = []
        for x in self.xi:
            pts.extend([x, x + half, x - half, x + self.c, x - self.c])
        return pts

    def to_json(self) -> str:
        return json.dumps(
            {
                "L": self.L,
                "c": [self.c.real, self.c.imag],
                "xi": [[x.real, x.imag] for x in self.xi],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ChainSpec":
        data = json.loads(text)
        return cls(
            L=int(data["L"]),
            c=complex(data["c"][0], data["c"][1]),
            xi=tuple(complex(re, im) for re, im in data["xi"]),
        )


@dataclass(frozen=True)
class MonodromyEval:
    """T(u) at a fixed spectral point: 3x3 auxiliary array of operators."""

    u: complex
    blocks: tuple  # 3x3 nested tuple of read-only (dim x dim) arrays

    def block(self, i: int, j: int) -> np.ndarray:
        """Entry T_{i,j}(u), indices 1-based as in the auxiliary space."""
        return self.blocks[i - 1][j - 1]


def lax(u: complex, k: int, spec: ChainSpec) -> np.ndarray:
    """Local Lax operator L_k(u) as an array of shape (3, 3, 3, 3).

    lax(u, k, spec)[i-1, j-1] is the 3x3 quantum-space entry sitting at
    auxiliary position (i, j).
    """
    x = spec.xi[k - 1]
    c = spec.c
    if abs(u - x) < rmat.POLE_TOL:
        raise PoleError(f"Lax pole at site {k}: u = xi_{k}")
    if abs(u - x + c / 2) < rmat.POLE_TOL:
        raise PoleError(f"Lax pole at site {k}: u = xi_{k} - c/2")
    out = np.zeros((3, 3, 3, 3), dtype=complex)
    gp = c / (u - x)
    gq = c / (u - x + c / 2)
    eye = np.eye(3, dtype=complex)
    for i in range(1, 4):
        for j in range(1, 4):
            block = gp * rmat.eunit(j, i) - gq * rmat.eunit(4 - i, 4 - j)
            if i == j:
                block = block + eye
            out[i - 1, j - 1] = block
    return out


@lru_cache(maxsize=4096)
def monodromy(spec: ChainSpec, u: complex) -> MonodromyEval:
    """Ordered product T(u) = L_L(u) ... L_1(u) over the auxiliary space."""
    u = complex(u)
    blocks = None
    for k in range(1, spec.L + 1):
        lk = lax(u, k, spec)
        emb = [
            [hilbert.embed(lk[i, j], k, spec.L, spec.allow_large) for j in range(3)]
            for i in range(3)
        ]
        if blocks is None:
            blocks = emb
        else:
            blocks = [
                [sum(emb[i][a] @ blocks[a][j] for a in range(3)) for j in range(3)]
                for i in range(3)
            ]
    for row in blocks:
        for b in row:
            b.setflags(write=False)
    return MonodromyEval(u=u, blocks=tuple(tuple(row) for row in blocks))


def monodromy_matrix(spec: ChainSpec, u: complex) -> np.ndarray:
    """T(u) assembled as one matrix on C^3 (x) H (size 3*dim)."""
    return np.block([list(row) for row in monodromy(spec, u).blocks])


def vacuum_eigenvalues(spec: ChainSpec, u: complex):
    """Closed-form eigenvalues (lambda_1, lambda_2, lambda_3) of T_{ii}(u) on the vacuum."""
    c = spec.c
    l1 = 1.0 + 0.0j
    l3 = 1.0 + 0.0j
    for x in spec.xi:
        d = u - x
        if abs(d) < rmat.POLE_TOL or abs(d + c / 2) < rmat.POLE_TOL:
            raise PoleError(f"vacuum eigenvalue pole at u = {u}")
        l1 *= (d + c) / d
        l3 *= (d - c / 2) / (d + c / 2)
    return l1, 1.0 + 0.0j, l3


def vacuum_ratio(spec: ChainSpec, u: complex) -> complex:
    """lambda2/lambda3 as one rational function: prod (u - xi + c/2)/(u - xi - c/2).

    Regular at u = xi (where lambda1 alone is singular); poles only at
    u = xi + c/2.
    """
    c = spec.c
    out = 1.0 + 0.0j
    for x in spec.xi:
        d = u - x
        if abs(d - c / 2) < rmat.POLE_TOL:
            raise PoleError(f"vacuum ratio pole at u = {u}")
        out *= (d + c / 2) / (d - c / 2)
    return out


def central_z_formula(spec: ChainSpec, u: complex) -> complex:
    """The central scalar z(u) = prod_k (1 - c^2/(u - xi_k)^2)."""
    out = 1.0 + 0.0j
    for x in spec.xi:
        d = u - x
        if abs(d) < rmat.POLE_TOL:
            raise PoleError(f"z(u) pole at u = xi = {x}")
        out *= 1 - (spec.c / d) ** 2
    return out


def _aux_transpose_blocks(blocks):
    """Anti-diagonal transposition in the auxiliary space: (T^t)_{ij} = T_{j'i'}."""
    return [[blocks[2 - j][2 - i] for j in range(3)] for i in range(3)]


def _central_product(spec: ChainSpec, u: complex):
    """(z, relative non-scalarity) of T^t(u - c/2) T(u)."""
    tu = monodromy(spec, u).blocks
    ts = _aux_transpose_blocks(monodromy(spec, u - spec.c / 2).blocks)
    dim = spec.dim
    prod = [
        [sum(ts[i][a] @ tu[a][j] for a in range(3)) for j in range(3)]
        for i in range(3)
    ]
    z = sum(np.trace(prod[i][i]) for i in range(3)) / (3 * dim)
    eye = np.eye(dim, dtype=complex)
    resid = 0.0
    for i in range(3):
        for j in range(3):
            target = z * eye if i == j else 0 * eye
            resid = max(resid, np.linalg.norm(prod[i][j] - target))
    return z, resid / max(abs(z), 1e-300)


def central_scalar_residual(spec: ChainSpec, u: complex) -> float:
    """Relative deviation of T^t(u - c/2) T(u) from a multiple of the identity."""
    return float(_central_product(spec, u)[1])


def central_z(spec: ChainSpec, u: complex) -> complex:
    """Extract z(u) from T^t(u - c/2) T(u) = z(u) I and assert scalarity.

    Raises NotScalarError when the product deviates from a multiple of the
    identity by more than SCALAR_TOL (relative).
    """
    z, rel = _central_product(spec, u)
    if rel > SCALAR_TOL:
        raise NotScalarError(
            f"T^t(u - c/2) T(u) is not scalar at u = {u} (residual {rel:.3e})",
            residual=rel,
        )
    return z


@lru_cache(maxsize=64)
def zero_modes(spec: ChainSpec):
    """Zero modes T[0]: the exact coefficient of 1/u in T(u).

    T[0]_{ij} = c * sum_k embed(E_{ji} - E_{i'j'}, k); computed from the
    local sum rather than numerical extrapolation, so entries that cancel
    do so exactly.
    """
    dim = spec.dim
    out = []
    for i in range(1, 4):
        row = []
        for j in range(1, 4):
            local = rmat.eunit(j, i) - rmat.eunit(4 - i, 4 - j)
            tot = np.zeros((dim, dim), dtype=complex)
            if np.any(local):
                for k in range(1, spec.L + 1):
                    tot += hilbert.embed(local, k, spec.L, spec.allow_large)
                tot *= spec.c
            tot.setflags(write=False)
            row.append(tot)
        out.append(tuple(row))
    return tuple(out)


def rrt2zm_residual(spec: ChainSpec, u: complex, i: int, j: int, k: int, l: int) -> float:
    """Residual of the zero-mode commutation relation

    [T_{i,j}(u), T_{k,l}[0]] = c ( d_{il} T_{k,j}(u) - d_{kj} T_{i,l}(u)
                                   - d_{i k'} T_{l',j}(u) + d_{l' j} T_{i,k'}(u) ).
    """
    t = monodromy(spec, u)
    t0 = zero_modes(spec)
    a = t.block(i, j)
    b = t0[k - 1][l - 1]
    lhs = a @ b - b @ a
    c = spec.c
    rhs = np.zeros_like(lhs)
    if i == l:
        rhs = rhs + t.block(k, j)
    if k == j:
        rhs = rhs - t.block(i, l)
    if i == 4 - k:
        rhs = rhs - t.block(4 - l, j)
    if 4 - l == j:
        rhs = rhs + t.block(i, 4 - k)
    rhs = c * rhs
    scale = max(np.linalg.norm(lhs), np.linalg.norm(rhs), np.linalg.norm(c * a))
    return float(np.linalg.norm(lhs - rhs) / max(scale, 1e-300))


def zero_mode_ladder_residuals(spec: ChainSpec, u: complex) -> dict:
    """Residuals of the ladder relations generating all entries from the
    E23 zero mode and the corner entries:

        T12(u) = -T23(u) + [E23[0], T13(u)]/c
        T22(u) =  T33(u) + [E23[0], T23(u)]/c
        T11(u) =  T22(u) - [E23[0], T12(u)]/c
        T32(u) =  [E23[0], T33(u)]/c
        T21(u) =  [E23[0], T11(u)]/c
        T31(u) = -[E23[0], T32(u)]/c
    """
    t = monodromy(spec, u)
    e23 = zero_modes(spec)[2][1]  # = T_{3,2}[0]
    c = spec.c

    def comm(a):
        return (e23 @ a - a @ e23) / c

    checks = {
        "ladder_t12": (t.block(1, 2), -t.block(2, 3) + comm(t.block(1, 3))),
        "ladder_t22": (t.block(2, 2), t.block(3, 3) + comm(t.block(2, 3))),
        "ladder_t11": (t.block(1, 1), t.block(2, 2) - comm(t.block(1, 2))),
        "ladder_t32": (t.block(3, 2), comm(t.block(3, 3))),
        "ladder_t21": (t.block(2, 1), comm(t.block(1, 1))),
        "ladder_t31": (t.block(3, 1), -comm(t.block(3, 2))),
    }
    scale = max(np.linalg.norm(t.block(i, j)) for i in (1, 2, 3) for j in (1, 2, 3))
    return {
        name: float(np.linalg.norm(lhs - rhs) / scale) for name, (lhs, rhs) in checks.items()
    }


def rtt_residual(spec: ChainSpec, u: complex, v: complex) -> float:
    """Exchange-relation residual on C^3 (x) C^3 (x) H.

    Operator norm of R(u,v) T_1(u) T_2(v) - T_2(v) T_1(u) R(u,v),
    normalized by ||T(u)|| ||T(v)||.
    """
    params = rmat.RParams(c=spec.c)
    r = np.kron(rmat.r_matrix(u, v, params), np.eye(spec.dim, dtype=complex))
    tu = monodromy(spec, u).blocks
    tv = monodromy(spec, v).blocks
    eye3 = np.eye(3, dtype=complex)
    dim = spec.dim
    t1 = np.zeros((9 * dim, 9 * dim), dtype=complex)
    t2 = np.zeros_like(t1)
    for i in range(3):
        for j in range(3):
            e = np.zeros((3, 3))
            e[i, j] = 1.0
            t1 += np.kron(np.kron(e, eye3), tu[i][j])
            t2 += np.kron(np.kron(eye3, e), tv[i][j])
    lhs = r @ t1 @ t2
    rhs = t2 @ t1 @ r
    scale = np.linalg.norm(monodromy_matrix(spec, u), 2) * np.linalg.norm(
        monodromy_matrix(spec, v), 2
    )
    return float(np.linalg.norm(lhs - rhs, 2) / scale)
