"""Minimal rational gl2 reference chain for the scalar-product comparison.

Doubling the sites of a 3-state chain (each xi_k becomes the pair xi_k,
xi_k + c/2) and halving the coupling produces a 2-state chain whose vacuum
ratio lambda1/lambda2 coincides with lambda2/lambda3 of the parent as a
function of the spectral parameter:

    ff(u, xi) ff(u, xi + c/2) = (u - xi + c/2)/(u - xi - c/2).

On top of this chain the scalar product of Bethe vectors (dagger-dual, same
convention as the parent) is compared: the ratio rho = S^parent/S^reference
must be constant in the parameters at fixed excitation number, while its
value is a pure convention constant reported against 2^(-r).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .chain import ChainSpec
from .errors import DegenerateSample, PoleError, RealityError
from .rmat import POLE_TOL

_E2 = [[np.zeros((2, 2), dtype=complex) for _ in range(2)] for _ in range(2)]
for _i in range(2):
    for _j in range(2):
        _E2[_i][_j][_i, _j] = 1.0


@dataclass(frozen=True)
class Gl2ChainSpec:
    """Two-state chain: site count, coupling, inhomogeneities."""

    n_sites: int
    c: complex  # already the halved coupling
    xi: tuple

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(complex(x) for x in self.xi))
        object.__setattr__(self, "c", complex(self.c))
        if len(self.xi) != self.n_sites:
            raise ValueError("one inhomogeneity per site")
        if self.n_sites > 12:
            raise ValueError("reference chain capped at 12 sites")

    @property
    def dim(self) -> int:
        return 2**self.n_sites

    @classmethod
    def from_so3(cls, spec: ChainSpec) -> "Gl2ChainSpec":
        xi2 = []
        for x in spec.xi:
            xi2.extend([x, x + spec.c / 2])
        return cls(n_sites=2 * spec.L, c=spec.c / 2, xi=tuple(xi2))


def _embed2(local: np.ndarray, site: int, n: int) -> np.ndarray:
    left = np.eye(2 ** (site - 1), dtype=complex)
    right = np.eye(2 ** (n - site), dtype=complex)
    return np.kron(np.kron(left, local), right)


@lru_cache(maxsize=2048)
def gl2_monodromy(spec2: Gl2ChainSpec, u: complex):
    """2x2 auxiliary blocks of T(u) = L_n(u) ... L_1(u), R = I + c P/(u - v)."""
    u = complex(u)
    blocks = None
    for k in range(1, spec2.n_sites + 1):
        x = spec2.xi[k - 1]
        if abs(u - x) < POLE_TOL:
            raise PoleError(f"reference-chain pole at site {k}")
        g = spec2.c / (u - x)
        local = [
            [
                _embed2(
                    (np.eye(2, dtype=complex) if i == j else 0) + g * _E2[j][i], k, spec2.n_sites
                )
                for j in range(2)
            ]
            for i in range(2)
        ]
        if blocks is None:
            blocks = local
        else:
            blocks = [
                [sum(local[i][a] @ blocks[a][j] for a in range(2)) for j in range(2)]
                for i in range(2)
            ]
    for row in blocks:
        for b in row:
            b.setflags(write=False)
    return tuple(tuple(row) for row in blocks)


def gl2_vacuum_eigenvalues(spec2: Gl2ChainSpec, u: complex):
    """(lambda1, lambda2) on the all-up vacuum: prod (u - xi + c)/(u - xi) and 1."""
    l1 = 1.0 + 0.0j
    for x in spec2.xi:
        d = u - x
        if abs(d) < POLE_TOL:
            raise PoleError(f"vacuum eigenvalue pole at u = {u}")
        l1 *= (d + spec2.c) / d
    return l1, 1.0 + 0.0j


def gl2_vacuum(spec2: Gl2ChainSpec) -> np.ndarray:
    v = np.zeros(spec2.dim, dtype=complex)
    v[0] = 1.0
    return v


def gl2_rtt_residual(spec2: Gl2ChainSpec, u: complex, v: complex) -> float:
    """Exchange-relation residual for the reference chain on C^2 x C^2 x H."""
    d = u - v
    if abs(d) < POLE_TOL:
        raise PoleError("coincident spectral points")
    p = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            p += np.kron(_E2[i][j], _E2[j][i])
    r = np.eye(4, dtype=complex) + (spec2.c / d) * p
    rbig = np.kron(r, np.eye(spec2.dim, dtype=complex))
    tu = gl2_monodromy(spec2, u)
    tv = gl2_monodromy(spec2, v)
    eye2 = np.eye(2, dtype=complex)
    t1 = sum(
        np.kron(np.kron(_E2[i][j], eye2), tu[i][j]) for i in range(2) for j in range(2)
    )
    t2 = sum(
        np.kron(np.kron(eye2, _E2[i][j]), tv[i][j]) for i in range(2) for j in range(2)
    )
    lhs = rbig @ t1 @ t2
    rhs = t2 @ t1 @ rbig
    scale = max(np.linalg.norm(t1, 2) * np.linalg.norm(t2, 2), 1e-300)
    return float(np.linalg.norm(lhs - rhs, 2) / scale)


def gl2_bethe(spec2: Gl2ChainSpec, params) -> np.ndarray:
    """Bethe vector of the reference chain: T12(v_r) ... T12(v_1) |0>."""
    vec = gl2_vacuum(spec2)
    for v in params:
        vec = gl2_monodromy(spec2, complex(v))[0][1] @ vec
    return vec


def gl2_scalar(spec2: Gl2ChainSpec, us, vs) -> complex:
    """Dagger-dual pairing of reference Bethe vectors (same convention as the parent)."""
    dual = gl2_bethe(spec2, [complex(u).conjugate() for u in us]).conjugate()
    return complex(dual @ gl2_bethe(spec2, vs))


def sp_corr_test(spec: ChainSpec, r: int, samples: int = 20, seed: int = 0) -> dict:
    """Ratio test of the parent and reference scalar products at fixed r.

    Draws random real parameter sets, computes rho = S^parent/S^reference
    per sample, and reports the mean, the relative spread (constancy is the
    claim), and the gated value ratio rho/2^(-r).  Raises RealityError for
    complex chain data and DegenerateSample when every draw has a vanishing
    reference value."""
    from .bethe import scalar_product  # local import to avoid a cycle

    if abs(spec.c.imag) > 1e-12 or any(abs(x.imag) > 1e-12 for x in spec.xi):
        raise RealityError("scalar-product comparison requires real chain data")
    spec2 = Gl2ChainSpec.from_so3(spec)
    rng = np.random.default_rng(seed)
    radius = max((abs(x) for x in spec.xi), default=0.0) + 1.5 * abs(spec.c)
    sing = [s.real for s in spec.singular_points()]

    def draw_set():
        for _ in range(2000):
            pts = rng.uniform(-radius, radius, size=r)
            ok = all(abs(a - s) > 0.1 * abs(spec.c) for a in pts for s in sing)
            ok = ok and all(
                abs(pts[a] - pts[b]) > 0.15 * abs(spec.c)
                and abs(abs(pts[a] - pts[b]) - abs(spec.c) / 2) > 0.1 * abs(spec.c)
                for a in range(r)
                for b in range(a + 1, r)
            )
            if ok:
                return [complex(p) for p in pts]
        raise RuntimeError("could not draw a safe parameter set")

    rhos = []
    skipped = 0
    for _ in range(samples):
        if r == 0:
            us, vs = [], []
        else:
            us, vs = draw_set(), draw_set()
        s_ref = gl2_scalar(spec2, us, vs)
        if abs(s_ref) < 1e-13:
            skipped += 1
            continue
        s_par = scalar_product(spec, us, vs)
        rhos.append(s_par / s_ref)
    if not rhos:
        raise DegenerateSample("all reference scalar products vanished")
    rhos = np.array(rhos)
    mean = complex(np.mean(rhos))
    spread = float(np.max(np.abs(rhos - mean)) / max(abs(mean), 1e-300))
    return {
        "r": r,
        "samples": len(rhos),
        "skipped": skipped,
        "rho_mean": mean,
        "rho_spread": spread,
        "two_pow_minus_r_ratio": complex(mean / (2.0**-r)),
    }
