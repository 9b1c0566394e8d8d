"""Off-shell Bethe vectors built from the F32 Gauss coordinate.

The closed formula applies an ordered product of linear combinations

    A_j = F32(u_j) - sum_{t>j} hh(u_t, u_j)^{-1}
              prod_{s>j, s!=t} [ff(u_s, u_t)/ff(u_s, u_j)] F32(u_t)

to the vacuum, with the ordering prefactor gamma(u_1..u_r); the result is
symmetric under permutations of the parameters.  Two independent recursion
routes (through the T12/T13 and T23/T13 actions) rebuild the same vectors
and are used as cross-checks.

Canonical ordering places u + c/2 after u whenever both occur, which keeps
every combination denominator away from its zero for such pairs; the pair
(z, z + c/2) is routine input downstream, so it is first-class here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hilbert
from .chain import ChainSpec, monodromy, vacuum_eigenvalues
from .errors import DegenerateError, PoleError, RealityError, ZeroDenominatorError
from .gauss import frame
from .rational import RationalKit

_COINCIDE_TOL = 1e-10
_DENOM_TOL = 1e-10

METHODS = ("closed_formula", "recursion_12", "recursion_23")


@dataclass(frozen=True)
class BetheState:
    """Bethe parameters (in the order actually used), the resulting vector,
    and which construction produced it."""

    params: tuple
    vector: np.ndarray
    spec: ChainSpec
    method: str = "closed_formula"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def r(self) -> int:
        return len(self.params)


def canonical_order(params, c: complex) -> list:
    """Sort parameters by (Re, Im), then move w + c/2 after w for every such pair.

    Raises DegenerateError on coincident parameters.
    """
    ps = [complex(p) for p in params]
    for a in range(len(ps)):
        for b in range(a + 1, len(ps)):
            if abs(ps[a] - ps[b]) < _COINCIDE_TOL:
                raise DegenerateError(f"coincident Bethe parameters {ps[a]} and {ps[b]}")
    ps.sort(key=lambda w: (w.real, w.imag))
    half = c / 2
    # stable pass: whenever ps[b] + c/2 == ps[a] with a < b, swap forward
    changed = True
    while changed:
        changed = False
        for a in range(len(ps)):
            for b in range(a + 1, len(ps)):
                if abs(ps[b] + half - ps[a]) < _COINCIDE_TOL:
                    ps[a], ps[b] = ps[b], ps[a]
                    changed = True
    return ps


def modified_gauss(spec: ChainSpec, u1: complex, rest) -> np.ndarray:
    """Linear combination of F32 coordinates entering the ordered product.

    With rest = (u_2, ..., u_r):

        F32(u_1) - sum_j hh(u_j, u_1)^{-1}
            prod_{s != j} [ff(u_s, u_j)/ff(u_s, u_1)] F32(u_j).
    """
    kit = RationalKit(spec.c)
    rest = [complex(w) for w in rest]
    out = np.array(frame(spec, u1).F32)
    for j, uj in enumerate(rest):
        h = kit.hh(uj, u1)
        if abs(h) < _DENOM_TOL:
            raise PoleError(f"vanishing denominator hh({uj}, {u1})")
        coeff = 1.0 / h
        for s, us in enumerate(rest):
            if s == j:
                continue
            den = kit.ff(us, u1)
            if abs(den) < _DENOM_TOL:
                raise PoleError(f"vanishing denominator ff({us}, {u1})")
            coeff *= kit.ff(us, uj) / den
        out -= coeff * frame(spec, uj).F32
    return out


def bethe_vector(spec: ChainSpec, params, canonicalize: bool = True) -> BetheState:
    """Off-shell Bethe vector by the closed formula.

    ``canonicalize=False`` evaluates the ordered product in the order given
    (used to exercise permutation symmetry); the default reorders safely.
    """
    if canonicalize:
        ps = canonical_order(params, spec.c)
    else:
        ps = [complex(p) for p in params]
    vec = hilbert.vacuum(spec.L, spec.allow_large)
    for j in range(len(ps)):
        vec = modified_gauss(spec, ps[j], ps[j + 1 :]) @ vec
    vec = RationalKit(spec.c).gamma(ps) * vec
    return BetheState(params=tuple(ps), vector=vec, spec=spec, method="closed_formula")


def _rec23(spec: ChainSpec, ps: tuple) -> np.ndarray:
    kit = RationalKit(spec.c)
    if not ps:
        return hilbert.vacuum(spec.L, spec.allow_large)
    z, rest = ps[-1], ps[:-1]
    lam3 = vacuum_eigenvalues(spec, z)[2]
    denom = lam3 * kit.ff_set([z + spec.c / 2], rest)
    if abs(denom) < _DENOM_TOL:
        raise ZeroDenominatorError(f"lambda3(z) ff(z + c/2, rest) vanished at z = {z}")
    t = monodromy(spec, z)
    vec = t.block(2, 3) @ _rec23(spec, rest) / denom
    for i, ui in enumerate(rest):
        rest_i = rest[:i] + rest[i + 1 :]
        h = kit.hh(z, ui)
        if abs(h) < _DENOM_TOL:
            raise ZeroDenominatorError(f"hh(z, u_i) vanished for z = {z}, u_i = {ui}")
        coeff = 2 * kit.ff_set([ui], rest_i) / (h * denom)
        vec -= coeff * (t.block(1, 3) @ _rec23(spec, rest_i))
    return vec


def _rec12(spec: ChainSpec, ps: tuple) -> np.ndarray:
    kit = RationalKit(spec.c)
    if not ps:
        return hilbert.vacuum(spec.L, spec.allow_large)
    w, rest = ps[-1], ps[:-1]
    z = w - spec.c / 2
    lam = vacuum_eigenvalues(spec, z)
    denom = lam[1] * kit.ff_set(rest, [z])
    if abs(denom) < _DENOM_TOL:
        raise ZeroDenominatorError(f"lambda2(z) ff(rest, z) vanished at z = {z}")
    t = monodromy(spec, z)
    vec = -(t.block(1, 2) @ _rec12(spec, rest)) / denom
    for i, ui in enumerate(rest):
        rest_i = rest[:i] + rest[i + 1 :]
        h = kit.hh(ui, w)
        if abs(h) < _DENOM_TOL:
            raise ZeroDenominatorError(f"hh(u_i, z + c/2) vanished for u_i = {ui}")
        lam_i = vacuum_eigenvalues(spec, ui)
        coeff = 2 * kit.ff_set(rest_i, [ui]) * lam_i[1] / (lam_i[2] * h * denom)
        vec -= coeff * (t.block(1, 3) @ _rec12(spec, rest_i))
    return vec


def bethe_via_recursion(spec: ChainSpec, params, which: int) -> BetheState:
    """Rebuild the Bethe vector through one of the two recursion routes.

    which = 23 peels the last parameter z and applies T23(z) and T13(z);
    which = 12 peels the last parameter w = z + c/2 and applies T12(z) and
    T13(z).  Both bottom out at the vacuum.
    """
    ps = tuple(canonical_order(params, spec.c))
    if which == 23:
        vec = _rec23(spec, ps)
        method = "recursion_23"
    elif which == 12:
        vec = _rec12(spec, ps)
        method = "recursion_12"
    else:
        raise ValueError(f"which must be 12 or 23, got {which!r}")
    return BetheState(params=ps, vector=vec, spec=spec, method=method)


def _require_real(spec: ChainSpec):
    if abs(spec.c.imag) > 1e-12 or any(abs(x.imag) > 1e-12 for x in spec.xi):
        raise RealityError("dual vectors require real coupling and inhomogeneities")


def dual_bethe_vector(spec: ChainSpec, params) -> np.ndarray:
    """Dual functional: conjugate transpose of the Bethe vector at conjugated
    parameters.  Returns a row vector; pairing is ``dual @ vector``.

    For real chain data this makes the scalar product a rational function of
    the parameters.
    """
    _require_real(spec)
    conj_params = [complex(p).conjugate() for p in params]
    state = bethe_vector(spec, conj_params)
    return state.vector.conjugate()


def scalar_product(spec: ChainSpec, us, vs) -> complex:
    """Pairing of the dual vector at us with the Bethe vector at vs."""
    dual = dual_bethe_vector(spec, us)
    return complex(dual @ bethe_vector(spec, vs).vector)


def export_state(state: BetheState) -> dict:
    """JSON-ready form of a Bethe state."""
    return {
        "params": [[p.real, p.imag] for p in state.params],
        "method": state.method,
        "vector": [[z.real, z.imag] for z in state.vector],
    }
