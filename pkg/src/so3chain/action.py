"""Action of monodromy entries on off-shell Bethe vectors.

The master formula: with eta = {u_1..u_r, z, z + c/2},

    T_{i,j}(z) B_r(ubar) = s(i,j) lambda3(z) *
        sum over partitions eta = eta_I | eta_II | eta_III,
            #eta_I = i - 1, #eta_III = 3 - j, of
        [lambda2/lambda3](eta_III)
        * ff(eta_I, eta_II) ff(eta_I, eta_III) ff(eta_II, eta_III)
          / (hh(eta_I, z) hh(z + c/2, eta_III))
        * B_{r-i+j}(eta_II),

with s(i,j) = 2^(i-j+1) (-1)^(delta_{i1} + delta_{j1}).  Partitions that
split the distinguished pair with z earlier than z + c/2 carry an exact
ff(z, z + c/2) = 0 factor and are pruned before numeric evaluation, which
avoids 0 * inf ambiguities when an hh denominator also degenerates.

Specialized closed forms for each entry and the zero-mode action are
implemented independently and cross-checked against the partition sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bethe import bethe_vector
from .chain import ChainSpec, monodromy, vacuum_eigenvalues, zero_modes
from .errors import CardinalityError, PoleError
from .rational import RationalKit

_DENOM_TOL = 1e-10


@dataclass(frozen=True)
class PartitionTerm:
    """One partition of eta with its scalar coefficient."""

    etaI: tuple
    etaII: tuple
    etaIII: tuple
    coefficient: complex


def enumerate_partitions(eta, i: int, j: int):
    """All splittings of eta into (eta_I, eta_II, eta_III) with the
    cardinalities #eta_I = i - 1 and #eta_III = 3 - j, as index triples,
    in deterministic (lexicographic) order."""
    if not (1 <= i <= 3 and 1 <= j <= 3):
        raise CardinalityError(f"indices out of range: ({i}, {j})")
    n = len(eta)
    n1 = i - 1
    n3 = 3 - j
    if n < n1 + n3:
        raise CardinalityError(
            f"cannot split {n} elements into subsets of sizes {n1} and {n3}"
        )
    out = []
    idx = tuple(range(n))
    for part1 in combinations(idx, n1):
        rest = tuple(a for a in idx if a not in part1)
        for part3 in combinations(rest, n3):
            part2 = tuple(a for a in rest if a not in part3)
            out.append((part1, part2, part3))
    return out


def s_factor(i: int, j: int):
    """Overall coefficient 2^(i-j+1) (-1)^(delta_{i1} + delta_{j1})."""
    sign = -1.0 if (i == 1) != (j == 1) else 1.0
    return sign * 2.0 ** (i - j + 1)


def _lam_ratio(spec: ChainSpec, points) -> complex:
    out = 1.0 + 0.0j
    for w in points:
        lam = vacuum_eigenvalues(spec, w)
        out *= lam[1] / lam[2]
    return out


def action_terms(spec: ChainSpec, i: int, j: int, z: complex, params):
    """Partition terms of the master formula; also returns the pruned count."""
    c = spec.c
    kit = RationalKit(c)
    ps = [complex(p) for p in params]
    r = len(ps)
    terms = []
    pruned = 0
    if r - i + j < 0:
        return terms, pruned
    eta = ps + [z, z + c / 2]
    pos_z, pos_zp = r, r + 1
    lam3_z = vacuum_eigenvalues(spec, z)[2]
    pref = s_factor(i, j) * lam3_z
    for part1, part2, part3 in enumerate_partitions(eta, i, j):
        rank = {}
        for a in part1:
            rank[a] = 0
        for a in part2:
            rank[a] = 1
        for a in part3:
            rank[a] = 2
        if rank[pos_z] < rank[pos_zp]:
            pruned += 1  # carries the exact zero ff(z, z + c/2)
            continue
        etaI = tuple(eta[a] for a in part1)
        etaII = tuple(eta[a] for a in part2)
        etaIII = tuple(eta[a] for a in part3)
        h1 = kit.hh_set(etaI, [z])
        h3 = kit.hh_set([z + c / 2], etaIII)
        if abs(h1) < _DENOM_TOL or abs(h3) < _DENOM_TOL:
            raise PoleError(
                f"vanishing hh denominator for partition {etaI} | {etaII} | {etaIII}"
            )
        coeff = (
            pref
            * _lam_ratio(spec, etaIII)
            * kit.ff_set(etaI, etaII)
            * kit.ff_set(etaI, etaIII)
            * kit.ff_set(etaII, etaIII)
            / (h1 * h3)
        )
        terms.append(PartitionTerm(etaI=etaI, etaII=etaII, etaIII=etaIII, coefficient=coeff))
    return terms, pruned


def action_rhs(spec: ChainSpec, i: int, j: int, z: complex, params) -> np.ndarray:
    """Right-hand side of the master formula as a Hilbert-space vector."""
    terms, _ = action_terms(spec, i, j, z, params)
    total = np.zeros(spec.dim, dtype=complex)
    for term in terms:
        total += term.coefficient * bethe_vector(spec, term.etaII).vector
    return total


def action_verify(spec: ChainSpec, i: int, j: int, z: complex, params) -> float:
    """Residual of T_{i,j}(z) B_r(ubar) against the partition sum.

    Relative to ||T_{i,j}(z) B_r||, or absolute when the action is null.
    """
    state = bethe_vector(spec, params)
    lhs = monodromy(spec, z).block(i, j) @ state.vector
    rhs = action_rhs(spec, i, j, z, list(state.params))
    nl = np.linalg.norm(lhs)
    diff = np.linalg.norm(lhs - rhs)
    if nl > 1e-10:
        return float(diff / nl)
    return float(diff)


def _bv(spec, pts) -> np.ndarray:
    return bethe_vector(spec, list(pts)).vector


def specialized_actions(spec: ChainSpec, which: str, z: complex, params) -> np.ndarray:
    """Independent implementations of the per-entry closed forms.

    which is one of lac1..lac6 (the T11, T22, T33, T13, T12, T23 actions)
    or T12Act (the single-partition form of the T12 action).  Each must
    reproduce action_rhs at the matching (i, j).
    """
    c = spec.c
    kit = RationalKit(c)
    ps = [complex(p) for p in params]
    r = len(ps)
    lam = lambda w: vacuum_eigenvalues(spec, w)  # noqa: E731
    lam2_3 = lambda w: lam(w)[1] / lam(w)[2]  # noqa: E731
    zp = z + c / 2
    l1z, l2z, l3z = lam(z)

    if which == "lac4":
        return -0.5 * l3z * _bv(spec, ps + [z, zp])

    if which == "lac6":
        out = l3z * kit.ff_set([zp], ps) * _bv(spec, ps + [z])
        for i, ui in enumerate(ps):
            rest = ps[:i] + ps[i + 1 :]
            out -= (
                l3z
                * kit.ff_set([ui], rest)
                / kit.hh(z, ui)
                * _bv(spec, rest + [z, zp])
            )
        return out

    if which == "lac5":
        out = -l2z * kit.ff_set(ps, [z]) * _bv(spec, ps + [zp])
        for i, ui in enumerate(ps):
            rest = ps[:i] + ps[i + 1 :]
            out -= (
                l3z
                * kit.gg(z, ui)
                * kit.ff_set(rest, [ui])
                * lam2_3(ui)
                * _bv(spec, rest + [z, zp])
            )
        return out

    if which == "T12Act":
        # single-element eta_III sum; the eta_III = {z + c/2} slot drops exactly
        eta = ps + [z, zp]
        out = np.zeros(spec.dim, dtype=complex)
        for a, y in enumerate(eta):
            if a == r + 1:
                continue
            rest = [eta[b] for b in range(len(eta)) if b != a]
            out -= (
                l3z
                * lam2_3(y)
                * kit.ff_set(rest, [y])
                / kit.hh(zp, y)
                * _bv(spec, rest)
            )
        return out

    if which == "lac1":
        out = l1z * kit.ff_set(ps, [z]) * kit.ff_set(ps, [zp]) * _bv(spec, ps)
        for i, ui in enumerate(ps):
            rest = ps[:i] + ps[i + 1 :]
            out += (
                2
                * l2z
                * kit.gg(zp, ui)
                * lam2_3(ui)
                * kit.ff_set(rest, [z])
                * kit.ff_set(rest, [ui])
                * _bv(spec, rest + [zp])
            )
        for i, j2 in combinations(range(r), 2):
            ui, uj = ps[i], ps[j2]
            rest = [ps[a] for a in range(r) if a not in (i, j2)]
            out += (
                2
                * l3z
                * kit.gg(z, ui)
                * kit.gg(z, uj)
                * lam2_3(ui)
                * lam2_3(uj)
                * kit.ff_set(rest, [ui, uj])
                * _bv(spec, rest + [z, zp])
            )
        return out

    if which == "lac2":
        out = l2z * kit.ff_set(ps, [z]) * kit.ff_set([zp], ps) * _bv(spec, ps)
        for i, ui in enumerate(ps):
            rest = ps[:i] + ps[i + 1 :]
            out += (
                2
                * l3z
                * kit.gg(z, ui)
                * lam2_3(ui)
                * kit.ff_set([zp], rest)
                * kit.ff_set(rest, [ui])
                * _bv(spec, rest + [z])
            )
            out -= (
                2
                * l2z
                * kit.ff_set(rest, [z])
                / kit.hh(z, ui)
                * kit.ff_set([ui], rest)
                * _bv(spec, rest + [zp])
            )
        for i in range(r):
            for j2 in range(r):
                if i == j2:
                    continue
                ui, uj = ps[i], ps[j2]
                rest = [ps[a] for a in range(r) if a not in (i, j2)]
                rest_j = [ps[a] for a in range(r) if a != j2]
                # the lambda ratio enters only through the eta_III member u_j
                out += (
                    2
                    * l3z
                    * lam2_3(uj)
                    * kit.ff_set([ui], rest)
                    * kit.ff_set(rest_j, [uj])
                    / (kit.hh(z, ui) * kit.hh(uj, zp))
                    * _bv(spec, rest + [z, zp])
                )
        return out

    if which == "lac3":
        out = l3z * kit.ff_set([z], ps) * kit.ff_set([zp], ps) * _bv(spec, ps)
        for i, ui in enumerate(ps):
            rest = ps[:i] + ps[i + 1 :]
            out += (
                2
                * l3z
                * kit.gg(ui, z)
                * kit.ff_set([zp], rest)
                * kit.ff_set([ui], rest)
                * _bv(spec, rest + [z])
            )
        for i, j2 in combinations(range(r), 2):
            ui, uj = ps[i], ps[j2]
            rest = [ps[a] for a in range(r) if a not in (i, j2)]
            out += (
                2
                * l3z
                * kit.ff_set([ui, uj], rest)
                / (kit.hh(z, ui) * kit.hh(z, uj))
                * _bv(spec, rest + [z, zp])
            )
        return out

    raise ValueError(f"unknown specialized action {which!r}")


SPECIALIZED_INDEX = {
    "lac1": (1, 1),
    "lac2": (2, 2),
    "lac3": (3, 3),
    "lac4": (1, 3),
    "lac5": (1, 2),
    "lac6": (2, 3),
    "T12Act": (1, 2),
}


def zero_mode_action(spec: ChainSpec, params) -> np.ndarray:
    """Predicted action of the E23 zero mode on B_r(ubar):

        c sum_i ff(u_i, ubar_i)
            [ ff(ubar_i, u_i) lambda2(u_i) / (ff(u_i, ubar_i) lambda3(u_i)) - 1 ]
            B_{r-1}(ubar_i),

    which vanishes termwise on-shell."""
    kit = RationalKit(spec.c)
    ps = [complex(p) for p in params]
    out = np.zeros(spec.dim, dtype=complex)
    for i, ui in enumerate(ps):
        rest = ps[:i] + ps[i + 1 :]
        fwd = kit.ff_set([ui], rest)
        bwd = kit.ff_set(rest, [ui])
        lam = vacuum_eigenvalues(spec, ui)
        out += spec.c * fwd * (bwd * lam[1] / (fwd * lam[2]) - 1.0) * _bv(spec, rest)
    return out


def e23_zero_mode(spec: ChainSpec) -> np.ndarray:
    """The zero mode of the E23 Gauss coordinate, equal to T_{3,2}[0]."""
    return zero_modes(spec)[2][1]


def zero_mode_residual(spec: ChainSpec, params) -> float:
    """Residual of the direct E23[0] action against the predicted sum."""
    state = bethe_vector(spec, params)
    lhs = e23_zero_mode(spec) @ state.vector
    rhs = zero_mode_action(spec, list(state.params))
    scale = np.linalg.norm(state.vector)
    return float(np.linalg.norm(lhs - rhs) / max(scale, 1e-300))
