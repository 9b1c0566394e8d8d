"""Transfer matrix, Bethe equations, root solving, and on-shell checks.

The Bethe equations for r excitations read, componentwise,

    lambda2(u_i)/lambda3(u_i) = ff(u_i, ubar_i)/ff(ubar_i, u_i),

and an on-shell set turns B_r(ubar) into a transfer-matrix eigenvector with
eigenvalue

    tau(z|ubar) = lambda1(z) ff(ubar,z) ff(ubar,z+c/2)
                + lambda2(z) ff(ubar,z) ff(z+c/2,ubar)
                + lambda3(z) ff(z,ubar) ff(z+c/2,ubar).

The solver runs damped Newton iterations on the principal-branch logarithm
of the equations (wrapped to the nearest 2*pi*i lattice point), seeded over
a disc of radius max|xi| + 2|c|; convergence is declared on the rational
residual.  The log landscape has a spurious zero at infinity and jump
discontinuities along the real factor lines, so runs that escape the
domain are rejected and retried with damped Newton on the
cleared-denominator polynomial form

    P_i = prod_s (u_i - xi_s + c/2) prod_{k != i} (u_i - u_k - c/2)
        - prod_s (u_i - xi_s - c/2) prod_{k != i} (u_i - u_k + c/2),

whose zero set is exactly the finite Bethe roots.  Completeness of the
root list is not asserted.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .action import e23_zero_mode
from .bethe import bethe_vector
from .chain import ChainSpec, monodromy, vacuum_eigenvalues, vacuum_ratio
from .errors import NoConvergence, PoleError
from .rational import RationalKit

NEWTON_MAX_ITER = 200
NEWTON_DAMPING = 0.5
ROOT_RESIDUAL_TOL = 1e-10
DEDUP_TOL = 1e-7
SINGULAR_REJECT_TOL = 1e-6


def transfer_matrix(spec: ChainSpec, z: complex) -> np.ndarray:
    """Trace of the monodromy over the auxiliary space, sum_i T_{ii}(z)."""
    t = monodromy(spec, z)
    return t.block(1, 1) + t.block(2, 2) + t.block(3, 3)


def be_residual(spec: ChainSpec, params) -> np.ndarray:
    """Componentwise lambda2/lambda3(u_i) - ff(u_i, ubar_i)/ff(ubar_i, u_i)."""
    kit = RationalKit(spec.c)
    ps = [complex(p) for p in params]
    out = np.zeros(len(ps), dtype=complex)
    for i, ui in enumerate(ps):
        rest = ps[:i] + ps[i + 1 :]
        out[i] = vacuum_ratio(spec, ui) - kit.ff_set([ui], rest) / kit.ff_set(rest, [ui])
    return out


@dataclass(frozen=True)
class BetheSystem:
    """The algebraic system for r excitations on a fixed chain.

    ``residual(params)`` evaluates the componentwise equations; permuting
    the roots permutes the components identically.
    """

    spec: ChainSpec
    r: int

    def residual(self, params) -> np.ndarray:
        if len(params) != self.r:
            raise ValueError(f"expected {self.r} roots, got {len(params)}")
        return be_residual(self.spec, params)

    def solve(self, **kwargs):
        return solve_be(self.spec, self.r, **kwargs)


def _log_ratio(spec: ChainSpec, u: complex) -> complex:
    """Principal-branch log of lambda2/lambda3 as a sum over sites."""
    c = spec.c
    out = 0.0 + 0.0j
    for x in spec.xi:
        out += cmath.log(u - x + c / 2) - cmath.log(u - x - c / 2)
    return out


def _dlog_ratio(spec: ChainSpec, u: complex) -> complex:
    c = spec.c
    return sum(1 / (u - x + c / 2) - 1 / (u - x - c / 2) for x in spec.xi)


def _log_system(spec: ChainSpec, ps: np.ndarray):
    """Wrapped log residuals G and their Jacobian for Newton."""
    c = spec.c
    r = len(ps)
    G = np.zeros(r, dtype=complex)
    J = np.zeros((r, r), dtype=complex)

    def B(x):
        return cmath.log(x + c / 2) - cmath.log(x)

    def dB(x):
        return 1 / (x + c / 2) - 1 / x

    for i in range(r):
        g = _log_ratio(spec, ps[i])
        J[i, i] = _dlog_ratio(spec, ps[i])
        for k in range(r):
            if k == i:
                continue
            d = ps[i] - ps[k]
            g -= B(d) - B(-d)
            J[i, i] -= dB(d) + dB(-d)
            J[i, k] = dB(d) + dB(-d)
        # wrap to the nearest 2*pi*i lattice point
        g -= 2j * np.pi * round(g.imag / (2 * np.pi))
        G[i] = g
    return G, J


def _too_close_to_singular(spec: ChainSpec, ps) -> bool:
    sing = spec.singular_points()
    for u in ps:
        for s in sing:
            if abs(u - s) < SINGULAR_REJECT_TOL:
                return True
    return False


def _poly_system(spec: ChainSpec, ps: np.ndarray) -> np.ndarray:
    """Cleared-denominator form of the Bethe equations."""
    c = spec.c
    r = len(ps)
    P = np.zeros(r, dtype=complex)
    for i in range(r):
        a = b = 1.0 + 0.0j
        for x in spec.xi:
            a *= ps[i] - x + c / 2
            b *= ps[i] - x - c / 2
        for k in range(r):
            if k == i:
                continue
            a *= ps[i] - ps[k] - c / 2
            b *= ps[i] - ps[k] + c / 2
        P[i] = a - b
    return P


def _poly_jacobian(spec: ChainSpec, ps: np.ndarray) -> np.ndarray:
    r = len(ps)
    J = np.zeros((r, r), dtype=complex)
    h = 1e-7 * max(1.0, float(np.max(np.abs(ps))))
    for j in range(r):
        dp = np.zeros(r, dtype=complex)
        dp[j] = h
        J[:, j] = (_poly_system(spec, ps + dp) - _poly_system(spec, ps - dp)) / (2 * h)
    return J


def _damped_newton(ps, system, max_iter=NEWTON_MAX_ITER):
    """Generic damped Newton; system(ps) -> (residual vector, jacobian)."""
    ps = np.array(ps, dtype=complex)
    trace = []
    for it in range(max_iter):
        try:
            G, J = system(ps)
        except (ValueError, ZeroDivisionError):
            trace.append((it, None))
            return None, trace
        gn = np.linalg.norm(G)
        trace.append((it, float(gn)))
        if gn < 1e-13:
            return ps, trace
        try:
            step = np.linalg.solve(J, -G)
        except np.linalg.LinAlgError:
            return None, trace
        # backtracking with fixed damping factor
        lam = 1.0
        moved = False
        for _ in range(25):
            cand = ps + lam * step
            try:
                Gc, _ = system(cand)
            except (ValueError, ZeroDivisionError):
                lam *= NEWTON_DAMPING
                continue
            if np.linalg.norm(Gc) < gn * (1 - 1e-4 * lam) or np.linalg.norm(Gc) < 1e-13:
                ps = cand
                moved = True
                break
            lam *= NEWTON_DAMPING
        if not moved:
            return ps, trace
    return ps, trace


def _validated(spec: ChainSpec, ps, bound: float):
    if ps is None:
        return None
    if np.max(np.abs(ps)) > bound:
        return None  # escaped toward the spurious zero at infinity
    try:
        resid = np.linalg.norm(be_residual(spec, ps))
    except (PoleError, ZeroDivisionError):
        return None
    if not np.isfinite(resid) or resid > ROOT_RESIDUAL_TOL:
        return None
    if _too_close_to_singular(spec, ps):
        return None
    for a in range(len(ps)):
        for b in range(a + 1, len(ps)):
            if abs(ps[a] - ps[b]) < DEDUP_TOL:
                return None
    return ps


def _newton(spec: ChainSpec, seed: np.ndarray, bound: float):
    """Log-form Newton with a polynomial-form fallback; returns (roots, trace)."""
    roots, trace = _damped_newton(seed, lambda p: _log_system(spec, p))
    good = _validated(spec, roots, bound)
    if good is not None:
        return good, trace
    roots, trace2 = _damped_newton(
        seed, lambda p: (_poly_system(spec, p), _poly_jacobian(spec, p))
    )
    return _validated(spec, roots, bound), trace + trace2


def _sorted_roots(ps) -> tuple:
    return tuple(sorted((complex(p) for p in ps), key=lambda w: (w.real, w.imag)))


def default_seed_grid(spec: ChainSpec, r: int, n_seeds: int, seed: int) -> list:
    """Deterministic seed tuples drawn from a disc of radius max|xi| + 2|c|."""
    rng = np.random.default_rng(seed)
    radius = max((abs(x) for x in spec.xi), default=0.0) + 2 * abs(spec.c)
    grid = []
    for _ in range(n_seeds):
        pts = radius * np.sqrt(rng.uniform(0.05, 1.0, size=r)) * np.exp(
            2j * np.pi * rng.uniform(0.0, 1.0, size=r)
        )
        grid.append(pts)
    return grid


def solve_be(spec: ChainSpec, r: int, seeds=None, n_seeds: int = 40, seed: int = 0):
    """Solve the Bethe equations for r excitations.

    Returns converged root sets (sorted tuples), deduplicated up to
    permutation.  Raises NoConvergence (with the iteration trace) when
    explicit seeds are given and none converge.
    """
    if r == 0:
        return [()]
    if seeds is None:
        seed_list = default_seed_grid(spec, r, n_seeds, seed)
        explicit = False
    else:
        seed_list = [np.atleast_1d(np.array(s, dtype=complex)) for s in seeds]
        explicit = True
    radius = max((abs(x) for x in spec.xi), default=0.0) + 2 * abs(spec.c)
    bound = 10 * radius
    found = []
    traces = []
    for s in seed_list:
        if len(s) != r:
            raise ValueError(f"seed of length {len(s)} for r = {r}")
        roots, trace = _newton(spec, s, bound)
        traces.append(trace)
        if roots is None:
            continue
        cand = _sorted_roots(roots)
        if not any(
            all(abs(a - b) < DEDUP_TOL for a, b in zip(cand, known)) for known in found
        ):
            found.append(cand)
    if explicit and not found:
        raise NoConvergence("no seed converged to a Bethe root set", trace=traces)
    return found


def tau_eigenvalue(spec: ChainSpec, z: complex, params) -> complex:
    """Transfer-matrix eigenvalue functional tau(z | ubar)."""
    kit = RationalKit(spec.c)
    ps = [complex(p) for p in params]
    zp = z + spec.c / 2
    l1, l2, l3 = vacuum_eigenvalues(spec, z)
    return (
        l1 * kit.ff_set(ps, [z]) * kit.ff_set(ps, [zp])
        + l2 * kit.ff_set(ps, [z]) * kit.ff_set([zp], ps)
        + l3 * kit.ff_set([z], ps) * kit.ff_set([zp], ps)
    )


def pole_cancellation(spec: ChainSpec, params, eps: float = 1e-5) -> float:
    """Largest residue estimate of tau across z = u_i and z = u_i - c/2.

    For each candidate pole the residue is estimated from the antisymmetric
    part of tau at z = pole +/- eps; on-shell sets give values at the
    numerical noise floor."""
    worst = 0.0
    ps = [complex(p) for p in params]
    for ui in ps:
        for pole in (ui, ui - spec.c / 2):
            tp = tau_eigenvalue(spec, pole + eps, ps)
            tm = tau_eigenvalue(spec, pole - eps, ps)
            worst = max(worst, abs(tp - tm) * eps / 2)
    return worst


def onshell_verify(spec: ChainSpec, params, n_z: int = 5, seed: int = 0) -> dict:
    """Full on-shell report for one root set.

    (a) eigenvector residual of the transfer matrix at n_z random points,
    (b) match of tau against the exact-diagonalization spectrum,
    (c) annihilation by the E23 zero mode,
    plus the Bethe residual and the pole-cancellation estimate."""
    ps = [complex(p) for p in params]
    report = {"params": ps}
    report["be_residual"] = float(np.linalg.norm(be_residual(spec, ps))) if ps else 0.0

    state = bethe_vector(spec, ps)
    bnorm = np.linalg.norm(state.vector)
    rng = np.random.default_rng(seed)
    radius = max((abs(x) for x in spec.xi), default=0.0) + 2 * abs(spec.c)

    def draw_z():
        for _ in range(1000):
            z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
            ok = all(abs(z - s) > 0.2 for s in spec.singular_points())
            ok = ok and all(abs(z - u) > 0.2 and abs(z + spec.c / 2 - u) > 0.2 for u in ps)
            if ok:
                return z
        raise RuntimeError("could not draw a safe spectral point")

    eig_res = 0.0
    ed_gap = 0.0
    for _ in range(n_z):
        z = draw_z()
        tmat = transfer_matrix(spec, z)
        tau = tau_eigenvalue(spec, z, ps)
        eig_res = max(
            eig_res, float(np.linalg.norm(tmat @ state.vector - tau * state.vector) / bnorm)
        )
        spectrum_z = np.linalg.eigvals(tmat)
        ed_gap = max(ed_gap, float(np.min(np.abs(spectrum_z - tau)) / max(1.0, abs(tau))))
    report["eigen_residual"] = eig_res
    report["ed_match_gap"] = ed_gap
    zm = e23_zero_mode(spec) @ state.vector
    report["zero_mode_annihilation"] = float(np.linalg.norm(zm) / bnorm)
    report["pole_cancellation"] = pole_cancellation(spec, ps) if ps else 0.0
    report["ok"] = bool(
        report["be_residual"] < 1e-9
        and eig_res < 1e-8
        and ed_gap < 1e-8
        and report["zero_mode_annihilation"] < 1e-8
    )
    return report
