"""Dense operator algebra on the chain Hilbert space (C^3)^(x L).

Operators are plain complex numpy matrices of size 3^L; vectors are 1-D
complex arrays.  Everything is dense: the default site cap is L <= 5
(dim 243) and a hard cap of L = 7 applies behind an explicit flag, so
every identity check stays at most O(dim^3) and runs in seconds.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularError

MAX_SITES_DEFAULT = 5
MAX_SITES_HARD = 7
COND_THRESHOLD = 1e12


def check_sites(L: int, allow_large: bool = False) -> None:
    if L < 1:
        raise ValueError(f"need at least one site, got L={L}")
    if L > MAX_SITES_HARD:
        raise ValueError(f"L={L} exceeds the hard cap {MAX_SITES_HARD}")
    if L > MAX_SITES_DEFAULT and not allow_large:
        raise ValueError(
            f"L={L} exceeds the default cap {MAX_SITES_DEFAULT}; "
            "pass allow_large=True to go up to "
            f"{MAX_SITES_HARD}"
        )


def dim_of(L: int) -> int:
    return 3**L


def identity_op(L: int) -> np.ndarray:
    return np.eye(dim_of(L), dtype=complex)


def embed(local: np.ndarray, site: int, L: int, allow_large: bool = False) -> np.ndarray:
    """I^(x (site-1)) (x) local (x) I^(x (L-site)), sites counted from 1."""
    check_sites(L, allow_large)
    if not 1 <= site <= L:
        raise IndexError(f"site {site} out of range 1..{L}")
    local = np.asarray(local, dtype=complex)
    if local.shape != (3, 3):
        raise ValueError(f"local operator must be 3x3, got {local.shape}")
    left = np.eye(3 ** (site - 1), dtype=complex)
    right = np.eye(3 ** (L - site), dtype=complex)
    return np.kron(np.kron(left, local), right)


def inverse(x: np.ndarray, which: str = "operator") -> np.ndarray:
    """Matrix inverse guarded by a cheap 1-norm condition estimate.

    Raises SingularError (carrying the estimate) when the estimate
    exceeds COND_THRESHOLD or the matrix is exactly singular.
    """
    x = np.asarray(x, dtype=complex)
    try:
        inv = np.linalg.inv(x)
    except np.linalg.LinAlgError as exc:
        raise SingularError(f"{which} is singular", cond=np.inf, which=which) from exc
    cond = np.linalg.norm(x, 1) * np.linalg.norm(inv, 1)
    if not np.isfinite(cond) or cond > COND_THRESHOLD:
        raise SingularError(
            f"{which} is numerically singular (cond ~ {cond:.3e})",
            cond=cond,
            which=which,
        )
    return inv


def vacuum(L: int, allow_large: bool = False) -> np.ndarray:
    """Reference vector e_1^(x L): all sites in the first basis state."""
    check_sites(L, allow_large)
    v = np.zeros(dim_of(L), dtype=complex)
    v[0] = 1.0
    return v


def product_state(digits, L: int) -> np.ndarray:
    """Basis vector e_{a_1} (x) ... (x) e_{a_L} for 1-based digits a_k."""
    if len(digits) != L:
        raise ValueError("need one digit per site")
    idx = 0
    for a in digits:
        if not 1 <= a <= 3:
            raise ValueError("digits must be in 1..3")
        idx = 3 * idx + (a - 1)
    v = np.zeros(dim_of(L), dtype=complex)
    v[idx] = 1.0
    return v


def rel_residual(a: np.ndarray, b: np.ndarray) -> float:
    """|| a - b || relative to the larger of the two norms (absolute when both tiny)."""
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    scale = max(na, nb)
    diff = np.linalg.norm(np.asarray(a) - np.asarray(b))
    if scale < 1e-12:
        return float(diff)
    return float(diff / scale)
