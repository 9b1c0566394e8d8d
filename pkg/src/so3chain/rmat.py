"""so3-invariant R-matrix on C^3 x C^3.

Conventions used everywhere in the package:

* standard ordered basis e_1, e_2, e_3 of C^3; the tensor basis vector
  e_a (x) e_b sits at flat index 3*(a-1) + (b-1), i.e. plain ``np.kron``;
* primed indices mean reflection through the anti-diagonal, i' = 4 - i
  (1-based);
* the anti-diagonal transposition is (X^t)_{i,j} = X_{j',i'}, equivalently
  X^t = U X^T U with U the anti-diagonal unit matrix.

The R-matrix is

    R(u, v) = I (x) I + c*P/(u - v) - c*Q/(u - v + c*kappa),

with P the permutation, Q the rank-one crossing projector times 3, and
kappa fixed to 1/2 for the 3x3 case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PoleError

N = 3
KAPPA = 0.5
POLE_TOL = 1e-12


@dataclass(frozen=True)
class RParams:
    """Coupling constant plus the fixed structural data of the 3x3 case."""

    c: complex
    kappa: float = KAPPA
    n: int = N

    def __post_init__(self):
        if self.n != N or self.kappa != KAPPA:
            raise ValueError("only the 3x3 case with kappa = 1/2 is supported")
        if self.c == 0:
            raise ValueError("coupling constant must be nonzero")


def eunit(i: int, j: int) -> np.ndarray:
    """Matrix unit E_{ij} (1-based): 1 at row i, column j, zero elsewhere."""
    m = np.zeros((N, N), dtype=complex)
    m[i - 1, j - 1] = 1.0
    return m


def build_p() -> np.ndarray:
    """Permutation operator P = sum_{ij} E_{ij} (x) E_{ji}."""
    p = np.zeros((N * N, N * N), dtype=complex)
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            p += np.kron(eunit(i, j), eunit(j, i))
    return p


def build_q() -> np.ndarray:
    """Crossing operator Q = sum_{ij} E_{ij} (x) E_{i'j'} with i' = 4 - i."""
    q = np.zeros((N * N, N * N), dtype=complex)
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            q += np.kron(eunit(i, j), eunit(4 - i, 4 - j))
    return q


_P = build_p()
_Q = build_q()
_I9 = np.eye(N * N, dtype=complex)


def r_matrix(u: complex, v: complex, params: RParams) -> np.ndarray:
    """Evaluate R(u, v) as a 9x9 matrix.

    Raises PoleError when u - v is within POLE_TOL of 0 or of -c*kappa.
    """
    c = params.c
    d = u - v
    if abs(d) < POLE_TOL:
        raise PoleError(f"R-matrix pole: u - v = {d}")
    dq = d + c * params.kappa
    if abs(dq) < POLE_TOL:
        raise PoleError(f"R-matrix pole: u - v + c*kappa = {dq}")
    return _I9 + (c / d) * _P - (c / dq) * _Q


def transpose_t(x: np.ndarray, space: str | int | None = None) -> np.ndarray:
    """Anti-diagonal transposition (X^t)_{i,j} = X_{j',i'}.

    For a 3x3 matrix ``space`` is ignored.  For a 9x9 matrix on C^3 (x) C^3,
    ``space`` selects the tensor factor: 1, 2, or "both" (default "both").
    """
    x = np.asarray(x)
    if x.shape == (N, N):
        return x.T[::-1, :][:, ::-1].copy()
    if x.shape != (N * N, N * N):
        raise ValueError(f"expected a 3x3 or 9x9 matrix, got shape {x.shape}")
    t = x.reshape(N, N, N, N)
    if space in (None, "both"):
        t = t[::-1, :, ::-1, :].transpose(2, 1, 0, 3)
        t = t[:, ::-1, :, ::-1].transpose(0, 3, 2, 1)
    elif space == 1:
        t = t[::-1, :, ::-1, :].transpose(2, 1, 0, 3)
    elif space == 2:
        t = t[:, ::-1, :, ::-1].transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"space must be 1, 2, 'both' or None, got {space!r}")
    return t.reshape(N * N, N * N).copy()
