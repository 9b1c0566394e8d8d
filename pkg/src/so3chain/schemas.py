"""Pydantic request/response models: the wire format of the service and
the CLI.

Complex numbers travel as [re, im] pairs.  Every response carries the
schema version and the RNG seed that produced it, so published residuals
are reproducible bit for bit.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from .chain import ChainSpec

SCHEMA_VERSION = 1

Pair = tuple[float, float]


def c2pair(z: complex) -> Pair:
    z = complex(z)
    return (z.real, z.imag)


def pair2c(p) -> complex:
    return complex(p[0], p[1])


class ChainSpecModel(BaseModel):
    """Chain description as serialized: {"L": int, "c": [re, im], "xi": [[re, im], ...]}."""

    model_config = ConfigDict(extra="forbid")

    L: int
    c: Pair
    xi: list[Pair]

    def to_spec(self, allow_large: bool = False, strict: bool = True) -> ChainSpec:
        return ChainSpec(
            L=self.L,
            c=pair2c(self.c),
            xi=tuple(pair2c(x) for x in self.xi),
            allow_large=allow_large,
            strict=strict,
        )

    @classmethod
    def from_spec(cls, spec: ChainSpec) -> "ChainSpecModel":
        return cls(L=spec.L, c=c2pair(spec.c), xi=[c2pair(x) for x in spec.xi])


class _Request(BaseModel):
    model_config = ConfigDict(extra="forbid")

    chain: Optional[ChainSpecModel] = None  # omitted -> random chain from the seed
    L: int = Field(default=2, ge=1, le=5, description="sites of the random chain")
    seed: int = Field(default=0, ge=0)
    tol: Optional[float] = Field(default=None, gt=0, description="override all tolerances")


class _Response(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    command: str
    seed: int
    chain: ChainSpecModel
    ok: bool


class IdentityResult(BaseModel):
    residual: float
    tol: float
    passed: bool


class CheckRequest(_Request):
    n_points: int = Field(default=3, ge=1, le=20, description="spectral points per suite")
    rtt_pairs: int = Field(default=5, ge=1, le=50)


class CheckResponse(_Response):
    command: str = "check"
    identities: dict[str, IdentityResult]


class BetheRequest(_Request):
    params: Optional[list[Pair]] = None  # omitted -> r random parameters
    r: int = Field(default=2, ge=0, le=4)


class BetheResponse(_Response):
    command: str = "bethe"
    params: list[Pair]
    closed_vs_rec12: float
    closed_vs_rec23: float
    permutation_residual: float
    state: dict  # {params, method, vector} export of the closed-formula state


class ActRequest(_Request):
    i: int = Field(default=1, ge=1, le=3)
    j: int = Field(default=3, ge=1, le=3)
    z: Optional[Pair] = None
    params: Optional[list[Pair]] = None
    r: int = Field(default=1, ge=0, le=4)


class ActResponse(_Response):
    command: str = "act"
    i: int
    j: int
    z: Pair
    params: list[Pair]
    residual: float
    n_partitions: int
    pruned: int
    specialized_residuals: dict[str, float]


class SolveRequest(_Request):
    r: int = Field(default=1, ge=0, le=4)
    seeds: Optional[list[list[Pair]]] = None  # explicit Newton seeds
    n_seeds: int = Field(default=40, ge=1, le=500)


class RootSetReport(BaseModel):
    roots: list[Pair]
    be_residual: float
    tau_at_reference: Pair
    ed_match_gap: float


class SolveResponse(_Response):
    command: str = "solve"
    r: int
    root_sets: list[RootSetReport]


class SpectrumRequest(_Request):
    params: Optional[list[Pair]] = None  # omitted -> solve for r excitations first
    r: int = Field(default=1, ge=0, le=4)
    n_z: int = Field(default=5, ge=1, le=20)


class OnshellReport(BaseModel):
    params: list[Pair]
    be_residual: float
    eigen_residual: float
    ed_match_gap: float
    zero_mode_annihilation: float
    pole_cancellation: float
    ok: bool


class SpectrumResponse(_Response):
    command: str = "spectrum"
    reports: list[OnshellReport]


class ScalarRequest(_Request):
    r_values: list[int] = Field(default=[0, 1, 2])
    samples: int = Field(default=20, ge=1, le=200)


class ScalarReport(BaseModel):
    r: int
    samples: int
    skipped: int
    rho_mean: Pair
    rho_spread: float
    two_pow_minus_r_ratio: Pair


class ScalarResponse(_Response):
    command: str = "scalar"
    reports: list[ScalarReport]


REQUEST_TYPES = {
    "check": CheckRequest,
    "bethe": BetheRequest,
    "act": ActRequest,
    "solve": SolveRequest,
    "spectrum": SpectrumRequest,
    "scalar": ScalarRequest,
}

RESPONSE_TYPES = {
    "check": CheckResponse,
    "bethe": BetheResponse,
    "act": ActResponse,
    "solve": SolveResponse,
    "spectrum": SpectrumResponse,
    "scalar": ScalarResponse,
}
