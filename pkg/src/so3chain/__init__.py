"""Algebraic Bethe ansatz toolkit for so3-invariant inhomogeneous spin chains.

Core layers:

* rmat / hilbert: the 9x9 structural operators and dense operator algebra;
* chain: inhomogeneous monodromy matrices, central scalar, zero modes;
* gauss: triangular (Gauss) coordinates and their identity catalogue;
* bethe / action: off-shell Bethe vectors, recursions, action formulas;
* spectrum: Bethe equations, root solving, on-shell spectra;
* gl2ref: the two-state reference chain for scalar-product comparisons;
* service / cli: FastAPI wrapper and the thin command-line client.
"""

from .chain import ChainSpec, MonodromyEval, monodromy, vacuum_eigenvalues
from .errors import (
    CardinalityError,
    DegenerateError,
    DegenerateSample,
    NoConvergence,
    NotScalarError,
    PoleError,
    RealityError,
    SingularError,
    So3ChainError,
    ZeroDenominatorError,
)
from .gauss import GaussFrame, gauss_decompose
from .bethe import BetheState, bethe_vector, bethe_via_recursion, dual_bethe_vector

__all__ = [
    "ChainSpec",
    "MonodromyEval",
    "GaussFrame",
    "BetheState",
    "monodromy",
    "vacuum_eigenvalues",
    "gauss_decompose",
    "bethe_vector",
    "bethe_via_recursion",
    "dual_bethe_vector",
    "So3ChainError",
    "PoleError",
    "SingularError",
    "NotScalarError",
    "DegenerateError",
    "ZeroDenominatorError",
    "RealityError",
    "NoConvergence",
    "CardinalityError",
    "DegenerateSample",
]

__version__ = "0.1.0"
