import numpy as np
import pytest

from so3chain.chain import ChainSpec


@pytest.fixture(scope="session")
def chain1():
    """Single site, homogeneous point at the origin: all closed forms are rational."""
    return ChainSpec(L=1, c=1.0, xi=(0.0,))


@pytest.fixture(scope="session")
def chain2():
    """Generic two-site chain with complex inhomogeneities."""
    return ChainSpec(L=2, c=1.0, xi=(0.31 + 0.12j, -0.42 - 0.2j))


@pytest.fixture(scope="session")
def chain2_real():
    """Two-site chain with real data (for dual-vector work)."""
    return ChainSpec(L=2, c=1.0, xi=(0.31, -0.42))


@pytest.fixture(scope="session")
def chain3():
    return ChainSpec(L=3, c=1.0, xi=(0.55, -0.62 + 0.3j, 0.05 - 0.35j))


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def draw_point(rng, spec, scale=3.0):
    """Spectral point comfortably away from the chain singular set."""
    from so3chain.gauss import point_valid

    for _ in range(1000):
        u = complex(rng.uniform(-scale, scale), rng.uniform(-scale / 2, scale / 2))
        if point_valid(spec, u, tol=0.15):
            return u
    raise RuntimeError("no valid point found")


def draw_params(rng, spec, r, min_sep=0.25):
    out = []
    while len(out) < r:
        w = draw_point(rng, spec)
        if all(
            abs(w - p) > min_sep and abs(abs(w - p) - abs(spec.c) / 2) > 0.15 for p in out
        ):
            out.append(w)
    return out
