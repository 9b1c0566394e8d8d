import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from so3chain.errors import PoleError
from so3chain.rational import RationalKit, rational

KIT = RationalKit(c=1.0)

finite = st.floats(-8, 8)


def test_half_family_special_values():
    z = 0.37 + 0.21j
    c = 1.0
    kit = RationalKit(c=c)
    assert kit.ff(z, z + c / 2) == 0.0
    assert kit.hh(z + c / 2, z) == pytest.approx(2.0)
    assert kit.hh(z, z) == pytest.approx(1.0)
    assert kit.ff(z + c / 2, z) == pytest.approx(2.0)


def test_gamma_conventions():
    assert KIT.gamma([]) == 1.0
    assert KIT.gamma([1.3]) == 1.0  # single parameter: empty product
    z = 0.2
    assert KIT.gamma([z, z + 0.5]) == pytest.approx(2.0)  # the distinguished pair


def test_set_products_and_empty_sets():
    assert KIT.ff_set([], [1.0, 2.0]) == 1.0
    assert KIT.ff_set([5.0], []) == 1.0
    xs, ys = [1.0, 2.0], [0.1 + 0.3j]
    expected = KIT.ff(xs[0], ys[0]) * KIT.ff(xs[1], ys[0])
    assert KIT.ff_set(xs, ys) == pytest.approx(expected)


@settings(max_examples=60, deadline=None)
@given(ur=finite, ui=finite, vr=finite, vi=finite)
def test_family_relations(ur, ui, vr, vi):
    u, v = complex(ur, ui), complex(vr, vi)
    if abs(u - v) < 1e-3:
        return
    # ff = 1 + gg, hh = ff/gg, and f is ff with c doubled
    assert cmath.isclose(KIT.ff(u, v), 1 + KIT.gg(u, v), rel_tol=1e-12)
    assert cmath.isclose(KIT.hh(u, v), KIT.ff(u, v) / KIT.gg(u, v), rel_tol=1e-12)
    doubled = RationalKit(c=2.0)
    assert cmath.isclose(KIT.f(u, v), doubled.ff(u, v), rel_tol=1e-12)
    assert cmath.isclose(KIT.f(u, v), 1 + KIT.g(u, v), rel_tol=1e-12)


def test_pole_guard():
    with pytest.raises(PoleError):
        KIT.g(1.0, 1.0)
    with pytest.raises(PoleError):
        KIT.ff(0.5j, 0.5j)
    # hh has no pole at coincident points
    assert KIT.hh(1.0, 1.0) == pytest.approx(1.0)


def test_named_dispatch():
    u, v = 1.7, 0.4
    assert rational("g", u, v, 1.0) == pytest.approx(1.0 / (u - v))
    assert rational("gothic_g", u, v, 1.0) == pytest.approx(0.5 / (u - v))
    assert rational("gothic_f", u, v, 1.0) == rational("ff", u, v, 1.0)
    with pytest.raises(ValueError):
        rational("nope", u, v, 1.0)
