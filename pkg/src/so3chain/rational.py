"""Rational function kit for the Bethe-vector machinery.

Two families of functions appear.  The full-coupling pair

    g(u, v) = c/(u - v),            f(u, v) = 1 + g(u, v),

and the half-coupling (gothic) family obtained by the rescaling c -> c/2

    gg(u, v) = (c/2)/(u - v),
    ff(u, v) = (u - v + c/2)/(u - v) = 1 + gg(u, v),
    hh(u, v) = ff(u, v)/gg(u, v) = (u - v + c/2)/(c/2),

together with the ordering prefactor gamma(u_1..u_r) = prod_{i<j} ff(u_j, u_i)
and the usual set-product shorthand (a function applied to sets means the
product over all arguments; the empty product is 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import PoleError

_DIFF_TOL = 1e-12


def _checked_diff(u: complex, v: complex, name: str) -> complex:
    d = u - v
    if abs(d) < _DIFF_TOL:
        raise PoleError(f"{name}({u}, {v}): coincident arguments")
    return d


@dataclass(frozen=True)
class RationalKit:
    """The rational functions above, bound to one coupling constant c."""

    c: complex

    # full coupling
    def g(self, u, v):
        return self.c / _checked_diff(u, v, "g")

    def f(self, u, v):
        d = _checked_diff(u, v, "f")
        return (d + self.c) / d

    # half coupling (the c -> c/2 rescaled family)
    def gg(self, u, v):
        return (self.c / 2) / _checked_diff(u, v, "gg")

    def ff(self, u, v):
        d = _checked_diff(u, v, "ff")
        return (d + self.c / 2) / d

    def hh(self, u, v):
        return (u - v + self.c / 2) / (self.c / 2)

    # set products; any argument may be a scalar or an iterable
    def ff_set(self, xs, ys):
        return _prod2(self.ff, xs, ys)

    def gg_set(self, xs, ys):
        return _prod2(self.gg, xs, ys)

    def hh_set(self, xs, ys):
        return _prod2(self.hh, xs, ys)

    def gamma(self, params) -> complex:
        """Ordering prefactor prod_{i<j} ff(u_j, u_i); 1 on fewer than two parameters."""
        ps = list(params)
        out = 1.0 + 0.0j
        for i, j in combinations(range(len(ps)), 2):
            out *= self.ff(ps[j], ps[i])
        return out


def _as_seq(x):
    if isinstance(x, (list, tuple)):
        return list(x)
    try:
        return list(x)
    except TypeError:
        return [x]


def _prod2(fun, xs, ys) -> complex:
    out = 1.0 + 0.0j
    for x in _as_seq(xs):
        for y in _as_seq(ys):
            out *= fun(x, y)
    return out


_NAMES = {
    "g": "g",
    "f": "f",
    "gothic_g": "gg",
    "gothic_f": "ff",
    "gothic_h": "hh",
    "gg": "gg",
    "ff": "ff",
    "hh": "hh",
}


def rational(name: str, u: complex, v: complex, c: complex) -> complex:
    """Evaluate one of the named rational functions at (u, v)."""
    try:
        attr = _NAMES[name]
    except KeyError:
        raise ValueError(f"unknown rational function {name!r}; choose from {sorted(_NAMES)}")
    return getattr(RationalKit(c), attr)(u, v)
