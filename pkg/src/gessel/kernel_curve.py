"""The kernel of Gessel's walk, its branch points, and the group <xi, eta>.

K(x, y; z) = z x^2 y^2 + z x^2 y + z y + z - x y is always evaluated in this
expanded form, so x = 0 and y = 0 are regular points.

Group words are tuples of letters from {"xi", "eta"} and act left to right:
the word ("xi", "eta") first applies xi, then eta.  Reduced words never
repeat a letter; the length-4 element is spelled ("xi", "eta", "xi", "eta"),
which equals ("eta", "xi", "eta", "xi") on Gessel's curve.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

__all__ = [
    "KernelCoefficients",
    "BranchPoints",
    "GroupElement",
    "DegenerateOrbitWarning",
    "kernel_eval",
    "kernel_coefficients",
    "discriminant_x",
    "discriminant_y",
    "branch_points",
    "step_polynomial",
    "xi",
    "eta",
    "GESSEL_GROUP",
    "apply_word",
    "orbit",
    "orbit_sum",
    "simple_xi",
    "simple_eta",
    "simple_orbit",
    "simple_orbit_sum",
]


class DegenerateOrbitWarning(UserWarning):
    """Two group elements sent the point to the same image."""


def kernel_eval(x, y, z):
    return z * x * x * y * y + z * x * x * y + z * y + z - x * y


@dataclass(frozen=True)
class KernelCoefficients:
    """K(x, y) = a(x) y^2 + b(x) y + c(x) at fixed z."""

    z: object

    def a(self, x):
        return self.z * x * x

    def b(self, x):
        return self.z * x * x - x + self.z

    def c(self, x):
        return self.z + 0 * x

    def d(self, x):
        """Discriminant in y: b(x)^2 - 4 a(x) c(x)."""
        return self.b(x) ** 2 - 4 * self.a(x) * self.c(x)

    def d_prime(self, x):
        z = self.z
        return 2 * (z * x * x - x + z) * (2 * z * x - 1) - 8 * z * z * x

    def d_second(self, x):
        z = self.z
        return 2 * (2 * z * x - 1) ** 2 + 4 * z * (z * x * x - x + z) - 8 * z * z


def kernel_coefficients(z) -> KernelCoefficients:
    return KernelCoefficients(z)


def discriminant_x(x, z):
    """d(x) = (z x^2 - x + z)^2 - 4 z^2 x^2."""
    return (z * x * x - x + z) ** 2 - 4 * z * z * x * x


def discriminant_y(y, z):
    """d~(y) = y^2 - 4 z^2 (y^2 + y)(y + 1)."""
    return y * y - 4 * z * z * (y * y + y) * (y + 1)


@dataclass(frozen=True)
class BranchPoints:
    x1: float
    x2: float
    x3: float
    x4: float
    y1: float
    y2: float
    y3: float
    y4: float

    @property
    def xs(self) -> tuple[float, float, float, float]:
        return (self.x1, self.x2, self.x3, self.x4)

    @property
    def ys(self) -> tuple[float, float, float, float]:
        return (self.y1, self.y2, self.y3, self.y4)


def _check_z(z: float) -> None:
    if not 0 < z < 0.25:
        raise ValueError(f"z must lie in (0, 1/4), got {z!r}")


def branch_points(z: float) -> BranchPoints:
    _check_z(z)
    # the "1 - sqrt" forms lose digits for small z; rationalised equivalents
    s4p = math.sqrt(1 + 4 * z)
    s4m = math.sqrt(1 - 4 * z)
    x1 = 2 * z / (1 + 2 * z + s4p)
    x2 = 2 * z / (1 - 2 * z + s4m)
    # (1 - 8z^2 - sqrt(1 - 16z^2)) / (8z^2), numerator rationalised
    y2 = 8 * z * z / (1 - 8 * z * z + math.sqrt(1 - 16 * z * z))
    return BranchPoints(x1, x2, 1 / x2, 1 / x1, 0.0, y2, 1 / y2, math.inf)


def step_polynomial(x, y):
    """Sum over Gessel's steps of x^i y^j: xy + x + 1/x + 1/(xy)."""
    return x * y + x + 1 / x + 1 / (x * y)


def _inv(v, what: str):
    if v == 0:
        raise ZeroDivisionError(f"{what} has a zero denominator")
    return 1 / v if not isinstance(v, int) else Fraction(1, v)


def xi(x, y):
    return (x, _inv(x * x * y, "xi"))


def eta(x, y):
    return (_inv(x * y, "eta"), y)


_MAPS = {"xi": xi, "eta": eta}


@dataclass(frozen=True)
class GroupElement:
    word: tuple[str, ...]

    def __post_init__(self):
        for a, b in zip(self.word, self.word[1:]):
            if a == b:
                raise ValueError(f"word {self.word} is not reduced")
        if any(w not in _MAPS for w in self.word):
            raise ValueError(f"unknown letter in {self.word}")

    @property
    def sign(self) -> int:
        return (-1) ** len(self.word)

    def __str__(self) -> str:
        return "".join({"xi": "ξ", "eta": "η"}[w] for w in self.word) or "id"


GESSEL_GROUP: tuple[GroupElement, ...] = tuple(
    GroupElement(w)
    for w in [
        (),
        ("xi",),
        ("eta",),
        ("xi", "eta"),
        ("eta", "xi"),
        ("xi", "eta", "xi"),
        ("eta", "xi", "eta"),
        ("xi", "eta", "xi", "eta"),
    ]
)


def apply_word(word: Sequence[str], x, y, maps=_MAPS):
    for letter in word:
        x, y = maps[letter](x, y)
    return x, y


def _as_exact(v):
    return v if isinstance(v, Fraction) else Fraction(v)


def _orbit(x, y, group, maps, closure_word):
    x, y = _as_exact(x), _as_exact(y)
    if apply_word(closure_word, x, y, maps) != (x, y):
        raise ArithmeticError(f"group relation failed at {(x, y)}")
    pts = [(g, apply_word(g.word, x, y, maps)) for g in group]
    if len({p for _, p in pts}) < len(pts):
        warnings.warn(f"degenerate orbit at {(x, y)}", DegenerateOrbitWarning, stacklevel=3)
    return pts


def orbit(x, y) -> list[tuple[GroupElement, tuple[Fraction, Fraction]]]:
    """Signed orbit of (x, y) under <xi, eta>, in exact rationals.

    Verifies (eta xi)^4 = id at the point before returning; a degenerate
    orbit (coinciding images) only warns.
    """
    return _orbit(x, y, GESSEL_GROUP, _MAPS, ("xi", "eta") * 4)


def orbit_sum(x, y) -> Fraction:
    """Sum of sign(theta) * x*y over the orbit; identically 0 for Gessel."""
    return sum((g.sign * p[0] * p[1] for g, p in orbit(x, y)), Fraction(0))


# Simple walk {E, W, N, S}: the group has order 4.
def simple_xi(x, y):
    return (_inv(x, "xi"), y)


def simple_eta(x, y):
    return (x, _inv(y, "eta"))


_SIMPLE_MAPS: dict[str, Callable] = {"xi": simple_xi, "eta": simple_eta}
_SIMPLE_GROUP = tuple(
    GroupElement(w) for w in [(), ("xi",), ("eta",), ("xi", "eta")]
)


def simple_orbit(x, y):
    return _orbit(x, y, _SIMPLE_GROUP, _SIMPLE_MAPS, ("xi", "eta") * 2)


def simple_orbit_sum(x, y) -> Fraction:
    """Signed xy orbit sum for the simple walk: (x - 1/x)(y - 1/y), nonzero."""
    return sum((g.sign * p[0] * p[1] for g, p in simple_orbit(x, y)), Fraction(0))
