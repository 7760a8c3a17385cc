"""Exact enumeration of small-step lattice walks.

Counts are Python integers (they grow like 4^n), stored per length in numpy
object arrays so that one DP sweep is a handful of slice additions.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

__all__ = [
    "StepSet",
    "GESSEL",
    "SIMPLE",
    "CountTable",
    "count_table",
    "count_walks",
    "pochhammer",
    "gessel_excursions_closed_form",
    "catalan",
    "CrossCheckReport",
    "classical_cross_checks",
    "functional_equation_residual",
    "eval_Q_truncated",
    "Q_tail_bound",
    "REGIONS",
]


@dataclass(frozen=True)
class StepSet:
    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        steps = tuple(tuple(s) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise ValueError("step set is empty")
        if len(set(steps)) != len(steps):
            raise ValueError("duplicate steps")
        for dx, dy in steps:
            if (dx, dy) == (0, 0) or abs(dx) > 1 or abs(dy) > 1:
                raise ValueError(f"not a small nonzero step: {(dx, dy)}")


GESSEL = StepSet(((1, 1), (1, 0), (-1, 0), (-1, -1)))
SIMPLE = StepSet(((1, 0), (-1, 0), (0, 1), (0, -1)))

REGIONS: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "plane": lambda i, j: np.ones(np.shape(i), dtype=bool),
    "half_plane": lambda i, j: j >= 0,
    "quarter_plane": lambda i, j: (i >= 0) & (j >= 0),
    # Gouyou-Beauchamps octant, encoded as the 45 degree cone 0 <= j <= i
    "octant": lambda i, j: (j >= 0) & (j <= i),
}


def count_walks(steps: StepSet, n_max: int, region: str = "quarter_plane") -> list[np.ndarray]:
    """Walk counts from the origin confined to ``region``.

    Returns one (2n_max+1)^2 object array per length n = 0..n_max, indexed by
    [i + n_max, j + n_max].
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    keep = REGIONS[region]
    size = 2 * n_max + 1
    coords = np.arange(size) - n_max
    ii, jj = np.meshgrid(coords, coords, indexing="ij")
    mask = keep(ii, jj)
    cur = np.zeros((size, size), dtype=object)
    cur[n_max, n_max] = 1
    layers = [cur]
    for _ in range(n_max):
        nxt = np.zeros((size, size), dtype=object)
        for dx, dy in steps.steps:
            src_i = slice(max(0, -dx), size - max(0, dx))
            dst_i = slice(max(0, dx), size - max(0, -dx))
            src_j = slice(max(0, -dy), size - max(0, dy))
            dst_j = slice(max(0, dy), size - max(0, -dy))
            nxt[dst_i, dst_j] += cur[src_i, src_j]
        nxt[~mask] = 0
        layers.append(nxt)
        cur = nxt
    return layers


class CountTable:
    """q(i, j; n) for 0 <= i, j <= n <= n_max, quarter-plane walks.

    Layer n is an (n+1) x (n+1) read-only object array of ints.
    """

    def __init__(self, steps: StepSet, layers: list[np.ndarray]):
        self.steps = steps
        self._layers = layers
        for layer in layers:
            layer.flags.writeable = False

    @property
    def n_max(self) -> int:
        return len(self._layers) - 1

    def layer(self, n: int) -> np.ndarray:
        return self._layers[n]

    def count(self, i: int, j: int, n: int) -> int:
        if not 0 <= n <= self.n_max:
            raise IndexError(f"length {n} outside table (n_max={self.n_max})")
        if i < 0 or j < 0 or i > n or j > n:
            return 0
        return int(self._layers[n][i, j])

    __call__ = count

    def excursions(self, n: int) -> int:
        return self.count(0, 0, n)

    def total(self, n: int) -> int:
        return int(sum(self._layers[n].ravel()))

    def column(self, i: int, j: int) -> list[int]:
        """[q(i, j; n) for n = 0..n_max]."""
        return [self.count(i, j, n) for n in range(self.n_max + 1)]

    def nonzero(self) -> Iterable[tuple[int, int, int, int]]:
        for n, layer in enumerate(self._layers):
            for i, j in zip(*np.nonzero(layer)):
                yield int(i), int(j), n, int(layer[i, j])

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "j", "n", "count"])
        for row in self.nonzero():
            w.writerow(row)

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


@lru_cache(maxsize=16)
def _quarter_layers(steps: StepSet, n_max: int) -> tuple[np.ndarray, ...]:
    layers = [np.array([[1]], dtype=object)]
    for n in range(1, n_max + 1):
        prev = layers[-1]
        cur = np.zeros((n + 1, n + 1), dtype=object)
        m = n  # prev has shape (m, m), coordinates 0..n-1
        for dx, dy in steps.steps:
            # target (i, j) = source + (dx, dy); both must be >= 0
            si0, di0 = max(0, -dx), max(0, dx)
            sj0, dj0 = max(0, -dy), max(0, dy)
            ni, nj = m - si0, m - sj0
            cur[di0 : di0 + ni, dj0 : dj0 + nj] += prev[si0:m, sj0:m]
        layers.append(cur)
    return tuple(layers)


def count_table(steps: StepSet, n_max: int) -> CountTable:
    """Exact quarter-plane counts q(i, j; n) for n <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    layers = [layer.copy() for layer in _quarter_layers(steps, n_max)]
    return CountTable(steps, layers)


def pochhammer(a, n: int) -> Fraction:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), exactly."""
    if n < 0:
        raise ValueError("n must be >= 0")
    a = Fraction(a)
    out = Fraction(1)
    for k in range(n):
        out *= a + k
    return out


def gessel_excursions_closed_form(n: int) -> int:
    """16^n (5/6)_n (1/2)_n / ((2)_n (5/3)_n), the number of excursions of length 2n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    val = (
        Fraction(16) ** n
        * pochhammer(Fraction(5, 6), n)
        * pochhammer(Fraction(1, 2), n)
        / (pochhammer(2, n) * pochhammer(Fraction(5, 3), n))
    )
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral excursion count at n={n}: {val}")
    return val.numerator


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


CLASSICAL_FORMULAS: dict[str, Callable[[int], int]] = {
    "plane": lambda n: math.comb(2 * n, n) ** 2,
    "half_plane": lambda n: math.comb(2 * n + 1, n) * catalan(n),
    "quarter_plane": lambda n: catalan(n) * catalan(n + 1),
    "octant": lambda n: catalan(n) * catalan(n + 2) - catalan(n + 1) ** 2,
}


@dataclass
class CrossCheckReport:
    n_max: int
    checked: int
    mismatch: tuple[str, int, int, int] | None = None  # (model, n, expected, got)

    @property
    def ok(self) -> bool:
        return self.mismatch is None


def classical_cross_checks(n_max: int) -> CrossCheckReport:
    """Simple-walk excursions of length 2n in four regions against closed forms."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    checked = 0
    for model, formula in CLASSICAL_FORMULAS.items():
        layers = count_walks(SIMPLE, 2 * n_max, model)
        o = 2 * n_max
        for n in range(n_max + 1):
            got = int(layers[2 * n][o, o])
            expected = formula(n)
            checked += 1
            if got != expected:
                return CrossCheckReport(n_max, checked, (model, n, expected, got))
    return CrossCheckReport(n_max, checked)


def functional_equation_residual(n_max: int, table: CountTable | None = None) -> dict:
    """Coefficients of K Q - K(x,0) Q(x,0) - K(0,y) Q(0,y) + K(0,0) Q(0,0) + xy.

    Returned as {(i, j, n): coefficient} for the nonzero coefficients of
    z-order <= n_max; an empty dict means the identity holds through n_max.
    K(x, y) = z x^2 y^2 + z x^2 y + z y + z - x y.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if table is None:
        table = count_table(GESSEL, n_max)
    q = table.count
    out = {}
    for n in range(n_max + 1):
        for i in range(n + 3):
            for j in range(n + 3):
                v = -q(i - 1, j - 1, n) if n <= table.n_max else 0
                if n >= 1:
                    m = n - 1
                    v += q(i - 2, j - 2, m) + q(i - 2, j - 1, m) + q(i, j - 1, m) + q(i, j, m)
                    if j == 0:
                        v -= q(i, 0, m)
                    if i == 0:
                        v -= q(0, j, m) + q(0, j - 1, m)
                    if i == 0 and j == 0:
                        v += q(0, 0, m)
                if (i, j, n) == (1, 1, 0):
                    v += 1
                if v:
                    out[(i, j, n)] = v
    return out


def eval_Q_truncated(x, y, z, n_max: int, table: CountTable | None = None) -> complex:
    """sum_{n <= n_max} q(i, j; n) x^i y^j z^n in floating point."""
    if table is None or table.n_max < n_max:
        table = count_table(GESSEL, n_max)
    xp = np.array([x**i for i in range(n_max + 1)], dtype=complex)
    yp = np.array([y**j for j in range(n_max + 1)], dtype=complex)
    total = 0j
    zn = 1.0 + 0j
    for n in range(n_max + 1):
        layer = table.layer(n).astype(float)
        total += zn * (xp[: n + 1] @ layer @ yp[: n + 1])
        zn *= z
    return total


def Q_tail_bound(x, y, z, n_max: int) -> float:
    """Bound on the omitted terms: sum_{n > n_max} (4|z| max(1,|x|) max(1,|y|))^n."""
    r = 4 * abs(z) * max(1.0, abs(x)) * max(1.0, abs(y))
    if r >= 1:
        return math.inf
    return r ** (n_max + 1) / (1 - r)
