"""Truncated power series with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = ["RationalSeries", "binomial_coefficients"]


def binomial_coefficients(alpha, order: int) -> list[Fraction]:
    """[binom(alpha, k) for k = 0..order] for a rational exponent alpha."""
    alpha = Fraction(alpha)
    out = [Fraction(1)]
    for k in range(1, order + 1):
        out.append(out[-1] * (alpha - k + 1) / k)
    return out


class RationalSeries:
    """c_0 + c_1 z + ... + c_N z^N + O(z^{N+1}).

    Binary operations truncate to the smaller of the two orders.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is not None:
            cs = (cs + [Fraction(0)] * (order + 1))[: order + 1]
        if not cs:
            raise ValueError("a series needs at least one coefficient")
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c, order: int) -> "RationalSeries":
        return cls([c], order)

    @classmethod
    def variable(cls, order: int) -> "RationalSeries":
        return cls([0, 1], order)

    @classmethod
    def polynomial(cls, coeffs: Sequence, order: int) -> "RationalSeries":
        return cls(coeffs, order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalSeries):
            n = min(self.order, other.order)
            return self.coeffs[: n + 1] == other.coeffs[: n + 1]
        return NotImplemented

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        return f"RationalSeries([{head}{', ...' if self.order >= 6 else ''}], order={self.order})"

    def truncate(self, order: int) -> "RationalSeries":
        return RationalSeries(self.coeffs, order) if order < self.order else self

    def _coerce(self, other) -> "RationalSeries":
        if isinstance(other, RationalSeries):
            return other
        return RationalSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return RationalSeries([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])])

    __radd__ = __add__

    def __neg__(self):
        return RationalSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalSeries):
            c = Fraction(other)
            return RationalSeries([c * a for a in self.coeffs])
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            out.append(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)))
        return RationalSeries(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "RationalSeries":
        """Multiply by z^k (k > 0) or divide by z^-k (k < 0, low terms must vanish)."""
        if k >= 0:
            return RationalSeries([0] * k + list(self.coeffs), self.order)
        k = -k
        if any(self.coeffs[:k]):
            raise ArithmeticError(f"series is not divisible by z^{k}")
        return RationalSeries(self.coeffs[k:])

    def compose(self, inner: "RationalSeries") -> "RationalSeries":
        """self(inner(z)); inner must have zero constant term."""
        if inner[0] != 0:
            raise ValueError("inner series must have zero constant term")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        out = RationalSeries.constant(self.coeffs[min(n, self.order)], n)
        for c in reversed(self.coeffs[:n]):
            out = out * inner + c
        return out

    def power(self, alpha) -> "RationalSeries":
        """self^alpha through the binomial series of (1 + u)^alpha, u = self - 1.

        The constant term must be 1.
        """
        if self[0] != 1:
            raise ValueError("power needs constant term 1")
        u = self - 1
        return RationalSeries(binomial_coefficients(alpha, self.order)).compose(u)

    def inverse(self) -> "RationalSeries":
        """1 / self for a nonzero constant term."""
        c0 = self[0]
        if c0 == 0:
            raise ZeroDivisionError("constant term is zero")
        out = [1 / c0]
        for k in range(1, self.order + 1):
            s = sum((self.coeffs[i] * out[k - i] for i in range(1, k + 1)), Fraction(0))
            out.append(-s / c0)
        return RationalSeries(out)

    def __truediv__(self, other):
        if isinstance(other, RationalSeries):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = RationalSeries.constant(1, self.order)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self) -> "RationalSeries":
        if self.order == 0:
            return RationalSeries([0])
        return RationalSeries([k * c for k, c in enumerate(self.coeffs) if k])

    def evaluate(self, x) -> complex:
        total = 0
        for c in reversed(self.coeffs):
            total = total * x + float(c)
        return total
