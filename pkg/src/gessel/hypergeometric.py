"""Gauss 2F1, the covering z = phi(x), and the algebraic identities that
identify Q(0,0) with a hypergeometric function.

The function called K in the classical literature on this problem is named
``K_hg`` here, to keep it apart from the kernel K(x, y; z).

In x-coordinates (z = phi(x), 0 < x < 1/2, u = 4x + 1):

    G = (4x^2 + 8x + 1) / u^(3/2)      H = (4x^2 + 2x + 1) / u^(3/2)
    K_hg = 4x(x + 1) / u^(3/2)         J = 1 / u
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .series import RationalSeries
from .uniformization import make_context, phi
from .walk_counting import GESSEL, count_table
from .weierstrass import zeta_fn
from .zeta_gf import q00_zeta

__all__ = [
    "HypergeometricValue",
    "gauss_2f1",
    "gauss_2f1_value",
    "gauss_2f1_derivative",
    "phi",
    "psi",
    "G_series",
    "H_series",
    "K_hg_series",
    "J_series",
    "closed_forms_GHJK",
    "V_closed_forms",
    "L_values",
    "V",
    "KeyIdentityReport",
    "check_key_identities",
    "check_gessel_equivalence",
    "check_closed_forms",
    "SeriesReport",
    "covering_series",
    "f_j_series",
    "check_f0_identity",
    "check_new_conjectures",
]

MAX_ARG = 0.95
TAIL_TOL = 1e-12


@dataclass(frozen=True)
class HypergeometricValue:
    a: Fraction
    b: Fraction
    c: Fraction
    argument: complex
    value: complex
    terms: int


def _validate(c, u, max_arg):
    c = Fraction(c)
    if c.denominator == 1 and c <= 0:
        raise ValueError(f"c = {c} is a nonpositive integer")
    if abs(u) >= max_arg:
        raise ValueError(f"|argument| = {abs(u):.4g} is not below {max_arg}")
    return c


def gauss_2f1_value(a, b, c, u, max_arg: float = MAX_ARG, tol: float = TAIL_TOL) -> HypergeometricValue:
    """Direct summation of sum (a)_n (b)_n / ((c)_n n!) u^n until the tail is below tol.

    For k >= n the term ratio is bounded by
    rho = |u| (1 + |a - 1| / (n + 1)) (1 + |b - c| / (c + n)), so once rho < 1
    the tail is at most |t_{n+1}| / (1 - rho).
    """
    a, b = Fraction(a), Fraction(b)
    c = _validate(c, u, max_arg)
    af, bf, cf = float(a), float(b), float(c)
    term = 1.0 + 0j
    total = term
    au = abs(u)
    n = 0
    while True:
        term *= (af + n) * (bf + n) / ((cf + n) * (n + 1)) * u
        total += term
        n += 1
        if term == 0:
            break
        if cf + n > 0:
            rho = au * (1 + abs(af - 1) / (n + 1)) * (1 + abs(bf - cf) / (cf + n))
            if rho < 1:
                nxt = abs(term) * abs((af + n) * (bf + n) / ((cf + n) * (n + 1))) * au
                if nxt / (1 - rho) < tol:
                    break
        if n > 1_000_000:
            raise RuntimeError("2F1 summation did not converge")
    value = total.real if isinstance(u, (int, float)) else total
    return HypergeometricValue(a, b, c, u, value, n + 1)


def gauss_2f1(a, b, c, u, max_arg: float = MAX_ARG, tol: float = TAIL_TOL):
    """2F1([a, b], [c], u) for |u| < max_arg; real arguments give a float."""
    return gauss_2f1_value(a, b, c, u, max_arg, tol).value


def gauss_2f1_derivative(a, b, c, u, max_arg: float = MAX_ARG, tol: float = TAIL_TOL):
    """d/du 2F1 by termwise differentiation, sum n t_n u^(n-1)."""
    a, b = Fraction(a), Fraction(b)
    c = _validate(c, u, max_arg)
    af, bf, cf = float(a), float(b), float(c)
    coef = 1.0  # t_n / u^n
    total = 0.0
    n = 0
    while True:
        coef *= (af + n) * (bf + n) / ((cf + n) * (n + 1))
        n += 1
        contrib = n * coef * u ** (n - 1)
        total += contrib
        if coef == 0 or (n > 20 and abs(contrib) * (n + 1) / n / (1 - abs(u)) < tol * abs(u) ** 2):
            break
        if n > 1_000_000:
            raise RuntimeError("2F1 derivative did not converge")
    return total


def psi(x: float) -> float:
    """16 phi(x)^2 = 16 x (x + 1)^3 / (4x + 1)^3."""
    if not 0 < x < 0.5:
        raise ValueError(f"x must lie in (0, 1/2), got {x!r}")
    return 16 * x * (x + 1) ** 3 / (4 * x + 1) ** 3


# -- the four functions of z ----------------------------------------------------------


def G_series(z, **kw):
    return gauss_2f1(Fraction(-1, 2), Fraction(-1, 6), Fraction(2, 3), 16 * z * z, **kw)


def H_series(z, **kw):
    return gauss_2f1(Fraction(-1, 2), Fraction(1, 6), Fraction(1, 3), 16 * z * z, **kw)


def K_hg_series(z, **kw):
    """z G'(z) = 4 z^2 2F1([1/2, 5/6], [5/3], 16 z^2)."""
    return 4 * z * z * gauss_2f1(Fraction(1, 2), Fraction(5, 6), Fraction(5, 3), 16 * z * z, **kw)


def J_series(z, **kw):
    return (G_series(z, **kw) - K_hg_series(z, **kw)) ** 2


def closed_forms_GHJK(x: float) -> tuple[float, float, float, float]:
    """(G, H, K_hg, J) at z = phi(x)."""
    if not 0 < x < 0.5:
        raise ValueError(f"x must lie in (0, 1/2), got {x!r}")
    u = 4 * x + 1
    s = u**1.5
    return ((4 * x * x + 8 * x + 1) / s, (4 * x * x + 2 * x + 1) / s, 4 * x * (x + 1) / s, 1 / u)


def V_closed_forms(x: float) -> dict[tuple[int, int, int], float]:
    """V_{1,4,5}, V_{2,4,6}, V_{1,5,6}, V_{1,2,3} at z = phi(x)."""
    u = 4 * x + 1
    s = u**1.5
    return {
        (1, 4, 5): (2 * x * x + 4 * x + 1) / s,
        (2, 4, 6): (2 * x + 1) / s,
        (1, 5, 6): (2 * x + 1) / u,
        (1, 2, 3): x / u + (x + 1) * (2 * x + 1) / s,
    }


# -- L and V from zeta values -------------------------------------------------------


def L_values(z: float) -> tuple[float, ...]:
    """L_k = zeta_{1,3}(k omega2 / 4), k = 1..6."""
    ctx = make_context(z)
    return tuple(float(zeta_fn(k * ctx.omega2 / 4, ctx.lattice13).real) for k in range(1, 7))


def V(i: int, j: int, k: int, z: float) -> float:
    L = L_values(z)
    return L[i - 1] + L[j - 1] - L[k - 1]


@dataclass
class KeyIdentityReport:
    grid: list[float]
    residuals: dict[str, float] = field(default_factory=dict)
    tolerance: float = 1e-8

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tolerance


def check_key_identities(x_grid: Sequence[float], tol: float = 1e-8) -> KeyIdentityReport:
    """The four linear identities between V's and G, H, J, K_hg, the telescoped
    sum, and the printed V closed forms, at z = phi(x).

    V comes from zeta values; G, H, J, K_hg from their closed forms in x.
    """
    rep = KeyIdentityReport(list(x_grid), tolerance=tol)
    worst = {k: 0.0 for k in ("V145", "V246", "V156", "V123", "telescoped", "V_closed_forms")}
    for x in x_grid:
        z = phi(x)
        L = L_values(z)
        v = {key: L[key[0] - 1] + L[key[1] - 1] - L[key[2] - 1] for key in V_closed_forms(x)}
        G, H, K, J = closed_forms_GHJK(x)
        res = {
            "V145": v[(1, 4, 5)] - ((2 * G + H) / 3 - K / 2),
            "V246": v[(2, 4, 6)] - ((2 * G + H) / 3 - K),
            "V156": v[(1, 5, 6)] - (J + 1) / 2,
            "V123": v[(1, 2, 3)] - (2 * G + 2 * H - J - 2 * K + 1) / 4,
            "telescoped": (L[0] - 3 * L[1] + 2 * L[2] + 3 * L[3] - 5 * L[4] + 2 * L[5]) - (G - 1),
            "V_closed_forms": max(abs(v[k] - val) for k, val in V_closed_forms(x).items()),
        }
        for k, r in res.items():
            worst[k] = max(worst[k], abs(r))
    rep.residuals = worst
    return rep


def check_closed_forms(x_grid: Sequence[float], max_arg: float = MAX_ARG) -> dict:
    """G, H, K_hg, J series at phi(x) against their closed forms.

    Points with psi(x) >= max_arg are skipped (direct summation only).
    """
    used, worst = [], 0.0
    for x in x_grid:
        if psi(x) >= max_arg:
            continue
        z = phi(x)
        series = (G_series(z), H_series(z), K_hg_series(z), J_series(z))
        worst = max(worst, max(abs(s - c) for s, c in zip(series, closed_forms_GHJK(x))))
        used.append(x)
    return {"x": used, "max_residual": worst}


def check_gessel_equivalence(z_grid: Sequence[float], tol: float = 1e-7) -> dict:
    """|q00_zeta(z) - (G(z) - 1) / (2 z^2)| over the grid."""
    rows = []
    for z in z_grid:
        lhs = q00_zeta(z)
        rhs = (G_series(z) - 1) / (2 * z * z)
        rows.append({"z": z, "q00_zeta": lhs, "hypergeometric": rhs, "residual": abs(lhs - rhs)})
    worst = max(r["residual"] for r in rows)
    return {"rows": rows, "max_residual": worst, "tolerance": tol, "pass": worst < tol}


# -- exact series ---------------------------------------------------------------------


@dataclass
class SeriesReport:
    j: int
    order: int
    coefficients: list[Fraction]
    vanishing_above: bool
    positive_below: bool
    first_mismatch: int | None = None

    @property
    def consistent(self) -> bool:
        return self.vanishing_above and self.positive_below


def covering_series(order: int) -> RationalSeries:
    """z (1 + z)^3 / (1 + 4z)^3."""
    num = RationalSeries([0, 1, 3, 3, 1], order)
    den = RationalSeries([1, 12, 48, 64], order)
    return num * den.inverse()


def f_j_series(j: int, order: int, table=None) -> RationalSeries:
    """(-1)^j (2j+1) z^j + 2 z^(j+1) sum_n q(0, j; 2n) z^n, through z^order."""
    if j < 0:
        raise ValueError("j must be >= 0")
    if table is None or table.n_max < 2 * order:
        table = count_table(GESSEL, 2 * order)
    c = [Fraction(0)] * (order + 1)
    if j <= order:
        c[j] += (-1) ** j * (2 * j + 1)
    for n in range(order - j):
        c[j + 1 + n] += 2 * table.count(0, j, 2 * n)
    return RationalSeries(c)


def check_f0_identity(order: int, table=None) -> SeriesReport:
    """f_0(z (1+z)^3/(1+4z)^3) = (1 + 8z + 4z^2) / (1+4z)^(3/2), coefficientwise."""
    lhs = f_j_series(0, order, table).compose(covering_series(order))
    rhs = RationalSeries([1, 8, 4], order) * RationalSeries([1, 4], order).power(Fraction(-3, 2))
    mismatch = next((k for k in range(order + 1) if lhs[k] != rhs[k]), None)
    return SeriesReport(0, order, list(lhs.coeffs), mismatch is None, True, mismatch)


def check_new_conjectures(j: int, order: int, table=None) -> SeriesReport:
    """Coefficients of p_j = f_j(z (1+z)^3/(1+4z)^3) (1+4z)^(3/2+3j) / (-z)^j.

    The report says whether the coefficients of degree > 3j + 2 vanish through
    ``order`` and whether those of degree <= 3j + 2 are positive.  These are
    open statements and are reported, not asserted.
    """
    if j == 0:
        return check_f0_identity(order, table)
    if j < 0:
        raise ValueError("j must be >= 0")
    n = order + j  # dividing by z^j costs j orders
    composed = f_j_series(j, n, table).compose(covering_series(n))
    prefactor = RationalSeries([1, 4], n).power(Fraction(3, 2) + 3 * j)
    p = (composed * prefactor).shift(-j) * ((-1) ** j)
    p = p.truncate(order)
    deg = 3 * j + 2
    above = [p[k] for k in range(deg + 1, order + 1)]
    mismatch = next((deg + 1 + k for k, c in enumerate(above) if c != 0), None)
    return SeriesReport(
        j,
        order,
        list(p.coeffs),
        vanishing_above=mismatch is None,
        positive_below=all(p[k] > 0 for k in range(min(deg, order) + 1)),
        first_mismatch=mismatch,
    )

