"""Periods, the elliptic parametrisation x(w), y(w) of the kernel curve, and
the algebraic values R, T_l = wp_{1,3}(l*w2/4).

Period conventions: ``omega1`` is purely imaginary, ``omega2`` and
``omega3`` are real positive; wp has full periods (omega1, omega2) and
wp_{1,3} has full periods (omega1, 3*omega2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import cached_property, lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .kernel_curve import BranchPoints, KernelCoefficients, branch_points, kernel_eval
from .weierstrass import Invariants, RectLattice, wp, wp_prime, zeta_fn

__all__ = [
    "QuadratureError",
    "RootAmbiguityWarning",
    "ModelPeriods",
    "UniformizationContext",
    "SublatticeData",
    "compute_periods",
    "make_context",
    "x_of_omega",
    "y_of_omega",
    "closed_form_invariants",
    "compute_R",
    "sublattice_invariants",
    "compute_T",
    "phi",
    "T_at_phi",
    "R_at_phi",
    "check_poles_zeros",
    "check_group_lift",
    "wp_special_values",
    "kernel_residual",
    "T_direct",
    "T_cubic_coefficients",
]

QUAD_TOL = 1e-11


class QuadratureError(RuntimeError):
    pass


class RootAmbiguityWarning(UserWarning):
    pass


def _check_z(z: float) -> None:
    if not 0 < z < 0.25:
        raise ValueError(f"z must lie in (0, 1/4), got {z!r}")


def _quad(f, a, b) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val, err = quad(f, a, b, epsabs=1e-14, epsrel=1e-14, limit=500)
    if not err <= QUAD_TOL:
        raise QuadratureError(f"quadrature error estimate {err:.3g} exceeds {QUAD_TOL}")
    return val


def _between(z, a, b, others):
    """Integral over [a, b] of dx / sqrt(|d(x)|), d = z^2 prod(x - x_k).

    x = a + (b - a) sin^2 t cancels both inverse square roots at the ends.
    """
    o1, o2 = others

    def f(t):
        x = a + (b - a) * math.sin(t) ** 2
        return 2.0 / (z * math.sqrt(abs((x - o1) * (x - o2))))

    return _quad(f, 0.0, math.pi / 2)


def _left_tail(z, bp: BranchPoints):
    """Integral over (-inf, x1] of dx / sqrt(d(x)).

    x = x1 - tan^2(t) removes the endpoint singularity and maps the infinite
    range onto [0, pi/2) with a smooth integrand.
    """
    c = [bp.x2 - bp.x1, bp.x3 - bp.x1, bp.x4 - bp.x1]

    def f(t):
        co, si = math.cos(t), math.sin(t)
        c2, s2 = co * co, si * si
        return 2.0 * co / (z * math.sqrt((c[0] * c2 + s2) * (c[1] * c2 + s2) * (c[2] * c2 + s2)))

    return _quad(f, 0.0, math.pi / 2)


@dataclass(frozen=True)
class ModelPeriods:
    omega1: complex
    omega2: float
    omega3: float

    @property
    def ratio(self) -> float:
        return self.omega3 / self.omega2


def compute_periods(z: float) -> ModelPeriods:
    _check_z(z)
    bp = branch_points(z)
    w1 = _between(z, bp.x1, bp.x2, (bp.x3, bp.x4))
    w2 = _between(z, bp.x2, bp.x3, (bp.x1, bp.x4))
    w3 = _left_tail(z, bp)
    return ModelPeriods(1j * w1, w2, w3)


def closed_form_invariants(z: float) -> Invariants:
    g2 = (4 / 3) * (1 - 16 * z**2 + 16 * z**4)
    g3 = -(8 / 27) * (1 - 8 * z**2) * (1 - 16 * z**2 - 8 * z**4)
    return Invariants(g2, g3)


# -- the parametrisation ------------------------------------------------------


def _quotient_derivs(f, g):
    """(f/g, (f/g)', (f/g)'') from value/first/second derivative triples."""
    f0, f1, f2 = f
    g0, g1, g2 = g
    q0 = f0 / g0
    q1 = (f1 * g0 - f0 * g1) / g0**2
    q2 = (f2 * g0 - f0 * g2) / g0**2 - 2 * g1 * q1 / g0
    return q0, q1, q2


@dataclass(frozen=True)
class UniformizationContext:
    """Everything needed to evaluate x(w), y(w) at one z."""

    z: float
    periods: ModelPeriods
    branch: BranchPoints

    @cached_property
    def lattice(self) -> RectLattice:
        return RectLattice(self.periods.omega1, self.periods.omega2)

    @cached_property
    def lattice13(self) -> RectLattice:
        return RectLattice(self.periods.omega1, 3 * self.periods.omega2)

    @property
    def inv(self) -> Invariants:
        return self.lattice.invariants

    @property
    def kernel(self) -> KernelCoefficients:
        return KernelCoefficients(self.z)

    @property
    def x4(self) -> float:
        return self.branch.x4

    @cached_property
    def d1(self) -> float:
        return self.kernel.d_prime(self.x4)

    @cached_property
    def d2(self) -> float:
        return self.kernel.d_second(self.x4)

    @property
    def omega1(self) -> complex:
        return self.periods.omega1

    @property
    def omega2(self) -> float:
        return self.periods.omega2

    @property
    def omega3(self) -> float:
        return self.periods.omega3

    # wp and its derivatives, with D = wp - d''(x4)/6 and X = x*D = x4*D + d'(x4)
    def _pieces(self, omega):
        P = wp(omega, self.lattice)
        P1 = wp_prime(omega, self.lattice)
        g2 = self.inv.g2.real
        P2 = 6 * P * P - g2 / 2
        P3 = 12 * P * P1
        D = (P - self.d2 / 6, P1, P2)
        X = (self.x4 * D[0] + self.d1, self.x4 * P1, self.x4 * P2)
        return P, (P1, P2, P3), D, X

    def x(self, omega):
        P = wp(omega, self.lattice)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.x4 + self.d1 / (P - self.d2 / 6)

    def x_prime(self, omega):
        P = wp(omega, self.lattice)
        P1 = wp_prime(omega, self.lattice)
        with np.errstate(divide="ignore", invalid="ignore"):
            return -self.d1 * P1 / (P - self.d2 / 6) ** 2

    def _y_all(self, omega, order: int):
        z, d1 = self.z, self.d1
        P, Pd, D, X = self._pieces(omega)
        M0 = -z * X[0] ** 2 + X[0] * D[0] - z * D[0] ** 2
        M1 = -2 * z * X[0] * X[1] + X[1] * D[0] + X[0] * D[1] - 2 * z * D[0] * D[1]
        M2 = (
            -2 * z * (X[1] ** 2 + X[0] * X[2])
            + X[2] * D[0]
            + 2 * X[1] * D[1]
            + X[0] * D[2]
            - 2 * z * (D[1] ** 2 + D[0] * D[2])
        )
        T = (d1 * Pd[0] / 2, d1 * Pd[1] / 2, d1 * Pd[2] / 2)
        N1 = (M0 + T[0], M1 + T[1], M2 + T[2])
        N2 = (M0 - T[0], M1 - T[1], M2 - T[2])
        # y = N1 / (2 z X^2) = 2 z D^2 / N2; N1 N2 = 4 z^2 X^2 D^2 on the curve.
        # The larger of |N1|, |N2| avoids cancellation: near zeros of y (poles
        # of x, D -> 0) the second form stays regular, near poles the first.
        two_zx2 = (2 * z * X[0] ** 2, 4 * z * X[0] * X[1], 4 * z * (X[1] ** 2 + X[0] * X[2]))
        two_zd2 = (2 * z * D[0] ** 2, 4 * z * D[0] * D[1], 4 * z * (D[1] ** 2 + D[0] * D[2]))
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            a = _quotient_derivs(N1, two_zx2)
            b = _quotient_derivs(two_zd2, N2)
            use_a = np.abs(N1[0]) >= np.abs(N2[0])
            out = [np.where(use_a, a[k], b[k]) for k in range(order + 1)]
        # lattice points: x = x4 is a branch point, y the double root -b/(2a)
        at_lattice = ~np.isfinite(P)
        if np.any(at_lattice):
            kc = self.kernel
            y0 = -kc.b(self.x4) / (2 * kc.a(self.x4))
            out[0] = np.where(at_lattice, y0, out[0])
        return [complex(o) if np.ndim(o) == 0 else o for o in out]

    def y(self, omega):
        return self._y_all(omega, 0)[0]

    def y_prime(self, omega):
        return self._y_all(omega, 1)[1]

    def y_second(self, omega):
        return self._y_all(omega, 2)[2]

    def xi(self, omega):
        return -omega + self.omega1 + self.omega2

    def eta(self, omega):
        return -omega + self.omega1 + self.omega2 + self.omega3


@lru_cache(maxsize=64)
def make_context(z: float) -> UniformizationContext:
    _check_z(z)
    return UniformizationContext(z, compute_periods(z), branch_points(z))


def x_of_omega(omega, ctx: UniformizationContext):
    return ctx.x(omega)


def y_of_omega(omega, ctx: UniformizationContext):
    return ctx.y(omega)


# -- checks on the parametrisation ---------------------------------------------


def _local_order(f, p, scale, directions=(1, 1j, -1, -1j)):
    """Order of f at p (positive: zero, negative: pole) from log-slopes."""
    eps = scale * np.array([1e-2, 1e-3, 1e-4])
    orders = []
    for d in directions:
        vals = np.abs(np.array([f(p + e * d) for e in eps]))
        slope = np.polyfit(np.log(eps), np.log(vals), 1)[0]
        orders.append(slope)
    return float(np.mean(orders)), float(np.ptp(orders))


def check_poles_zeros(ctx: UniformizationContext) -> dict:
    """Orders of x and y at the points 1/8, 3/8, 5/8, 7/8 of omega2."""
    w2 = ctx.omega2
    expect = {
        ("x", 1): -1,
        ("x", 7): -1,
        ("x", 3): 1,
        ("x", 5): 1,
        ("y", 3): -2,
        ("y", 7): 2,
    }
    rows = []
    worst = 0.0
    for (name, k), order in expect.items():
        f = ctx.x if name == "x" else ctx.y
        got, spread = _local_order(f, k * w2 / 8, w2)
        worst = max(worst, abs(got - order))
        rows.append({"function": name, "point": f"{k}*w2/8", "expected": order, "measured": got})
    pole_cond = abs(wp(w2 / 8, ctx.lattice) - ctx.d2 / 6)
    return {"rows": rows, "max_order_error": worst, "wp_w2_8_residual": float(pole_cond)}


def check_group_lift(ctx: UniformizationContext, samples: int = 50, seed: int = 0) -> dict:
    """x is xi-invariant, y is eta-invariant, and eta.xi is the shift by omega3."""
    rng = np.random.default_rng(seed)
    w = rng.uniform(0, 1, samples) * ctx.omega2 + rng.uniform(0, 1, samples) * ctx.omega1
    x_res = np.abs(ctx.x(ctx.xi(w)) - ctx.x(w)) / np.maximum(1, np.abs(ctx.x(w)))
    y_res = np.abs(ctx.y(ctx.eta(w)) - ctx.y(w)) / np.maximum(1, np.abs(ctx.y(w)))
    # xi then eta, applied to the point, moves w to w + omega3
    comp = np.abs(ctx.eta(ctx.xi(w)) - (w + ctx.omega3))
    shifted = ctx.x(w + ctx.omega3)
    composed = ctx.x(ctx.eta(ctx.xi(w)))
    shift_res = np.abs(shifted - composed) / np.maximum(1, np.abs(shifted))
    return {
        "x_xi": float(x_res.max()),
        "y_eta": float(y_res.max()),
        "eta_xi_shift": float(max(comp.max(), shift_res.max())),
    }


def wp_special_values(ctx: UniformizationContext) -> dict:
    z, w2, lat = ctx.z, ctx.omega2, ctx.lattice
    a = (1 + 4 * z * z) / 3
    b = (1 - 8 * z * z) / 3
    return {
        "wp(w2/4)": abs(wp(w2 / 4, lat) - a),
        "wp(3w2/4)": abs(wp(3 * w2 / 4, lat) - a),
        "wp(2w2/4)": abs(wp(w2 / 2, lat) - b),
    }


# -- R and the T values ------------------------------------------------------------


def compute_R(z: float) -> float:
    """Unique positive root of X^4 - 2 g2 X^2 + 8 g3 X - g2^2/3."""
    _check_z(z)
    inv = closed_form_invariants(z)
    g2, g3 = inv.g2, inv.g3
    coeffs = [1.0, 0.0, -2 * g2, 8 * g3, -(g2**2) / 3]
    roots = np.roots(coeffs)
    positive = [r.real for r in roots if abs(r.imag) < 1e-9 and r.real > 0]
    if len(positive) != 1:
        raise ArithmeticError(f"expected one positive root, found {positive}")
    upper = 1 + max(abs(c) for c in coeffs[1:])
    poly = np.poly1d(coeffs)
    try:
        return brentq(poly, 0.0, upper, xtol=1e-16, rtol=1e-15)
    except ValueError as exc:
        raise ArithmeticError("could not bracket the positive root") from exc


@dataclass(frozen=True)
class SublatticeData:
    R: float
    g2_13: float
    g3_13: float
    T: tuple[float, ...] = ()


def sublattice_invariants(z: float) -> SublatticeData:
    """R, the invariants of wp_{1,3}, and T4 = wp_{1,3}(omega2) = R/6."""
    R = compute_R(z)
    inv = closed_form_invariants(z)
    g2, g3 = inv.g2, inv.g3
    g2_13 = -g2 / 9 + 10 * R * R / 27
    g3_13 = -35 * R**3 / 729 + 7 * g2 * R / 243 - g3 / 27
    return SublatticeData(R, g2_13, g3_13, (math.nan, math.nan, math.nan, R / 6, math.nan, math.nan))


def T_cubic_coefficients(z: float, R: float | None = None) -> list[float]:
    """Cubic with roots T1, T3, T5 (wp at omega2/4 equals (1 + 4 z^2)/3)."""
    if R is None:
        R = compute_R(z)
    inv = closed_form_invariants(z)
    g2, g3 = inv.g2, inv.g3
    e = 1 + 4 * z * z
    return [
        1.0,
        -(R / 3 + e / 3),
        R * e / 9 + R * R / 108 + g2 / 18,
        23 * R**3 / 2916 - R * R * e / 108 + g3 / 27 - 19 * R * g2 / 972,
    ]


_T_DIGITS = 50


def _newton_decimal(coeffs, x0, steps: int = 60):
    """Polish a simple root of a polynomial with Decimal coefficients."""
    x = x0
    for _ in range(steps):
        p = dp = Decimal(0)
        for c in coeffs:
            dp = dp * x + p
            p = p * x + c
        if dp == 0:
            break
        step = p / dp
        x -= step
        if abs(step) <= abs(x) * Decimal(10) ** (-_T_DIGITS + 5):
            break
    return x



def compute_T(z: float) -> tuple[float, float, float, float, float, float]:
    """T_l = wp_{1,3}(l * omega2 / 4) for l = 1..6 from the algebraic formulas.

    T1 > T3 > T5 are the real roots of the cubic, assigned by size.  For small
    z the roots T3 and T5 differ by about 4 z^6, so the cubic is solved in
    50-digit decimal arithmetic: T1 is isolated and polished by Newton, then
    T3, T5 come from the deflated quadratic.  A RootAmbiguityWarning is issued
    when two roots are closer than 1e-6.
    """
    _check_z(z)
    with localcontext() as dctx:
        dctx.prec = _T_DIGITS
        Z = Decimal(z)
        g2 = 4 * (1 - 16 * Z**2 + 16 * Z**4) / 3
        g3 = -8 * (1 - 8 * Z**2) * (1 - 16 * Z**2 - 8 * Z**4) / 27
        R = _newton_decimal([Decimal(1), Decimal(0), -2 * g2, 8 * g3, -(g2**2) / 3], Decimal(compute_R(z)))
        e = 1 + 4 * Z * Z
        a = -(R / 3 + e / 3)
        b = R * e / 9 + R * R / 108 + g2 / 18
        c = 23 * R**3 / 2916 - R * R * e / 108 + g3 / 27 - 19 * R * g2 / 972
        seed = max(np.roots([1.0, float(a), float(b), float(c)]).real)
        t1 = _newton_decimal([Decimal(1), a, b, c], Decimal(seed))
        s35 = -a - t1
        p35 = -c / t1
        disc = s35 * s35 - 4 * p35
        if disc < 0:
            raise ArithmeticError(f"cubic has non-real roots at z={z}")
        root = disc.sqrt()
        t3, t5 = (s35 + root) / 2, (s35 - root) / 2
        s = 1 - 8 * Z * Z
        d6 = 3 * R * R - 4 * R * s + 4 * s * s - 6 * g2
        t6 = (R + s - d6.sqrt()) / 9
        t2 = (R + s) / 6 - t6 / 2
        T = (t1, t2, t3, R / 6, t5, t6)
        if t1 - t3 < Decimal("1e-6") or t3 - t5 < Decimal("1e-6"):
            warnings.warn(f"T roots closer than 1e-6 at z={z}", RootAmbiguityWarning, stacklevel=2)
        return tuple(float(t) for t in T)


def T_direct(ctx: UniformizationContext) -> tuple[float, ...]:
    w2 = ctx.omega2
    return tuple(wp(ell * w2 / 4, ctx.lattice13).real for ell in range(1, 7))


# -- values along the covering z = phi(x) -----------------------------------------


def phi(x: float) -> float:
    if not 0 < x < 0.5:
        raise ValueError(f"x must lie in (0, 1/2), got {x!r}")
    return math.sqrt(x * (x + 1) ** 3 / (4 * x + 1) ** 3)


def R_at_phi(x: float) -> float:
    return 2 * (2 * x * x - 2 * x - 1) ** 2 / (4 * x + 1) ** 3


def T_at_phi(x: float) -> tuple[float, float, float, float, float, float]:
    u = 4 * x + 1
    M = (4 * x**4 + 28 * x**3 + 30 * x**2 + 10 * x + 1) / (3 * u**3)
    N = 2 * x * (x + 1) * (2 * x + 1) / u**2.5
    return (
        M + N,
        M - 2 * x * (x + 1) * (2 * x + 1) / u**3,
        M - 2 * x * (x + 1) / u**2,
        M - 2 * x * (2 * x + 1) * (3 * x + 1) / u**3,
        M - N,
        ((2 * x + 1) / u) ** 2 - 2 * M,
    )


def kernel_residual(ctx: UniformizationContext, omega) -> np.ndarray:
    """|K(x(w), y(w))| scaled by the size of its terms."""
    x, y = ctx.x(omega), ctx.y(omega)
    z = ctx.z
    scale = np.maximum.reduce(
        [np.abs(z * x * x * y * y), np.abs(z * x * x * y), np.abs(z * y), np.abs(x * y), np.full(np.shape(x), z)]
    )
    return np.abs(kernel_eval(x, y, z)) / np.maximum(scale, 1.0)
