"""Weierstrass elliptic functions on a lattice given by two FULL periods.

The lattice is ``omega_bar * Z + omega_hat * Z``.  Note that many references
(DLMF, Abramowitz-Stegun) parametrise by half-periods; here both arguments are
full periods, so ``wp(omega_hat, lat)`` is a pole.

Evaluation goes through Jacobi's theta function theta_1 after

* reducing the basis so that tau lies in the fundamental domain
  (|q| <= exp(-pi*sqrt(3)/2) ~ 0.066, so a handful of terms suffice), and
* reducing the argument to the centred period cell, adding the
  quasi-period increments for zeta.

With ``u`` reduced, ``v = pi*u/(2*w1)`` and ``c = pi/(2*w1)``::

    zeta(u) = eta1*u/w1 + c * th1'(v)/th1(v)
    wp(u)   = -eta1/w1 + c**2 * ((th1'/th1)**2 - th1''/th1)
    wp'(u)  = -c**3 * (L3 - 3*L1*L2 + 2*L1**3),   Lk = th1^(k)/th1

Accuracy is close to machine precision away from lattice points; within a
distance ``d`` of a pole the absolute error grows like ``eps/d**2`` for wp
(relative error stays ~1e-14).  Exactly at a lattice point the functions
return complex infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "RectLattice",
    "Invariants",
    "wp",
    "wp_prime",
    "wp_second",
    "zeta_fn",
    "invariants_from_lattice",
    "sublattice_wp",
    "sample_points",
    "check_laurent_expansion",
    "check_addition_theorems",
    "check_quasi_periodicity",
    "check_frobenius_stickelberger",
    "check_bisection",
    "check_sublattice",
    "check_zeta_combination",
]

_NTERMS = 10
_K = np.arange(_NTERMS)
_ODD = 2 * _K + 1
_SIGN = (-1.0) ** _K
_INF = complex(math.inf, math.inf)


@dataclass(frozen=True)
class Invariants:
    g2: complex
    g3: complex


@dataclass(frozen=True)
class RectLattice:
    """Lattice ``omega_bar*Z + omega_hat*Z`` of FULL periods.

    In the walk models ``omega_bar`` is purely imaginary and ``omega_hat`` real
    positive, but any pair with non-real ratio is accepted.  Derived constants
    (reduced basis, nome, quasi-periods) are computed lazily and cached; the
    object is otherwise immutable.
    """

    omega_bar: complex
    omega_hat: complex

    def __post_init__(self):
        ob, oh = complex(self.omega_bar), complex(self.omega_hat)
        object.__setattr__(self, "omega_bar", ob)
        object.__setattr__(self, "omega_hat", oh)
        if ob == 0 or oh == 0 or abs((oh / ob).imag) < 1e-14:
            raise ValueError("lattice periods must be linearly independent over R")

    # -- reduced basis -----------------------------------------------------
    @cached_property
    def _basis(self):
        w1, w3 = self.omega_bar / 2, self.omega_hat / 2
        if (w3 / w1).imag < 0:
            w3 = -w3
        for _ in range(200):
            tau = w3 / w1
            n = round(tau.real)
            if n:
                w3 -= n * w1
                tau = w3 / w1
            if abs(tau) < 1 - 1e-15:
                w1, w3 = w3, -w1
                continue
            break
        tau = w3 / w1
        c = math.pi / (2 * w1)
        qexp = np.exp(1j * math.pi * tau * (_K + 0.5) ** 2)
        th1p0 = 2 * np.sum(_SIGN * _ODD * qexp)
        th1ppp0 = -2 * np.sum(_SIGN * _ODD**3 * qexp)
        eta1 = -(math.pi**2 / (12 * w1)) * th1ppp0 / th1p0
        # Legendre relation with Im(w3/w1) > 0
        eta3 = (eta1 * w3 - 1j * math.pi / 2) / w1
        return w1, w3, tau, c, qexp, complex(eta1), complex(eta3)

    @property
    def min_period(self) -> float:
        w1, w3 = self._basis[:2]
        return 2 * min(abs(w1), abs(w3), abs(w3 - w1), abs(w3 + w1))

    @property
    def area(self) -> float:
        return abs((self.omega_bar.conjugate() * self.omega_hat).imag)

    def scaled(self, t: complex) -> "RectLattice":
        return RectLattice(self.omega_bar * t, self.omega_hat * t)

    # -- quasi-periods ------------------------------------------------------
    @cached_property
    def zeta_half_bar(self) -> complex:
        """zeta(omega_bar/2); zeta(u + omega_bar) = zeta(u) + 2*zeta_half_bar."""
        return zeta_fn(self.omega_bar / 2, self)

    @cached_property
    def zeta_half_hat(self) -> complex:
        return zeta_fn(self.omega_hat / 2, self)

    @cached_property
    def half_period_values(self) -> tuple[complex, complex, complex]:
        """wp at omega_bar/2, omega_hat/2 and (omega_bar+omega_hat)/2."""
        ob, oh = self.omega_bar, self.omega_hat
        return (wp(ob / 2, self), wp(oh / 2, self), wp((ob + oh) / 2, self))

    @cached_property
    def invariants(self) -> Invariants:
        return invariants_from_lattice(self)


def _reduce(u, lat: RectLattice):
    """Split u = u_red + 2n*w1 + 2m*w3 with u_red in the centred cell."""
    w1, w3, tau = lat._basis[:3]
    s = u / (2 * w1)
    t = s.imag / tau.imag
    m = np.round(t)
    n = np.round(s.real - t * tau.real)
    return u - 2 * n * w1 - 2 * m * w3, n, m


def _theta_ratios(v, qexp):
    """theta_1 and its first three v-derivatives divided by theta_1."""
    v = v[..., None]
    arg = _ODD * v
    s, co = np.sin(arg), np.cos(arg)
    a = _SIGN * qexp
    t0 = np.sum(a * s, axis=-1)
    t1 = np.sum(a * _ODD * co, axis=-1)
    t2 = -np.sum(a * _ODD**2 * s, axis=-1)
    t3 = -np.sum(a * _ODD**3 * co, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return t0, t1 / t0, t2 / t0, t3 / t0


def _prepare(u, lat):
    u = np.asarray(u, dtype=complex)
    ured, n, m = _reduce(u, lat)
    w1, _, _, c, qexp, _, _ = lat._basis
    pole = np.abs(ured) <= 1e-15 * lat.min_period
    t0, l1, l2, l3 = _theta_ratios(c * ured, qexp)
    return u, ured, n, m, pole, l1, l2, l3


def _finish(out, pole, scalar):
    out = np.where(pole, _INF, out)
    return complex(out) if scalar else out


def zeta_fn(u, lat: RectLattice):
    """Weierstrass zeta (odd, zeta' = -wp). Accepts scalars or arrays."""
    scalar = np.ndim(u) == 0
    u, ured, n, m, pole, l1, _, _ = _prepare(u, lat)
    w1, _, _, c, _, eta1, eta3 = lat._basis
    with np.errstate(invalid="ignore"):
        out = eta1 * ured / w1 + c * l1 + 2 * n * eta1 + 2 * m * eta3
    return _finish(out, pole, scalar)


def wp(u, lat: RectLattice):
    """Weierstrass wp on the lattice of full periods (omega_bar, omega_hat)."""
    scalar = np.ndim(u) == 0
    _, _, _, _, pole, l1, l2, _ = _prepare(u, lat)
    w1, _, _, c, _, eta1, _ = lat._basis
    with np.errstate(invalid="ignore"):
        out = -eta1 / w1 + c**2 * (l1 * l1 - l2)
    return _finish(out, pole, scalar)


def wp_prime(u, lat: RectLattice):
    scalar = np.ndim(u) == 0
    _, _, _, _, pole, l1, l2, l3 = _prepare(u, lat)
    c = lat._basis[3]
    with np.errstate(invalid="ignore"):
        out = -(c**3) * (l3 - 3 * l1 * l2 + 2 * l1**3)
    return _finish(out, pole, scalar)


def wp_second(u, lat: RectLattice):
    """wp'' from the differential equation: 6*wp**2 - g2/2."""
    p = wp(u, lat)
    return 6 * p * p - lat.invariants.g2 / 2


def invariants_from_lattice(lat: RectLattice) -> Invariants:
    """g2, g3 from the half-period values e1, e2, e3.

    g2 = 2*(e1^2 + e2^2 + e3^2) and g3 = 4*e1*e2*e3 (with e1+e2+e3 = 0).
    """
    e = lat.half_period_values
    g2 = 2 * sum(x * x for x in e)
    g3 = 4 * e[0] * e[1] * e[2]
    return Invariants(complex(g2), complex(g3))


def sublattice_wp(u, lat: RectLattice, p: int):
    """wp for the periods (omega_bar, omega_hat/p), built from wp on ``lat``.

    wp_fine(u) = wp(u) + sum_{l=1}^{p-1} [wp(u + l*omega_hat/p) - wp(l*omega_hat/p)]
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    total = wp(u, lat)
    for ell in range(1, p):
        s = ell * lat.omega_hat / p
        total = total + wp(np.asarray(u) + s, lat) - wp(s, lat)
    return total


# -- identity checks ---------------------------------------------------------------


def sample_points(lat: RectLattice, n: int, rng, margin: float = 0.05) -> np.ndarray:
    """Uniform points of the period cell at distance >= margin * min_period
    from the lattice."""
    delta = margin * lat.min_period
    out: list[complex] = []
    while len(out) < n:
        w = rng.uniform(0, 1, 2 * n) * lat.omega_bar + rng.uniform(0, 1, 2 * n) * lat.omega_hat
        r, _, _ = _reduce(w, lat)
        out.extend(w[np.abs(r) >= delta].tolist())
    return np.array(out[:n])


def _far(u, lat, delta):
    return np.abs(_reduce(np.asarray(u, dtype=complex), lat)[0]) >= delta


def _scaled_residual(diff, *terms):
    shape = np.shape(diff)
    scale = np.maximum.reduce([np.broadcast_to(np.abs(t), shape) for t in terms] + [np.ones(shape)])
    return float(np.max(np.abs(diff) / scale))


def check_laurent_expansion(lat: RectLattice, radius: float = 0.2) -> dict:
    """wp(u) - 1/u^2 - g2 u^2/20 - g3 u^4/28 = O(u^6).

    The decay exponent is fitted on |u| = radius * min_period * 2^-k, k = 0..3,
    along four directions; it should be close to 6.
    """
    inv = lat.invariants
    r = radius * lat.min_period * 2.0 ** -np.arange(4)
    slopes, worst = [], 0.0
    for d in np.exp(1j * np.array([0.3, 1.1, 2.0, 2.9])):
        u = r * d
        res = np.abs(wp(u, lat) - 1 / u**2 - inv.g2 * u**2 / 20 - inv.g3 * u**4 / 28)
        slopes.append(np.polyfit(np.log(r), np.log(res), 1)[0])
        # leading term of the remainder is g2^2 u^6 / 1200
        worst = max(worst, float(np.max(res / (np.abs(inv.g2) ** 2 * r**6 / 1200 + 1e-300))))
    return {"slope": float(np.mean(slopes)), "slope_spread": float(np.ptp(slopes)), "ratio_to_leading": worst}


def check_addition_theorems(lat: RectLattice, samples: int = 100, seed: int = 0) -> float:
    """Both addition formulas at random non-degenerate pairs (w, v)."""
    rng = np.random.default_rng(seed)
    delta = 0.05 * lat.min_period
    w = sample_points(lat, 4 * samples, rng)
    v = sample_points(lat, 4 * samples, rng)
    pw, pv = wp(w, lat), wp(v, lat)
    # on elongated lattices wp is nearly constant far from the poles; pairs
    # with wp(w) ~ wp(v) make the quotient ill-conditioned
    ok = _far(w + v, lat, delta) & _far(w - v, lat, delta)
    ok &= np.abs(pw - pv) >= 1e-3 * np.maximum(1.0, np.abs(pw))
    w, v, pw, pv = w[ok][:samples], v[ok][:samples], pw[ok][:samples], pv[ok][:samples]
    q = (wp_prime(w, lat) - wp_prime(v, lat)) / (pw - pv)
    zeta_res = zeta_fn(w + v, lat) - (zeta_fn(w, lat) + zeta_fn(v, lat) + q / 2)
    wp_res = wp(w + v, lat) - (-pw - pv + q * q / 4)
    return max(
        _scaled_residual(zeta_res, zeta_fn(w + v, lat), q),
        _scaled_residual(wp_res, pw, pv, q * q),
    )


def check_quasi_periodicity(lat: RectLattice, samples: int = 100, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    w = sample_points(lat, samples, rng)
    z0 = zeta_fn(w, lat)
    r1 = zeta_fn(w + lat.omega_bar, lat) - z0 - 2 * lat.zeta_half_bar
    r2 = zeta_fn(w + lat.omega_hat, lat) - z0 - 2 * lat.zeta_half_hat
    return max(_scaled_residual(r1, z0, lat.zeta_half_bar), _scaled_residual(r2, z0, lat.zeta_half_hat))


def check_frobenius_stickelberger(lat: RectLattice, samples: int = 100, seed: int = 0) -> float:
    """(zeta(a) + zeta(b) + zeta(c))^2 = wp(a) + wp(b) + wp(c) when a + b + c = 0."""
    rng = np.random.default_rng(seed)
    a = sample_points(lat, 4 * samples, rng)
    b = sample_points(lat, 4 * samples, rng)
    keep = _far(a + b, lat, 0.05 * lat.min_period)
    a, b = a[keep][:samples], b[keep][:samples]
    c = -a - b
    s = zeta_fn(a, lat) + zeta_fn(b, lat) + zeta_fn(c, lat)
    p = wp(a, lat) + wp(b, lat) + wp(c, lat)
    return _scaled_residual(s * s - p, s * s, wp(a, lat), wp(b, lat), wp(c, lat))


def check_bisection(lat: RectLattice, samples: int = 50, seed: int = 0) -> float:
    """wp(u/2) = wp(u) + sum of three square roots, on the real segment.

    Needs a real period omega_hat.  For 0 < u <= omega_hat/2, wp(u) is at
    least every half-period value, so all radicands are nonnegative, and the
    nonnegative roots give wp(u/2).  Beyond omega_hat/2 the same roots return
    wp((omega_hat - u)/2) instead, so the segment stops there.
    """
    if abs(lat.omega_hat.imag) > 1e-14 * abs(lat.omega_hat) or lat.omega_hat.real <= 0:
        raise ValueError("bisection check needs a positive real period omega_hat")
    rng = np.random.default_rng(seed)
    e_bar, e_hat, e_mid = (v.real for v in lat.half_period_values)
    e_max = max(e_bar, e_hat, e_mid)
    # the square roots turn a rounding error eps in wp(u) - e_max into
    # sqrt(eps); on elongated lattices wp is flat to 1e-16 over most of the
    # segment, so keep only points where wp(u) - e_max is not negligible
    u = rng.uniform(0.05, 0.5, 20 * samples) * lat.omega_hat.real
    p = wp(u, lat).real
    keep = p - e_max >= 1e-4 * np.maximum(1.0, np.abs(p))
    u, p = u[keep][:samples], p[keep][:samples]
    r1, r2, r3 = (p - e_bar) * (p - e_hat), (p - e_bar) * (p - e_mid), (p - e_hat) * (p - e_mid)
    if min(r1.min(), r2.min(), r3.min()) < 0:
        raise ArithmeticError("negative radicand on the real segment")
    rhs = p + np.sqrt(r1) + np.sqrt(r2) + np.sqrt(r3)
    lhs = wp(u / 2, lat).real
    return _scaled_residual(lhs - rhs, lhs)


def check_sublattice(lat: RectLattice, p: int, samples: int = 50, seed: int = 0) -> float:
    """sublattice_wp against direct evaluation on (omega_bar, omega_hat/p)."""
    rng = np.random.default_rng(seed)
    fine = RectLattice(lat.omega_bar, lat.omega_hat / p)
    u = sample_points(fine, samples, rng)
    direct = wp(u, fine)
    return _scaled_residual(sublattice_wp(u, lat, p) - direct, direct)


def check_zeta_combination(lat: RectLattice, combo, samples: int = 50, seed: int = 0) -> dict:
    """Period jumps of c + sum r_l zeta(u - s_l).

    The jump across omega_bar is (sum r_l) * 2 zeta(omega_bar/2), likewise for
    omega_hat; the combination is elliptic exactly when sum r_l = 0.
    ``combo`` needs ``terms`` (coefficient, shift) pairs and ``__call__``.
    """
    rng = np.random.default_rng(seed)
    shifts = [s for _, s in combo.terms]
    u = sample_points(lat, 4 * samples, rng)
    for s in shifts:
        u = u[_far(u - s, lat, 0.05 * lat.min_period)]
    u = u[:samples]
    total = sum(c for c, _ in combo.terms)
    f0 = combo(u)
    jump_bar = combo(u + lat.omega_bar) - f0
    jump_hat = combo(u + lat.omega_hat) - f0
    exp_bar = total * 2 * lat.zeta_half_bar
    exp_hat = total * 2 * lat.zeta_half_hat
    return {
        "coefficient_sum": complex(total),
        "max_jump": float(max(np.max(np.abs(jump_bar)), np.max(np.abs(jump_hat)))),
        "jump_bound": float(abs(total) * max(abs(2 * lat.zeta_half_bar), abs(2 * lat.zeta_half_hat))),
        "jump_residual": max(_scaled_residual(jump_bar - exp_bar, f0), _scaled_residual(jump_hat - exp_hat, f0)),
        "elliptic": bool(total == 0),
    }
