"""Zeta-function expressions for the generating functions Q(0,0), Q(0,y).

On the (omega1, 3*omega2) lattice the continued function

    r_y(w) = z (y(w) + 1) Q(0, y(w); z)

is an elliptic function with eight simple poles, so it is a constant plus an
eight-term combination of zeta_{1,3}.  Q(0,0) is then a difference of two
values of r_y, which reduces to six zeta values.

All residual checks are relative: |a - b| / max(1, |a|).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .uniformization import UniformizationContext, make_context
from .walk_counting import GESSEL, Q_tail_bound, count_table, eval_Q_truncated
from .weierstrass import RectLattice, wp, wp_prime, zeta_fn

__all__ = [
    "ZetaCombination",
    "RYContext",
    "RY_SHIFTS",
    "RY_WEIGHTS",
    "Q00_WEIGHTS",
    "make_ry_context",
    "f_y",
    "f_y_log",
    "f_x",
    "f_x_log",
    "q00_zeta",
    "q00_from_ry",
    "ry_zeta",
    "rx",
    "numeric_residue",
    "check_orbit_sum_vanishes",
    "verify_pole_residues",
    "check_continuation_identities",
    "extract_gj",
    "g1_printed_formula",
    "check_six_branches",
    "series_in_delta_y",
    "delta_y_samples",
]

# r_y poles in units of omega2 and residues in units of 1/(2z)
RY_SHIFTS = tuple(Fraction(k, 8) for k in (1, 3, 11, 13, 15, 17, 21, 23))
RY_WEIGHTS = (1, -1, 1, -1, -1, 2, -2, 1)
# Q(0,0) = sum_k w_k zeta_{1,3}(k*omega2/4) / (2 z^2), k = 1..6
Q00_WEIGHTS = (1, -3, 2, 3, -5, 2)


@dataclass(frozen=True)
class ZetaCombination:
    """constant + sum coeff * zeta(w - shift) on ``lattice``."""

    lattice: RectLattice
    constant: complex
    terms: tuple[tuple[complex, complex], ...]

    @property
    def coefficient_sum(self) -> complex:
        return sum(c for c, _ in self.terms)

    def with_constant(self, constant) -> "ZetaCombination":
        return replace(self, constant=constant)

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=complex)
        total = self.constant + sum(c * zeta_fn(omega - s, self.lattice) for c, s in self.terms)
        return complex(total) if np.ndim(total) == 0 else total

    def derivative(self, omega):
        omega = np.asarray(omega, dtype=complex)
        total = -sum(c * wp(omega - s, self.lattice) for c, s in self.terms)
        return complex(total) if np.ndim(total) == 0 else total

    def second_derivative(self, omega):
        omega = np.asarray(omega, dtype=complex)
        total = -sum(c * wp_prime(omega - s, self.lattice) for c, s in self.terms)
        return complex(total) if np.ndim(total) == 0 else total


@dataclass(frozen=True)
class RYContext:
    ctx: UniformizationContext
    combo: ZetaCombination
    q00: float

    @property
    def z(self) -> float:
        return self.ctx.z

    @property
    def poles(self) -> tuple[complex, ...]:
        return tuple(s for _, s in self.combo.terms)


def _rel(a, b):
    return np.abs(a - b) / np.maximum(1.0, np.abs(a))


# -- f_x, f_y -------------------------------------------------------------------


def f_y(omega, ctx: UniformizationContext):
    """x(w) [y(xi w) - y(w)], the defining form."""
    with np.errstate(invalid="ignore", over="ignore"):
        return ctx.x(omega) * (ctx.y(ctx.xi(omega)) - ctx.y(omega))


def f_y_log(omega, ctx: UniformizationContext):
    """x'(w) / (2 z x(w)), the logarithmic-derivative form."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return ctx.x_prime(omega) / (2 * ctx.z * ctx.x(omega))


def f_x(omega, ctx: UniformizationContext):
    """y(w) [x(eta w) - x(w)], the defining form."""
    with np.errstate(invalid="ignore", over="ignore"):
        return ctx.y(omega) * (ctx.x(ctx.eta(omega)) - ctx.x(omega))


def f_x_log(omega, ctx: UniformizationContext):
    """-y'(w) / (2 z (y(w) + 1)).

    x(eta w) and x(w) are the two roots of K(., y) = 0, so their difference
    is a square root of the discriminant in y, and y'^2 equals four times
    that discriminant.
    """
    y, yp = ctx._y_all(omega, 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return -yp / (2 * ctx.z * (y + 1))


# -- Q(0,0) and r_y ---------------------------------------------------------------


def _q00_from_ctx(ctx: UniformizationContext) -> float:
    w2, lat = ctx.omega2, ctx.lattice13
    vals = [zeta_fn(k * w2 / 4, lat) for k in range(1, 7)]
    total = sum(w * v for w, v in zip(Q00_WEIGHTS, vals))
    return float(total.real) / (2 * ctx.z**2)


def q00_zeta(z: float) -> float:
    """Q(0,0; z) from six values of zeta on the (omega1, 3*omega2) lattice."""
    return _q00_from_ctx(make_context(z))


@lru_cache(maxsize=64)
def make_ry_context(z: float) -> RYContext:
    ctx = make_context(z)
    w2 = ctx.omega2
    terms = tuple((w / (2 * z), complex(float(s) * w2)) for w, s in zip(RY_WEIGHTS, RY_SHIFTS))
    bare = ZetaCombination(ctx.lattice13, 0j, terms)
    q00 = _q00_from_ctx(ctx)
    # r_y(7 w2 / 8) = K(0,0) Q(0,0) = z Q(0,0), since y(7 w2 / 8) = 0
    c = z * q00 - bare(7 * w2 / 8).real
    return RYContext(ctx, bare.with_constant(complex(c)), q00)


def ry_zeta(omega, rctx: RYContext):
    return rctx.combo(omega)


def rx(omega, rctx: RYContext):
    """r_x = x y - r_y + z Q(0,0), the continuation of K(x,0) Q(x,0)."""
    ctx = rctx.ctx
    with np.errstate(invalid="ignore", over="ignore"):
        return ctx.x(omega) * ctx.y(omega) - rctx.combo(omega) + rctx.z * rctx.q00


def q00_from_ry(rctx: RYContext, combo: ZetaCombination | None = None) -> float:
    """(r_y(7 w2/8) - r_y(5 w2/8)) / z; the constant cancels."""
    combo = combo or rctx.combo
    w2 = rctx.ctx.omega2
    return float((combo(7 * w2 / 8) - combo(5 * w2 / 8)).real) / rctx.z


# -- sampling -------------------------------------------------------------------


def _dist_to(points, omega, lat: RectLattice):
    """Distance from each omega to the nearest translate of any point."""
    omega = np.atleast_1d(np.asarray(omega, dtype=complex))
    a, b = lat.omega_bar, lat.omega_hat
    best = np.full(omega.shape, np.inf)
    for p in points:
        d = omega - p
        # rectangular lattices only: a imaginary, b real
        m = np.round((d / a).real)
        n = np.round((d - m * a).real / b.real)
        r = d - m * a - n * b
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                best = np.minimum(best, np.abs(r + di * a + dj * b))
    return best


def _sample_cell(lat: RectLattice, n: int, rng, avoid=(), margin=0.05):
    """Random points in the period cell at distance >= margin*min_period from avoid."""
    out = []
    delta = margin * lat.min_period
    while len(out) < n:
        w = rng.uniform(0, 1, 4 * n) * lat.omega_hat + rng.uniform(0, 1, 4 * n) * lat.omega_bar
        if avoid:
            w = w[_dist_to(avoid, w, lat) >= delta]
        out.extend(w.tolist())
    return np.array(out[:n])


def _fy_singular_points(ctx):
    w2 = ctx.omega2
    return [k * w2 / 8 for k in (1, 3, 5, 7)] + [0j, w2 / 2 + ctx.omega1 / 2]


# -- residues ----------------------------------------------------------------------


def numeric_residue(f, p, scale, directions=(1, 1j, -1, -1j)):
    """Residue of f at a simple pole p, as a Richardson-extrapolated limit of
    h f(p + h) along four directions.

    Returns (mean residue, spread across directions).
    """
    hs = scale * np.array([1e-3, 5e-4, 2.5e-4])
    ests = []
    for d in directions:
        g = [h * d * f(p + h * d) for h in hs]
        # g(h) = res + a h + b h^2 + ...; two Richardson steps with ratio 2
        r1 = [2 * g[1] - g[0], 2 * g[2] - g[1]]
        ests.append((4 * r1[1] - r1[0]) / 3)
    ests = np.array(ests)
    return complex(ests.mean()), float(np.ptp(np.abs(ests - ests.mean())) + np.abs(ests - ests.mean()).max())


# -- checks --------------------------------------------------------------------------


def check_orbit_sum_vanishes(ctx: UniformizationContext, samples: int = 50, seed: int = 0) -> float:
    """max |f_y(w) + f_y(w + w3) + f_y(w + 2 w3) + f_y(w + 3 w3)| at random w.

    Each term is scaled by max(1, |f_y(w)|).
    """
    rng = np.random.default_rng(seed)
    w3 = ctx.omega3
    sing = _fy_singular_points(ctx)
    avoid = [s - k * w3 for s in sing for k in range(4)]
    w = _sample_cell(ctx.lattice, samples, rng, avoid)
    total = sum(f_y(w + k * w3, ctx) for k in range(4))
    scale = np.maximum(1.0, np.max([np.abs(f_y(w + k * w3, ctx)) for k in range(4)], axis=0))
    return float(np.max(np.abs(total) / scale))


def verify_pole_residues(rctx: RYContext, grid: int = 40) -> dict:
    """Residues of r_y at the eight poles and a scan for other singularities."""
    ctx, z = rctx.ctx, rctx.z
    w2 = ctx.omega2
    rows = []
    worst = 0.0
    for (coef, p), s in zip(rctx.combo.terms, RY_SHIFTS):
        expected = coef.real
        res, spread = numeric_residue(rctx.combo, p, w2)
        rel = abs(res - expected) / abs(expected)
        worst = max(worst, rel, spread / abs(expected))
        rows.append(
            {"point": f"{s.numerator}/{s.denominator}*w2", "expected": expected, "residue": res.real, "rel_error": rel}
        )
    # removable points: r_y stays finite there
    removable = {f"{k}/8*w2": abs(rctx.combo(k * w2 / 8)) for k in (9, 19)}
    # scan the cell away from the listed poles
    lat = rctx.combo.lattice
    s, t = np.meshgrid(np.linspace(0, 1, 3 * grid, endpoint=False), np.linspace(0, 1, grid, endpoint=False))
    w = (s * lat.omega_hat + t * lat.omega_bar).ravel() + 1e-3 * w2
    far = _dist_to(rctx.poles, w, lat) >= 0.05 * lat.min_period
    scan_max = float(np.max(np.abs(rctx.combo(w[far]))))
    bound = sum(abs(c) for c, _ in rctx.combo.terms) / (0.05 * lat.min_period) * 10 + abs(rctx.combo.constant)
    return {
        "z": z,
        "rows": rows,
        "max_rel_error": worst,
        "removable": removable,
        "scan_max": scan_max,
        "scan_bound": bound,
        "scan_ok": bool(np.isfinite(scan_max) and scan_max < bound),
    }


def check_continuation_identities(rctx: RYContext, samples: int = 50, seed: int = 0) -> dict:
    """Maximum relative residuals of the continuation identities at random w.

    (i) r_y(w + w3) = r_y(w) + f_y(w); (ii) r_y(eta w) = r_y(w);
    (iii) r_y(w + w1) = r_y(w); (iv) r_x(w - w3) = r_x(w) + f_x(w);
    (v) r_y(w + 3 w2) = r_y(w); and ry_zeta minus its bare zeta sum is constant.
    """
    ctx = rctx.ctx
    w1, w2, w3 = ctx.omega1, ctx.omega2, ctx.omega3
    rng = np.random.default_rng(seed)
    poles = list(rctx.poles)
    sing = _fy_singular_points(ctx)
    avoid = poles + [p - w3 for p in poles] + [ctx.eta(p) for p in poles] + sing
    avoid += [s + w3 for s in sing] + [p + w3 for p in poles]
    lat = rctx.combo.lattice
    w = _sample_cell(lat, samples, rng, avoid)
    r = ry_zeta(w, rctx)
    out = {
        "i": float(np.max(_rel(ry_zeta(w + w3, rctx), r + f_y(w, ctx)))),
        "ii": float(np.max(_rel(ry_zeta(ctx.eta(w), rctx), r))),
        "iii": float(np.max(_rel(ry_zeta(w + w1, rctx), r))),
        "iv": float(np.max(_rel(rx(w - w3, rctx), rx(w, rctx) + f_x(w, ctx)))),
        "v": float(np.max(_rel(ry_zeta(w + 3 * w2, rctx), r))),
    }
    bare = rctx.combo.with_constant(0j)
    diff = r - bare(w)
    out["constant_spread"] = float(np.ptp(diff.real) + np.ptp(diff.imag))
    return out


def g1_printed_formula(rctx: RYContext) -> float:
    """r_y'(w0) / (z y'(w0)) - Q(0,0) at w0 = 7 w2 / 8.

    y has a double zero at w0, so numerator and denominator both vanish;
    this raises instead of returning a meaningless ratio.
    """
    ctx = rctx.ctx
    w0 = 7 * ctx.omega2 / 8
    yp = ctx.y_prime(w0)
    if abs(yp) < 1e-8 * max(1.0, abs(ctx.y_second(w0))):
        raise ZeroDivisionError(f"y'(7 w2/8) = {abs(yp):.2e} vanishes; use the second-derivative limit")
    return float((rctx.combo.derivative(w0) / (rctx.z * yp)).real) - rctx.q00


def extract_gj(rctx: RYContext, j: int) -> float:
    """Coefficient g_j(z) of y^j in Q(0, y; z), for j = 0 or 1.

    Near w0 = 7 w2 / 8, r_y = z Q(0,0) + z (g0 + g1) y + O(y^2) and y has a
    double zero, so g1 = r_y''(w0) / (z y''(w0)) - g0 with r_y'' = -sum r_l wp'_{1,3}.
    """
    if j == 0:
        return rctx.q00
    if j != 1:
        raise ValueError("only j in {0, 1} is supported")
    ctx = rctx.ctx
    w0 = 7 * ctx.omega2 / 8
    num = rctx.combo.second_derivative(w0)
    den = rctx.z * ctx.y_second(w0)
    return float((num / den).real) - rctx.q00


def delta_y_samples(ctx: UniformizationContext, n: int, seed: int = 0) -> np.ndarray:
    """Random points in the strip 5/8 < Re(w)/w2 < 9/8 where |y(w)| <= 1.

    The strip is symmetric about the eta-fixed line Re(w) = 7 w2 / 8, on which
    y is real; Q(0, y) converges as a power series there.
    """
    rng = np.random.default_rng(seed)
    w2, h = ctx.omega2, ctx.omega1.imag
    out = []
    while len(out) < n:
        w = rng.uniform(5 / 8 + 0.02, 9 / 8 - 0.02, 4 * n) * w2 + 1j * rng.uniform(-0.5, 0.5, 4 * n) * h
        y = ctx.y(w)
        out.extend(w[np.abs(y) <= 1.0].tolist())
    return np.array(out[:n])


def series_in_delta_y(rctx: RYContext, omega, tail_tol: float = 1e-10) -> dict:
    """Compare ry_zeta with z (y + 1) Q(0, y) summed from the counting table."""
    ctx, z = rctx.ctx, rctx.z
    omega = np.atleast_1d(np.asarray(omega, dtype=complex))
    y = ctx.y(omega)
    ymax = float(np.max(np.abs(y)))
    n_max = 10
    while Q_tail_bound(0, ymax, z, n_max) > tail_tol:
        n_max += 10
        if n_max > 400:
            raise ValueError(f"series does not converge fast enough at |y| = {ymax}")
    table = count_table(GESSEL, n_max)
    series = np.array([z * (yy + 1) * eval_Q_truncated(0, yy, z, n_max, table) for yy in y])
    r = ry_zeta(omega, rctx)
    return {"n_max": n_max, "max_abs_y": ymax, "residual": float(np.max(np.abs(r - series)))}


def _damped_newton(ctx, target, w, max_step, iters=100):
    """Newton for y(w) = target from an array of seeds, steps capped at max_step.

    Returns the converged points; diverging seeds are dropped.
    """
    w = np.array(w, dtype=complex)
    with np.errstate(all="ignore"):
        for _ in range(iters):
            y, yp = ctx._y_all(w, 1)
            step = (y - target) / yp
            step = np.where(np.isfinite(step), step, 0)
            big = np.abs(step) > max_step
            step[big] *= max_step / np.abs(step[big])
            w = w - step
            if np.all(np.abs(step) < 1e-15 * max_step):
                break
        ok = np.abs(ctx.y(w) - target) < 1e-10 * max(1, abs(target))
    return w[ok & np.isfinite(w)]


def check_six_branches(rctx: RYContext, y_target: complex | None = None, seed: int = 0, tol: float = 1e-6) -> dict:
    """Solve y(w) = y_target in the (w1, 3 w2) cell and cluster the values of
    r_y / (z (y + 1)) over the solutions and their w1-translates.

    y has degree 2 on the (w1, w2) lattice, hence six solutions per cell of
    the coarser lattice; Q(0, y) can therefore take at most six values.
    """
    ctx, z = rctx.ctx, rctx.z
    rng = np.random.default_rng(seed)
    if y_target is None:
        y_target = complex(rng.uniform(0.1, 0.9))
    lat = rctx.combo.lattice
    w1, w2 = ctx.omega1, ctx.omega2

    # seed Newton from the grid points where y is closest to the target
    s, t = np.meshgrid(np.linspace(0, 1, 96, endpoint=False), np.linspace(-0.5, 0.5, 16, endpoint=False))
    grid = (s * 3 * w2 + t * w1 + 1e-3 * w2).ravel()
    with np.errstate(all="ignore"):
        miss = np.abs(ctx.y(grid) - y_target) / (1 + np.abs(ctx.y(grid)))
    seeds = grid[np.argsort(np.nan_to_num(miss, nan=np.inf))[:48]]
    roots: list[complex] = []
    for r in _damped_newton(ctx, y_target, seeds, 0.02 * w2):
        if not roots or np.min(_dist_to([r], np.array(roots), lat)) > 1e-7 * w2:
            roots.append(complex(r))
    reps = np.array(roots + [r + w1 for r in roots])
    with np.errstate(all="ignore"):
        vals = ry_zeta(reps, rctx) / (z * (y_target + 1))
    clusters: list[complex] = []
    for v in np.atleast_1d(vals):
        if not np.isfinite(v):
            continue
        if all(abs(v - c) > tol * max(1, abs(c)) for c in clusters):
            clusters.append(complex(v))
    series = None
    if abs(y_target) < 1:
        n_max = 10
        while Q_tail_bound(0, y_target, z, n_max) > 1e-12 and n_max < 400:
            n_max += 10
        series = eval_Q_truncated(0, y_target, z, n_max)
    match = None if series is None else float(min(abs(c - series) for c in clusters))
    return {
        "y": y_target,
        "seed": seed,
        "solutions": len(roots),
        "branches": len(clusters),
        "values": clusters,
        "series_match": match,
    }

