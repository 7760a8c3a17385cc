import mpmath
import numpy as np
import pytest

from gessel import uniformization as un
from gessel import walk_counting as wc
from gessel import zeta_gf as zg


@pytest.fixture(scope="module")
def rctx():
    return zg.make_ry_context(0.1)


@pytest.fixture(scope="module")
def table():
    return wc.count_table(wc.GESSEL, 120)


def contour_residue(f, p, radius, n=256):
    """(1 / 2 pi i) times the integral of f over a circle, by the trapezoid rule."""
    t = np.exp(2j * np.pi * np.arange(n) / n)
    return complex(np.mean(f(p + radius * t) * radius * t))


def series_q0y(y, z, table, n_max=120):
    return wc.eval_Q_truncated(0, y, z, n_max, table)


def test_fy_two_forms_agree(rctx):
    ctx = rctx.ctx
    w = zg.delta_y_samples(ctx, 30, seed=4) + 0.1 * ctx.omega2
    a, b = zg.f_y(w, ctx), zg.f_y_log(w, ctx)
    assert np.max(np.abs(a - b) / np.maximum(1, np.abs(a))) < 1e-8
    c, d = zg.f_x(w, ctx), zg.f_x_log(w, ctx)
    assert np.max(np.abs(c - d) / np.maximum(1, np.abs(c))) < 1e-8


def test_fy_residue_and_periodicity(rctx):
    ctx, z = rctx.ctx, rctx.z
    w2 = ctx.omega2
    res = contour_residue(lambda w: zg.f_y(w, ctx), w2 / 8, 0.01 * w2)
    assert abs(res - (-1 / (2 * z))) < 1e-8
    w = np.array([0.3 * w2 + 0.2 * ctx.omega1, 0.6 * w2 - 0.1 * ctx.omega1])
    assert np.max(np.abs(zg.f_y(w + w2, ctx) - zg.f_y(w, ctx))) < 1e-8


def test_ry_matches_counting_series_in_delta_y(rctx, table):
    ctx, z = rctx.ctx, rctx.z
    for w in list(zg.delta_y_samples(ctx, 10, seed=1)) + [0.7 * ctx.omega2 + 0.3 * ctx.omega1]:
        y = complex(ctx.y(w))
        assert abs(y) <= 1
        expected = z * (y + 1) * series_q0y(y, z, table)
        assert abs(zg.ry_zeta(w, rctx) - expected) < 1e-7


@pytest.mark.parametrize("z", [0.05, 0.15, 0.2])
def test_ry_series_check_across_z(z):
    rctx = zg.make_ry_context(z)
    w = zg.delta_y_samples(rctx.ctx, 10, seed=2)
    assert zg.series_in_delta_y(rctx, w)["residual"] < 1e-7


def test_ry_value_at_double_zero_of_y(rctx):
    w0 = 7 * rctx.ctx.omega2 / 8
    assert abs(zg.ry_zeta(w0, rctx) - rctx.z * rctx.q00) < 1e-7


def test_ry_is_elliptic_on_the_coarse_lattice(rctx):
    ctx = rctx.ctx
    w = np.array([0.21 * ctx.omega2 + 0.33 * ctx.omega1, 1.4 * ctx.omega2 - 0.2 * ctx.omega1])
    for shift in (3 * ctx.omega2, ctx.omega1):
        assert np.max(np.abs(zg.ry_zeta(w + shift, rctx) - zg.ry_zeta(w, rctx))) < 1e-8


def test_residues_at_the_poles(rctx):
    w2, z = rctx.ctx.omega2, rctx.z
    for frac, expected in ((17, 1 / z), (1, 1 / (2 * z)), (3, -1 / (2 * z)), (21, -1 / z)):
        res = contour_residue(lambda w: zg.ry_zeta(w, rctx), frac * w2 / 8, 0.02 * w2)
        assert abs(res - expected) < 1e-8 * abs(expected)
    for frac in (9, 19):
        assert np.isfinite(zg.ry_zeta(frac * w2 / 8, rctx))
        assert abs(contour_residue(lambda w: zg.ry_zeta(w, rctx), frac * w2 / 8, 0.02 * w2)) < 1e-9


def test_pole_residue_report(rctx):
    rep = zg.verify_pole_residues(rctx)
    assert rep["max_rel_error"] < 1e-6
    assert rep["scan_ok"]
    assert len(rep["rows"]) == 8
    assert all(np.isfinite(v) for v in rep["removable"].values())


def test_q00_against_series(table):
    assert abs(zg.q00_zeta(0.1) - wc.eval_Q_truncated(0, 0, 0.1, 40, table).real) < 1e-8
    assert abs(zg.q00_zeta(0.2) - wc.eval_Q_truncated(0, 0, 0.2, 120, table).real) < 1e-6


@pytest.mark.parametrize("z", [0.02, 0.1, 0.2, 0.24])
def test_q00_against_mpmath_hypergeometric(z):
    ref = (mpmath.hyp2f1(-0.5, -mpmath.mpf(1) / 6, mpmath.mpf(2) / 3, 16 * z * z) - 1) / (2 * z * z)
    assert abs(zg.q00_zeta(z) - float(ref)) < 1e-8


@pytest.mark.parametrize("z", [0.05, 0.1])
def test_q00_from_ry(z):
    rctx = zg.make_ry_context(z)
    assert abs(zg.q00_from_ry(rctx) - zg.q00_zeta(z)) < 1e-8
    shifted = rctx.combo.with_constant(rctx.combo.constant + 1)
    assert abs(zg.q00_from_ry(rctx, shifted) - zg.q00_from_ry(rctx)) < 1e-12


@pytest.mark.parametrize("z", [0.02, 0.1, 0.24])
def test_continuation_identities(z):
    rep = zg.check_continuation_identities(zg.make_ry_context(z), 50, seed=0)
    for key in ("i", "ii", "iii", "iv", "v"):
        assert rep[key] < 1e-7, key
    assert rep["constant_spread"] < 1e-8


def test_orbit_sum_of_fy_vanishes(rctx):
    assert zg.check_orbit_sum_vanishes(rctx.ctx, 40, seed=0) < 1e-8


@pytest.mark.parametrize("z", [0.05, 0.1])
def test_g1_against_counting_table(z, table):
    rctx = zg.make_ry_context(z)
    g1 = sum(table.count(0, 1, n) * z**n for n in range(121))
    assert abs(zg.extract_gj(rctx, 1) - g1) < 1e-7
    assert zg.extract_gj(rctx, 0) == rctx.q00
    with pytest.raises(ValueError):
        zg.extract_gj(rctx, 2)


def test_first_derivative_formula_is_indeterminate(rctx):
    ctx = rctx.ctx
    w0 = 7 * ctx.omega2 / 8
    assert abs(ctx.y_prime(w0)) < 1e-10
    assert abs(rctx.combo.derivative(w0)) < 1e-8
    with pytest.raises(ZeroDivisionError):
        zg.g1_printed_formula(rctx)


def test_combination_derivatives(rctx):
    combo, w2 = rctx.combo, rctx.ctx.omega2
    w = 0.43 * w2 + 0.17 * rctx.ctx.omega1
    h = 1e-3 * w2

    def d(f):  # five-point stencil
        return (f(w - 2 * h) - 8 * f(w - h) + 8 * f(w + h) - f(w + 2 * h)) / (12 * h)

    d1, d2 = d(combo), d(combo.derivative)
    assert abs(d1 - combo.derivative(w)) < 1e-6 * max(1, abs(d1))
    assert abs(d2 - combo.second_derivative(w)) < 1e-6 * max(1, abs(d2))
    assert combo.coefficient_sum == pytest.approx(0, abs=1e-12)


def test_weights():
    assert sum(zg.RY_WEIGHTS) == 0
    assert sum(zg.Q00_WEIGHTS) == 0
    assert len(zg.RY_SHIFTS) == 8


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_at_most_six_branches(rctx, seed):
    rep = zg.check_six_branches(rctx, seed=seed)
    assert 1 <= rep["branches"] <= 6
    assert rep["solutions"] == 6
    assert rep["series_match"] < 1e-8


def test_branches_on_the_unit_circle(rctx):
    rep = zg.check_six_branches(rctx, y_target=np.exp(0.7j))
    assert 1 <= rep["branches"] <= 6
    assert rep["series_match"] is None


def test_delta_y_samples_are_inside_the_disc(rctx):
    ctx = rctx.ctx
    w = zg.delta_y_samples(ctx, 40, seed=9)
    assert np.all(np.abs(ctx.y(w)) <= 1)
    re = w.real / ctx.omega2
    assert np.all((re > 5 / 8) & (re < 9 / 8))


def test_context_is_cached():
    assert zg.make_ry_context(0.1) is zg.make_ry_context(0.1)
    assert un.make_context(0.1) is zg.make_ry_context(0.1).ctx
