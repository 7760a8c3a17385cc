import math
import warnings

import mpmath
import numpy as np
import pytest

from gessel import kernel_curve as kc
from gessel import uniformization as un
from gessel import weierstrass as we

Z_GRID = (0.02, 0.05, 0.1, 0.15, 0.2, 0.24)


def periods_oracle(z):
    """Period integrals of dx / sqrt(|d(x)|) by mpmath tanh-sinh quadrature."""
    mpmath.mp.dps = 30
    z = mpmath.mpf(z)
    roots = sorted(mpmath.re(r) for r in mpmath.polyroots([z * z, -2 * z, 1 - 2 * z * z, -2 * z, z * z], maxsteps=200, extraprec=60))
    x1, x2, x3, x4 = roots

    def f(x):
        return 1 / mpmath.sqrt(abs((z * x * x - x + z) ** 2 - 4 * z * z * x * x))

    w1 = mpmath.quad(f, [x1, x2])
    w2 = mpmath.quad(f, [x2, x3])
    w3 = mpmath.quad(f, [-mpmath.inf, x1 - 1, x1])
    return complex(0, w1), float(w2), float(w3)


@pytest.mark.parametrize("z", [0.02, 0.1, 0.24])
def test_periods_against_mpmath(z):
    p = un.compute_periods(z)
    w1, w2, w3 = periods_oracle(z)
    assert abs(p.omega1 - w1) < 1e-9 * abs(w1)
    assert abs(p.omega2 - w2) < 1e-9 * w2
    assert abs(p.omega3 - w3) < 1e-9 * w3


@pytest.mark.parametrize("z", Z_GRID)
def test_period_ratio_is_three_quarters(z):
    assert abs(un.compute_periods(z).ratio - 0.75) < 1e-9


@pytest.mark.parametrize("z", Z_GRID)
def test_lattice_invariants_match_closed_forms(z):
    ctx = un.make_context(z)
    lat, cf = ctx.lattice.invariants, un.closed_form_invariants(z)
    assert abs(lat.g2 - cf.g2) < 1e-8 * abs(cf.g2)
    assert abs(lat.g3 - cf.g3) < 1e-8 * abs(cf.g3)


def test_invalid_z():
    for z in (0.0, 0.25, -0.1):
        with pytest.raises(ValueError):
            un.compute_periods(z)


@pytest.mark.parametrize("z", Z_GRID)
def test_half_periods_map_to_branch_points(z):
    ctx = un.make_context(z)
    bp, w1, w2 = ctx.branch, ctx.omega1, ctx.omega2
    assert abs(un.x_of_omega(w2 / 2, ctx) - bp.x1) < 1e-9
    assert abs(un.x_of_omega(w1 / 2, ctx) - bp.x3) < 1e-9
    assert abs(un.x_of_omega((w1 + w2) / 2, ctx) - bp.x2) < 1e-9


@pytest.mark.parametrize("z", Z_GRID)
def test_parametrisation_lies_on_kernel(z):
    ctx = un.make_context(z)
    rng = np.random.default_rng(0)
    w2 = ctx.omega2
    w = rng.uniform(0, 1, 400) * w2 + rng.uniform(0, 1, 400) * ctx.omega1
    # keep away from the poles of x and y
    poles = np.array([0, w2 / 8, 3 * w2 / 8, 5 * w2 / 8, 7 * w2 / 8, w2])
    far = np.min(np.abs(w[:, None] - poles[None, :]), axis=1) > 0.05 * w2
    w = w[far][:100]
    assert np.max(np.abs(kc.kernel_eval(un.x_of_omega(w, ctx), un.y_of_omega(w, ctx), z))) < 1e-8
    assert np.max(np.abs(un.kernel_residual(ctx, w))) < 1e-8


def test_poles_and_zeros():
    ctx = un.make_context(0.1)
    rep = un.check_poles_zeros(ctx)
    assert rep["max_order_error"] < 1e-3
    assert rep["wp_w2_8_residual"] < 1e-8
    w2 = ctx.omega2
    for eps in (1e-3, 1e-4):
        assert abs(ctx.x(3 * w2 / 8 + eps)) / eps == pytest.approx(abs(ctx.x(3 * w2 / 8 + 1e-5)) / 1e-5, rel=1e-2)
        assert abs(ctx.y(7 * w2 / 8 + eps)) / eps**2 == pytest.approx(abs(ctx.y(7 * w2 / 8 + 1e-5)) / 1e-10, rel=1e-2)
    assert abs(we.wp(w2 / 8, ctx.lattice) - ctx.kernel.d_second(ctx.x4) / 6) < 1e-8


@pytest.mark.parametrize("z", [0.05, 0.1, 0.2])
def test_group_lift(z):
    ctx = un.make_context(z)
    rep = un.check_group_lift(ctx)
    assert rep["x_xi"] < 1e-8
    assert rep["y_eta"] < 1e-8
    assert rep["eta_xi_shift"] < 1e-8


def test_lifted_maps_act_like_the_group_on_points():
    ctx = un.make_context(0.1)
    for w in (0.3 * ctx.omega2 + 0.2 * ctx.omega1, 0.55 * ctx.omega2 + 0.4 * ctx.omega1):
        x, y = complex(ctx.x(w)), complex(ctx.y(w))
        for lift, image in ((ctx.xi, kc.xi(x, y)), (ctx.eta, kc.eta(x, y))):
            v = lift(w)
            assert np.allclose(ctx.x(v), image[0], rtol=1e-9)
            assert np.allclose(ctx.y(v), image[1], rtol=1e-9)


@pytest.mark.parametrize("z", [0.05, 0.1, 0.2])
def test_wp_special_values(z):
    ctx = un.make_context(z)
    assert max(un.wp_special_values(ctx).values()) < 1e-9
    lat, w2 = ctx.lattice, ctx.omega2
    assert abs(we.wp(w2 / 4, lat) - (1 + 4 * z * z) / 3) < 1e-9
    assert abs(we.wp(w2 / 2, lat) - (1 - 8 * z * z) / 3) < 1e-9


def test_R_small_z_and_quartic():
    z = 0.01
    assert abs(un.compute_R(z) - (2 - 16 * z * z - 48 * z**4)) < 1e-9
    z = 0.1
    inv = un.closed_form_invariants(z)
    R = un.compute_R(z)
    assert abs(R**4 - 2 * inv.g2 * R * R + 8 * inv.g3 * R - inv.g2**2 / 3) < 1e-12
    assert abs(un.R_at_phi(0.3) - un.compute_R(un.phi(0.3))) < 1e-9


@pytest.mark.parametrize("z", Z_GRID)
def test_sublattice_invariants(z):
    ctx = un.make_context(z)
    sub = un.sublattice_invariants(z)
    assert abs(sub.T[3] - we.wp(ctx.omega2, ctx.lattice13).real) < 1e-8
    direct = ctx.lattice13.invariants
    assert abs(sub.g2_13 - direct.g2) < 1e-8 * max(1, abs(direct.g2))
    assert abs(sub.g3_13 - direct.g3) < 1e-8 * max(1, abs(direct.g3))
    assert math.isfinite(sub.g2_13) and math.isfinite(sub.g3_13)


def test_g3_13_against_eisenstein_sum():
    ctx = un.make_context(0.1)
    lat = ctx.lattice13
    n = 300
    m = np.arange(-n, n + 1)
    w = (m[:, None] * lat.omega_hat + m[None, :] * lat.omega_bar).ravel()
    w = w[w != 0]
    g3 = 140 * np.sum(w**-6.0)
    assert abs(un.sublattice_invariants(0.1).g3_13 - g3.real) < 1e-4 * abs(g3)


@pytest.mark.parametrize("z", Z_GRID)
def test_T_values_against_direct_evaluation(z):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", un.RootAmbiguityWarning)
        T = un.compute_T(z)
    direct = un.T_direct(un.make_context(z))
    assert max(abs(a - b) for a, b in zip(T, direct)) < 1e-8
    assert T[0] > T[2] > T[4]


def test_T3_small_z_expansion():
    for z in (0.005, 0.01, 0.02):
        with pytest.warns(un.RootAmbiguityWarning):
            T = un.compute_T(z)
        assert abs(T[2] - (1 / 3 - 8 * z * z / 3 - 8 * z**4 - 60 * z**6)) < 1e3 * z**8


def test_T_cubic_has_the_T_roots():
    z = 0.15
    T = un.compute_T(z)
    c = un.T_cubic_coefficients(z)
    for t in (T[0], T[2], T[4]):
        assert abs(np.polyval(c, t)) < 1e-13


@pytest.mark.parametrize("x", [0.05, 0.2, 0.3, 0.45])
def test_T_closed_forms_along_the_covering(x):
    z = un.phi(x)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", un.RootAmbiguityWarning)
        T = un.compute_T(z)
    closed = un.T_at_phi(x)
    assert max(abs(a - b) for a, b in zip(T, closed)) < 1e-8


def test_T_closed_forms_named_entries():
    x = 0.3
    u = 4 * x + 1
    M = (4 * x**4 + 28 * x**3 + 30 * x**2 + 10 * x + 1) / (3 * u**3)
    N = 2 * x * (x + 1) * (2 * x + 1) / u**2.5
    T = un.T_at_phi(x)
    assert T[0] == pytest.approx(M + N, abs=1e-14)
    assert T[5] == pytest.approx(((2 * x + 1) / u) ** 2 - 2 * M, abs=1e-14)
    assert un.T_at_phi(1e-9)[3] == pytest.approx(1 / 3, abs=1e-7)
    assert un.R_at_phi(1e-9) == pytest.approx(2, abs=1e-7)
