from dataclasses import replace

import numpy as np
import pytest

from twolayerfilm.core import max_wave_speed
from twolayerfilm.errors import StateSpaceViolation
from twolayerfilm.scheme import (
    BoundaryCondition,
    GridState,
    LimiterMode,
    SchemeConfig,
    SchemeKind,
    _validate,
    apply_bc,
    cfl_dt,
    godunov_step,
    grp_step,
    minmod3,
    muscl_rk2_step,
    reconstruct_slopes,
    run_simulation,
)


def smooth_grid(n=40, bc=BoundaryCondition.PERIODIC):
    x = (np.arange(n) + 0.5) / n
    U = np.stack([
        1.5 + 0.2 * np.sin(2 * np.pi * x),
        -1.0 - 0.1 * np.cos(2 * np.pi * x),
        2.0 + 0.3 * np.sin(2 * np.pi * x + 1.0),
        2.0 + 0.1 * np.cos(4 * np.pi * x),
    ])
    return GridState(x_lo=0.0, x_hi=1.0, t=0.0, averages=U,
                     slopes=np.zeros_like(U), bc=bc)


def test_minmod3_pins():
    assert minmod3(1.0, 2.0, 3.0) == 1.0
    assert minmod3(-1.0, 2.0, 3.0) == 0.0
    assert minmod3(-1.0, -2.0, -3.0) == -1.0
    assert minmod3(0.0, 1.0, 2.0) == 0.0
    out = minmod3(np.array([1.0, -4.0]), np.array([2.0, -1.0]),
                  np.array([0.5, -2.0]))
    np.testing.assert_array_equal(out, [0.5, -1.0])


def test_reconstruct_linear_data_is_exact_inside():
    n = 16
    x = (np.arange(n) + 0.5) / n
    U = np.stack([2.0 + 0.7 * x, -1.0 - 0.3 * x, 3.0 + 0 * x, 2.0 + 0 * x])
    for mode in (LimiterMode.MINMOD, LimiterMode.UNLIMITED_CENTRAL):
        S = reconstruct_slopes(U, BoundaryCondition.OUTFLOW, mode, 1.0, 1.0 / n)
        np.testing.assert_allclose(S[0, 1:-1], 0.7, rtol=1e-12)
        np.testing.assert_allclose(S[1, 1:-1], -0.3, rtol=1e-12)
        np.testing.assert_allclose(S[2:, 1:-1], 0.0, atol=1e-15)


def test_reconstruct_zero_at_extrema():
    U = np.array([[1.0, 2.0, 1.0]])
    S = reconstruct_slopes(U, BoundaryCondition.OUTFLOW,
                           LimiterMode.MINMOD, 1.5, 0.1)
    assert S[0, 1] == 0.0


def test_reconstruct_theta_scales_one_sided_bound():
    # kink with dm = 1, dp = 0.2, central = 0.6 at the middle cell
    U = np.array([[0.0, 1.0, 1.2]])
    for theta, want in ((1.0, 0.2), (1.9, 0.38)):
        S = reconstruct_slopes(U, BoundaryCondition.OUTFLOW,
                               LimiterMode.MINMOD, theta, 1.0)
        assert S[0, 1] == pytest.approx(want, rel=1e-13)
    # a flat neighbor kills the slope regardless of theta
    S = reconstruct_slopes(np.array([[0.0, 0.0, 1.0]]),
                           BoundaryCondition.OUTFLOW,
                           LimiterMode.MINMOD, 1.9, 1.0)
    assert S[0, 1] == 0.0


def test_apply_bc_periodic_and_outflow():
    g = smooth_grid(6, BoundaryCondition.PERIODIC)
    Ue, Se = apply_bc(g)
    np.testing.assert_array_equal(Ue[:, 0], g.averages[:, -1])
    np.testing.assert_array_equal(Ue[:, -1], g.averages[:, 0])
    g2 = smooth_grid(6, BoundaryCondition.OUTFLOW)
    g2 = replace(g2, slopes=np.ones_like(g2.averages))
    Ue, Se = apply_bc(g2)
    np.testing.assert_array_equal(Ue[:, 0], g2.averages[:, 0])
    np.testing.assert_array_equal(Se[:, 0], 0.0)
    np.testing.assert_array_equal(Se[:, -1], 0.0)


def test_cfl_dt_matches_max_speed():
    n = 8
    U = np.tile(np.array([1.0, -1.0, 2.0, 2.0])[:, None], (1, n))
    g = GridState(0.0, 1.0, 0.0, U, np.zeros_like(U), BoundaryCondition.PERIODIC)
    lam = max_wave_speed(1.0, -1.0, 2.0, 2.0)
    assert lam == pytest.approx(5.0)
    assert cfl_dt(g, 0.4) == pytest.approx(0.4 * (1.0 / n) / 5.0)


def test_constant_data_is_fixed_point():
    n = 12
    U = np.tile(np.array([1.2, -0.8, 2.1, 1.7])[:, None], (1, n))
    g = GridState(0.0, 1.0, 0.0, U, np.zeros_like(U), BoundaryCondition.PERIODIC)
    cfg = SchemeConfig()
    for step in (godunov_step, grp_step, muscl_rk2_step):
        out = step(g, cfg, 1e-3)
        np.testing.assert_allclose(out.averages, U, rtol=1e-14, atol=1e-14)


def test_grp_with_zero_slopes_reduces_to_godunov():
    # Riemann data, first step: with all slopes zero the midpoint state
    # is the interface state itself, so the fluxes coincide exactly
    n = 20
    U = np.tile(np.array([1.0, -1.0, 2.0, 2.0])[:, None], (1, n))
    U[:, n // 2:] = np.array([0.125, -1.0, 1.2, 1.2])[:, None]
    g = GridState(-1.0, 1.0, 0.0, U, np.zeros_like(U), BoundaryCondition.OUTFLOW)
    cfg = SchemeConfig(limiter=LimiterMode.MINMOD)
    dt = 0.3 * cfl_dt(g, 1.0)
    out_g = godunov_step(g, cfg, dt)
    out_p = grp_step(g, cfg, dt)
    np.testing.assert_allclose(out_p.averages, out_g.averages,
                               rtol=1e-13, atol=1e-14)


def test_conservation_periodic():
    g = smooth_grid(32)
    for kind in SchemeKind:
        cfg = SchemeConfig(scheme=kind)
        grid = g
        before = grid.conserved_totals()
        for _ in range(25):
            grid = (godunov_step if kind is SchemeKind.GODUNOV
                    else grp_step if kind is SchemeKind.GRP2
                    else muscl_rk2_step)(grid, cfg, cfl_dt(grid, 0.4))
        drift = np.abs(grid.conserved_totals() - before) / np.abs(before)
        assert drift.max() < 1e-13, kind


def test_validate_reports_and_raises():
    good = np.array([[1.0], [-1.0], [2.0], [2.0]])
    assert _validate(good, 0.0, SchemeConfig()) == []
    bad = np.array([[1.0, -0.5], [-1.0, -1.0], [2.0, 2.0], [2.0, 2.0]])
    cfg = SchemeConfig(continue_on_violation=True)
    assert _validate(bad, 0.0, cfg) == [1]
    with pytest.raises(StateSpaceViolation) as exc:
        _validate(bad, 0.125, SchemeConfig())
    assert exc.value.cell == 1
    assert exc.value.time == 0.125


def test_run_simulation_lands_on_t_end():
    g = smooth_grid(24)
    cfg = SchemeConfig(scheme=SchemeKind.GODUNOV, cfl=0.45)
    t_end = 0.037
    out, log = run_simulation(g, cfg, t_end)
    assert out.t == pytest.approx(t_end, abs=1e-13)
    assert log.steps == len(log.dts)
    assert log.dts[-1] <= log.dts[0] + 1e-15  # final step clipped
    assert sum(log.dts) == pytest.approx(t_end, abs=1e-12)
    np.testing.assert_allclose(log.conserved_end, log.conserved_start,
                               rtol=1e-12)


def test_run_simulation_zero_time_is_noop():
    g = smooth_grid(8)
    out, log = run_simulation(g, SchemeConfig(), 0.0)
    assert log.steps == 0
    np.testing.assert_array_equal(out.averages, g.averages)
