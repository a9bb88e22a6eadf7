import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twolayerfilm.core import ConservedState, jacobian, to_invariants
from twolayerfilm.grp import (
    acoustic_solve,
    assemble_and_solve,
    batch_interface,
    grp_interface,
    invariant_time_derivs_left,
    invariant_time_derivs_right,
    lax_wendroff_time_derivs,
)
from twolayerfilm.riemann import sample, solve_star_states

from conftest import admissible_states, random_state

slope_floats = st.floats(min_value=-0.5, max_value=0.5,
                         allow_nan=False, allow_infinity=False)
slopes = st.tuples(slope_floats, slope_floats, slope_floats, slope_floats)


# ---------------------------------------------------------------------------
# invariant derivative rows


def test_invariant_derivs_pins():
    U = ConservedState(1.0, -1.0, 2.0, 2.0)
    xi_t, tau_t, eta_t, u_t = invariant_time_derivs_left(U, np.array([1.0, 0, 0, 0]))
    assert xi_t == pytest.approx(-0.5)
    assert u_t == pytest.approx(-1.5)
    # g-slope only: tau' = 1/q = 0.5, tau_t = -(u + v/2) tau' with u=-1, v=4
    _, tau_t, _, _ = invariant_time_derivs_left(U, np.array([0.0, 0, 1, 0]))
    assert tau_t == pytest.approx(-0.5)


@given(admissible_states, slopes)
@settings(max_examples=120, deadline=None)
def test_invariant_derivs_are_chain_rule_of_lw(U, dU):
    """Each invariant's time derivative must equal grad(inv) . U_t."""
    dU = np.asarray(dU)
    Ut = lax_wendroff_time_derivs(U, dU)
    base = np.array(U.as_array())

    def inv_vec(arr):
        s = to_invariants(ConservedState(*arr))
        return np.array([s.xi, s.tau, s.eta, s.u])

    num = np.zeros(4)
    for j in range(4):
        h = 1e-7 * max(1.0, abs(base[j]))
        e = np.zeros(4)
        e[j] = h
        num += (inv_vec(base + e) - inv_vec(base - e)) / (2 * h) * Ut[j]

    left = np.array(invariant_time_derivs_left(U, dU))
    right = np.array(invariant_time_derivs_right(U, dU))  # (xi_t, tau_t, u_t)
    scale = np.maximum(1.0, np.abs(num))
    np.testing.assert_allclose(left / scale, num / scale, rtol=0, atol=5e-6)
    np.testing.assert_allclose(right, left[[0, 1, 3]], rtol=1e-13, atol=1e-13)


@given(admissible_states, slopes)
@settings(max_examples=80, deadline=None)
def test_lax_wendroff_is_minus_jacobian_times_slope(U, dU):
    dU = np.asarray(dU)
    np.testing.assert_allclose(lax_wendroff_time_derivs(U, dU),
                               -jacobian(U) @ dU, rtol=1e-12, atol=1e-12)


# ---------------------------------------------------------------------------
# characteristic-foot oracle
#
# In smooth regions each invariant rides its own characteristic family,
# and every contact or shock the backward path crosses leaves that
# invariant continuous (for 1-rarefaction configurations all four feet
# are usable; a 1-shock breaks only the eta foot).  Tracing x/t = 0
# backwards through the self-similar fan therefore yields exact
# interface time derivatives that share no algebra with the grp module.

LAMBDA = (
    lambda U: 1.5 * U.f * U.b,
    lambda U: 0.5 * U.f * U.b,
    lambda U: U.f * U.b + 0.5 * U.g * U.q,
    lambda U: U.f * U.b + 1.5 * U.g * U.q,
)


def _segments(fan):
    inf = float("inf")
    segs = [(-inf, fan.wave1_speeds[0], fan.UL)]
    if fan.wave1_speeds[1] > fan.wave1_speeds[0]:
        segs.append((fan.wave1_speeds[0], fan.wave1_speeds[1], None))
    segs.append((fan.wave1_speeds[1], fan.sigma2, fan.star_left))
    segs.append((fan.sigma2, fan.sigma3, fan.star_middle))
    segs.append((fan.sigma3, fan.wave4_speeds[0], fan.star_right))
    if fan.wave4_speeds[1] > fan.wave4_speeds[0]:
        segs.append((fan.wave4_speeds[0], fan.wave4_speeds[1], None))
    segs.append((fan.wave4_speeds[1], inf, fan.UR))
    return segs


def _trace_foot(fan, k):
    """Foot x0 (= x0/t at t=1) of the backward k-characteristic from x=0."""
    lam = LAMBDA[k]
    segs = _segments(fan)
    idx = next(i for i, (lo, hi, _) in enumerate(segs) if lo < 0.0 <= hi)
    s, x = 1.0, 0.0
    for _ in range(16):
        lo, hi, state = segs[idx]
        if state is not None:
            c = lam(state)
            hit_s, hit_b = 0.0, None
            for boundary in (lo, hi):
                if not np.isfinite(boundary) or boundary == c:
                    continue
                cross = (x - c * s) / (boundary - c)
                if 1e-14 < cross < s - 1e-14 and cross > hit_s:
                    hit_s, hit_b = cross, boundary
            if hit_b is None:
                return x - c * s  # straight to t=0 inside this wedge
            s, x = hit_s, hit_b * hit_s
            idx += 1 if c < hit_b else -1
        else:
            # smooth fan interior: d beta / d ln s = lam(beta) - beta
            beta = min(max(x / s, lo), hi)  # entry ray, clamped for roundoff
            sigma = np.log(s)
            h = -1e-3
            rhs = lambda b_: lam(sample(fan, float(np.clip(b_, lo, hi)))) - b_
            prev_beta, prev_sigma = beta, sigma
            while lo <= beta <= hi:
                prev_beta, prev_sigma = beta, sigma
                k1 = rhs(beta)
                k2 = rhs(beta + 0.5 * h * k1)
                k3 = rhs(beta + 0.5 * h * k2)
                k4 = rhs(beta + h * k3)
                beta += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                sigma += h
            bound = lo if beta < lo else hi
            frac = (bound - prev_beta) / (beta - prev_beta)
            sigma = prev_sigma + frac * h
            s = float(np.exp(sigma))
            x = bound * s
            idx = idx - 1 if beta < lo else idx + 1
    raise AssertionError("characteristic failed to reach the data")


def _invariant_slopes(U, dU):
    f, b, g, q = U.f, U.b, U.g, U.q
    df, db, dg, dq = dU
    du = b * df + f * db
    dv = q * dg + g * dq
    u, v = f * b, g * q
    dxi = df / b - f * db / b ** 2
    dtau = dg / q - g * dq / q ** 2
    deta = v ** -0.25 * (du + (0.75 - u / (4.0 * v)) * dv)
    return du, dxi, dtau, deta


def _inv_to_state_jac(U):
    """d(f,b,g,q)/d(u,xi,tau,eta) by central differences at U."""
    inv = to_invariants(U)
    coords = np.array([inv.u, inv.xi, inv.tau, inv.eta])

    def state(c):
        u, xi, tau, eta = c
        # v from u + v = eta v^(1/4), bisected here to stay self-contained
        hfun = lambda v: u + v - eta * v ** 0.25
        lo_, hi_ = 1e-12, 1.0
        while hfun(hi_) < 0.0:
            hi_ *= 2.0
        for _ in range(120):
            mid = 0.5 * (lo_ + hi_)
            if hfun(mid) < 0.0:
                lo_ = mid
            else:
                hi_ = mid
        v = 0.5 * (lo_ + hi_)
        f = np.sqrt(u * xi)
        b = u / f
        g = np.sqrt(v * tau)
        q = g / tau
        return np.array([f, b, g, q])

    J = np.empty((4, 4))
    for j in range(4):
        h = 1e-6 * max(1.0, abs(coords[j]))
        e = np.zeros(4)
        e[j] = h
        J[:, j] = (state(coords + e) - state(coords - e)) / (2 * h)
    return J


def characteristic_oracle(UL, dUL, UR, dUR):
    """Exact interface dU/dt via invariant transport; R1 configurations only."""
    fan = solve_star_states(UL, UR)
    U0 = sample(fan, 0.0)
    # u rides family 1, xi family 2, tau family 3, eta family 4
    feet = [_trace_foot(fan, k) for k in range(4)]
    rates = []
    for k, foot in enumerate(feet):
        side, dside = (UL, dUL) if foot < 0.0 else (UR, dUR)
        rates.append(_invariant_slopes(side, np.asarray(dside, float))[k])
    du_dt, dxi_dt, dtau_dt, deta_dt = (r * x0 for r, x0 in zip(rates, feet))
    J = _inv_to_state_jac(U0)
    return U0, J @ np.array([du_dt, dxi_dt, dtau_dt, deta_dt])


CASE_R1_MIDDLE = (ConservedState(1.57, -1.15, 2.5, 1.9), (0.01, 0.01, 0.01, 0.01),
                  ConservedState(1.9, -0.58, 2.4, 2.3), (0.01, 0.01, 0.01, 0.01))
CASE_R1_RIGHT = (ConservedState(2.1, -2.0, 2.76, 2.0), (0.03, -0.02, 0.04, -0.01),
                 ConservedState(2.0, -2.0, 2.2, 2.0), (-0.02, 0.03, -0.03, 0.02))
CASE_R1_R4 = (ConservedState(1.0, -1.05, 2.9, 2.9), (0.03, -0.02, 0.04, -0.01),
              ConservedState(1.0, -1.0, 3.2, 2.875), (-0.02, 0.03, -0.03, 0.02))


@pytest.mark.parametrize("UL,dUL,UR,dUR",
                         [CASE_R1_MIDDLE, CASE_R1_RIGHT, CASE_R1_R4])
def test_interface_derivative_against_characteristic_oracle(UL, dUL, UR, dUR):
    U0_o, d_oracle = characteristic_oracle(UL, dUL, UR, dUR)
    U0, d = grp_interface(UL, np.asarray(dUL), UR, np.asarray(dUR))
    np.testing.assert_allclose(U0.as_array(), U0_o.as_array(), rtol=1e-12)
    scale = np.maximum(np.abs(d_oracle), 1e-8)
    np.testing.assert_allclose(d / scale, d_oracle / scale, rtol=0, atol=5e-5)


def test_shock1_tau_and_fb_rows_against_feet():
    # a 1-shock breaks only the eta foot; u, xi, tau still transport
    UL = ConservedState(2.0, -2.0, 2.4, 2.0)
    UR = ConservedState(2.0, -2.2, 2.8, 2.0)
    dUL = np.array([0.03, -0.02, 0.04, -0.01])
    dUR = np.array([-0.02, 0.03, -0.03, 0.02])
    fan = solve_star_states(UL, UR)
    assert fan.describe().startswith("S1")
    U0, d = grp_interface(UL, dUL, UR, dUR)

    feet = [_trace_foot(fan, k) for k in range(3)]  # lam1, lam2, lam3
    sides = [(UL, dUL) if x0 < 0 else (UR, dUR) for x0 in feet]
    du = _invariant_slopes(*sides[0])[0] * feet[0]
    dxi = _invariant_slopes(*sides[1])[1] * feet[1]
    dtau = _invariant_slopes(*sides[2])[2] * feet[2]

    # d/dt of u = fb and xi = f/b pin down the f,b rows completely
    u_t = U0.b * d[0] + U0.f * d[1]
    xi_t = d[0] / U0.b - U0.f * d[1] / U0.b ** 2
    tau_t = d[2] / U0.q - U0.g * d[3] / U0.q ** 2
    assert u_t == pytest.approx(du, rel=1e-6, abs=1e-12)
    assert xi_t == pytest.approx(dxi, rel=1e-6, abs=1e-12)
    assert tau_t == pytest.approx(dtau, rel=1e-5, abs=1e-12)


# ---------------------------------------------------------------------------
# acoustic case


@given(admissible_states, slopes, slopes)
@settings(max_examples=60, deadline=None)
def test_acoustic_solve_is_invariant_advection(U, dl, dr):
    """With equal traces each invariant advects at its own speed,
    taking the slope from the side the characteristic comes from."""
    dl = np.asarray(dl)
    dr = np.asarray(dr)
    sol = acoustic_solve(U, dl, dr)
    lam = [f(U) for f in LAMBDA]

    slopes_l = _invariant_slopes(U, dl)
    slopes_r = _invariant_slopes(U, dr)
    # u rides lam1 (<0, right), xi rides lam2 (<0, right),
    # tau rides lam3 (sign varies), eta rides lam4 (>0, left)
    du_dt = -lam[0] * slopes_r[0]
    dxi_dt = -lam[1] * slopes_r[1]
    dtau_dt = -lam[2] * (slopes_l[2] if lam[2] > 0 else slopes_r[2])
    deta_dt = -lam[3] * slopes_l[3]

    J = _inv_to_state_jac(U)
    expected = J @ np.array([du_dt, dxi_dt, dtau_dt, deta_dt])
    got = sol.dM if lam[2] > 0 else sol.dR
    scale = np.maximum(np.abs(expected), 1e-8)
    np.testing.assert_allclose(got / scale, expected / scale, rtol=0, atol=2e-5)


def test_zero_slopes_give_zero_derivative():
    z = np.zeros(4)
    for UL, UR in ((ConservedState(1.0, -1.0, 2.0, 2.0),) * 2,
                   (ConservedState(1.0, -1.5, 2.2, 1.3),
                    ConservedState(0.125, -1.5, 0.9, 0.9))):
        _, d = grp_interface(UL, z, UR, z)
        np.testing.assert_array_equal(d, np.zeros(4))


def test_wave4_kind_switch_is_continuous():
    # nudge v_R through v*: the 4-wave flips S4 <-> R4, dR must not jump
    UL = ConservedState(1.0, -1.05, 2.9, 2.9)
    dU = np.array([0.01, -0.01, 0.02, 0.01])
    base = solve_star_states(UL, ConservedState(1.0, -1.0, 3.2, 2.875))
    tau_r = 3.2 / 2.875
    eps = 1e-6
    out = []
    for v_r in (base.vstar * (1 - eps), base.vstar * (1 + eps)):
        g_r = np.sqrt(v_r * tau_r)
        UR = ConservedState(1.0, -1.0, g_r, g_r / tau_r)
        fan = solve_star_states(UL, UR)
        out.append(grp_interface(UL, dU, UR, dU)[1])
    np.testing.assert_allclose(out[0], out[1], rtol=1e-4, atol=1e-9)


def test_acoustic_continuity_of_general_path():
    U = ConservedState(1.3, -0.9, 2.1, 1.7)
    dU = np.array([0.02, -0.01, 0.03, 0.015])
    Up = ConservedState(*(np.array(U.as_array()) * (1 + 1e-8)))
    _, d_gen = grp_interface(U, dU, Up, dU)
    _, d_ac = grp_interface(U, dU, U, dU)
    np.testing.assert_allclose(d_gen, d_ac, rtol=0, atol=1e-5)


# ---------------------------------------------------------------------------
# batch kernel


def test_batch_matches_scalar(rng):
    n = 64
    UL = [random_state(rng) for _ in range(n)]
    UR = []
    for j, ul in enumerate(UL):
        if j % 3 == 0:
            UR.append(ul)  # exercise the acoustic branch
        else:
            UR.append(random_state(rng))
    dUL = rng.uniform(-0.3, 0.3, (4, n))
    dUR = rng.uniform(-0.3, 0.3, (4, n))
    L = np.array([s.as_array() for s in UL]).T
    R = np.array([s.as_array() for s in UR]).T
    U0b, db = batch_interface(L, dUL, R, dUR)
    for j in range(n):
        U0, d = grp_interface(UL[j], dUL[:, j], UR[j], dUR[:, j])
        np.testing.assert_allclose(U0b[:, j], U0.as_array(), rtol=1e-12,
                                   atol=1e-13, err_msg=f"state col {j}")
        np.testing.assert_allclose(db[:, j], d, rtol=1e-9, atol=1e-11,
                                   err_msg=f"derivative col {j}")


def test_assemble_matches_entry_point():
    UL, dUL, UR, dUR = CASE_R1_MIDDLE
    fan = solve_star_states(UL, UR)
    sol = assemble_and_solve(fan, UL, np.asarray(dUL), UR, np.asarray(dUR))
    _, d = grp_interface(UL, np.asarray(dUL), UR, np.asarray(dUR))
    chosen = sol.dM if fan.sigma3 > 0 else sol.dR
    np.testing.assert_array_equal(chosen, d)
    # contact coupling between the blocks
    np.testing.assert_allclose(sol.dM[:2],
                               sol.dR[:2], rtol=0, atol=0)
    np.testing.assert_allclose(sol.dM[2:], sol.dL[2:], rtol=0, atol=0)
