import numpy as np
import pytest
from hypothesis import given, settings

from twolayerfilm.core import ConservedState, eigen, to_invariants
from twolayerfilm.errors import DomainError
from twolayerfilm.riemann import (
    WaveKind,
    rh_residual,
    sample,
    sample_many,
    solve_star_states,
    star_states_arrays,
)

from conftest import admissible_states, random_state


EX52 = (ConservedState(2.0, -2.0, 16.0, 2.286), ConservedState(1.0, -1.0, 4.0, 0.57143))
EX53 = (ConservedState(1.57, -1.15, 2.5, 1.9), ConservedState(1.9, -0.58, 2.4, 2.3))
EX54 = (ConservedState(1.0, -1.5, 2.2, 1.3), ConservedState(0.125, -1.5, 0.9, 0.9))
EX55 = (ConservedState(1.57, -0.95, 3.1, 1.5), ConservedState(1.45, -1.18, 3.6, 1.1))


def bisect_vstar_r1(UL, ustar):
    """Independent v* for a 1-rarefaction: root of u* + v = eta_L v^(1/4)."""
    eta = to_invariants(UL).eta
    h = lambda v: ustar + v - eta * v ** 0.25
    lo, hi = 1e-12, 1.0
    while h(hi) < 0.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if h(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_example_fan_structures():
    assert solve_star_states(*EX52).describe() == "R1 + J3 + S4"
    assert solve_star_states(*EX53).describe() == "R1 + J2 + J3 + R4"
    assert solve_star_states(*EX54).describe() == "R1 + J2 + J3 + S4"
    assert solve_star_states(*EX55).describe() == "S1 + J2 + J3 + S4"


def test_star_values_r1_cases():
    for UL, UR in (EX52, EX53, EX54):
        fan = solve_star_states(UL, UR)
        assert fan.ustar == UR.f * UR.b  # u is invariant across waves 2,3,4
        assert fan.vstar == pytest.approx(bisect_vstar_r1(UL, fan.ustar), rel=1e-10)
        # contact speeds from the invariants
        assert fan.sigma2 == pytest.approx(0.5 * fan.ustar, rel=1e-14)
        assert fan.sigma3 == pytest.approx(fan.ustar + 0.5 * fan.vstar, rel=1e-12)


def test_example54_pins():
    fan = solve_star_states(*EX54)
    assert fan.ustar == pytest.approx(-0.1875)  # 0.125 * -1.5
    assert fan.vstar == pytest.approx(1.3053356299210448, rel=1e-12)
    assert fan.sigma2 == pytest.approx(-0.09375)
    assert fan.wave4_speeds[0] == pytest.approx(1.3842986009080394, rel=1e-12)


def test_shock1_case_is_fully_determined_by_rh_and_lax():
    UL, UR = EX55
    fan = solve_star_states(UL, UR)
    assert fan.config.wave1 is WaveKind.SHOCK
    sigma1 = fan.wave1_speeds[0]
    assert fan.wave1_speeds[1] == sigma1
    res = rh_residual(UL, fan.star_left, sigma1)
    assert np.abs(res).max() <= 1e-10
    # Lax: lam1(star) < sigma1 < lam1(UL)
    assert eigen(fan.star_left).lambdas[0] < sigma1 < eigen(UL).lambdas[0]
    # 1-shock leaves xi and tau alone
    assert to_invariants(fan.star_left).xi == pytest.approx(
        to_invariants(UL).xi, rel=1e-12)
    assert to_invariants(fan.star_left).tau == pytest.approx(
        to_invariants(UL).tau, rel=1e-12)


def test_shock4_rh_and_lax():
    UL, UR = EX54
    fan = solve_star_states(UL, UR)
    assert fan.config.wave4 is WaveKind.SHOCK
    sigma4 = fan.wave4_speeds[0]
    assert np.abs(rh_residual(fan.star_right, UR, sigma4)).max() <= 1e-10
    assert eigen(UR).lambdas[3] < sigma4 < eigen(fan.star_right).lambdas[3]
    # Temple speed closed form sigma4 = u_R + (v* + sqrt(v* v_R) + v_R)/2
    vR = UR.g * UR.q
    assert sigma4 == pytest.approx(
        UR.f * UR.b + 0.5 * (fan.vstar + np.sqrt(fan.vstar * vR) + vR), rel=1e-12)


def test_temple_field_tau_constant_across_wave4():
    # shock or rarefaction, the 4-wave moves along the line g/q = const
    for UL, UR in (EX52, EX53, EX54, EX55):
        fan = solve_star_states(UL, UR)
        assert fan.star_right.g / fan.star_right.q == pytest.approx(
            UR.g / UR.q, rel=1e-12)


def test_invariants_across_rarefaction1():
    UL, UR = EX53
    fan = solve_star_states(UL, UR)
    iL, iS = to_invariants(UL), to_invariants(fan.star_left)
    assert iS.xi == pytest.approx(iL.xi, rel=1e-10)
    assert iS.tau == pytest.approx(iL.tau, rel=1e-10)
    assert iS.eta == pytest.approx(iL.eta, rel=1e-10)


def test_contacts_preserve_u_and_v():
    for UL, UR in (EX52, EX53, EX54, EX55):
        fan = solve_star_states(UL, UR)
        for S in (fan.star_left, fan.star_middle, fan.star_right):
            assert S.f * S.b == pytest.approx(fan.ustar, rel=1e-12)
            assert S.g * S.q == pytest.approx(fan.vstar, rel=1e-12)


def test_sampling_tie_goes_right():
    fan = solve_star_states(*EX54)
    np.testing.assert_array_equal(
        sample(fan, fan.sigma2).as_array(), fan.star_middle.as_array())
    np.testing.assert_array_equal(
        sample(fan, fan.sigma3).as_array(), fan.star_right.as_array())
    np.testing.assert_array_equal(
        sample(fan, fan.wave4_speeds[0]).as_array(), fan.UR.as_array())


def test_sampling_far_field():
    fan = solve_star_states(*EX54)
    np.testing.assert_array_equal(sample(fan, -1e9).as_array(), fan.UL.as_array())
    np.testing.assert_array_equal(sample(fan, 1e9).as_array(), fan.UR.as_array())


def test_rarefaction_interior_monotone_u():
    fan = solve_star_states(*EX52)
    lo, hi = fan.wave1_speeds
    ss = np.linspace(lo, hi, 41)
    us = [sample(fan, s).f * sample(fan, s).b for s in ss]
    assert all(a < b + 1e-13 for a, b in zip(us, us[1:]))
    # the fan point on ray s has lam1 = s
    mid = sample(fan, 0.5 * (lo + hi))
    assert eigen(mid).lambdas[0] == pytest.approx(0.5 * (lo + hi), rel=1e-9)


def test_sample_many_matches_scalar():
    fan = solve_star_states(*EX53)
    ss = np.linspace(-6.0, 8.0, 57)
    batch = sample_many(fan, ss)
    for j, s in enumerate(ss):
        np.testing.assert_allclose(batch[:, j], sample(fan, s).as_array(),
                                   rtol=0, atol=0)


def test_batch_star_states_match_scalar(rng):
    pairs = [(random_state(rng), random_state(rng)) for _ in range(40)]
    fL = np.array([p[0].f for p in pairs])
    bL = np.array([p[0].b for p in pairs])
    gL = np.array([p[0].g for p in pairs])
    qL = np.array([p[0].q for p in pairs])
    fR = np.array([p[1].f for p in pairs])
    bR = np.array([p[1].b for p in pairs])
    gR = np.array([p[1].g for p in pairs])
    qR = np.array([p[1].q for p in pairs])
    star = star_states_arrays(fL, bL, gL, qL, fR, bR, gR, qR)
    for j, (UL, UR) in enumerate(pairs):
        fan = solve_star_states(UL, UR)
        assert star["ustar"][j] == pytest.approx(fan.ustar, rel=1e-13)
        assert star["vstar"][j] == pytest.approx(fan.vstar, rel=1e-10)


@given(admissible_states, admissible_states)
@settings(max_examples=150, deadline=None)
def test_random_pairs_validity(UL, UR):
    fan = solve_star_states(UL, UR)
    # star states admissible and ordered speeds
    s1, s1b = fan.wave1_speeds
    s4, s4b = fan.wave4_speeds
    assert s1 <= s1b + 1e-12
    assert s4 <= s4b + 1e-12
    assert s1b <= fan.sigma2 + 1e-12
    assert fan.sigma2 <= fan.sigma3 + 1e-12
    assert fan.sigma3 <= s4 + max(1e-12, 1e-12 * abs(s4))
    # contacts satisfy RH exactly
    assert np.abs(rh_residual(fan.star_left, fan.star_middle, fan.sigma2)).max() <= 1e-10
    assert np.abs(rh_residual(fan.star_middle, fan.star_right, fan.sigma3)).max() <= 1e-10


@given(admissible_states)
@settings(max_examples=60, deadline=None)
def test_equal_data_gives_zero_strength_fan(U):
    fan = solve_star_states(U, U)
    for s in (-2.0, 0.0, 1.5):
        np.testing.assert_allclose(sample(fan, s).as_array(), U.as_array(),
                                   rtol=0, atol=1e-13)
    assert fan.describe() == "constant"


def test_inadmissible_data_rejected():
    with pytest.raises(DomainError):
        solve_star_states(ConservedState(1.0, 1.0, 2.0, 2.0),
                          ConservedState(1.0, -1.0, 2.0, 2.0))
    with pytest.raises(DomainError):
        solve_star_states(ConservedState(1.0, -1.0, 2.0, 2.0),
                          ConservedState(1.0, -5.0, 1.0, 1.0))
