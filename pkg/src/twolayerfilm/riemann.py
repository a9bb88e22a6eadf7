"""Exact Riemann solver for the two-layer thin-film system.

Wave pattern, left to right: a 1-wave (rarefaction or shock), a contact
with speed u*/2 jumping only (f, b) at fixed u, a second contact with
speed u* + v*/2 jumping only (g, q) at fixed v, and a 4-wave.  The
fourth field is of Temple type: its shock and rarefaction curves both
keep f, b and tau = g/q fixed.

The star solve is explicit except for two scalar root finds: v* along a
1-rarefaction solves u* + v = eta_L v^(1/4); along a 1-shock the
Hugoniot reduces to a cubic in g* with a unique admissible root.  All
heavy lifting is done by :func:`star_states_arrays`, which operates on
whole arrays of interface pairs; the scalar API wraps lane 0 of it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import core
from .core import ConservedState, StateSpaceClass
from .errors import DomainError, NoRoot

__all__ = [
    "WaveKind",
    "WaveConfig",
    "WaveFan",
    "solve_star_states",
    "sample",
    "sample_many",
    "rh_residual",
    "star_states_arrays",
    "interface_state_arrays",
]

# Waves with relative strength below this are treated as zero-strength
# rarefactions when classifying.
STRENGTH_TOL = 1e-14


class WaveKind(enum.Enum):
    RAREFACTION = "rarefaction"
    SHOCK = "shock"


@dataclass(frozen=True)
class WaveConfig:
    wave1: WaveKind
    wave4: WaveKind


@dataclass(frozen=True, eq=False)
class WaveFan:
    """Full solution structure of one Riemann problem.

    Speeds are stored as (left edge, right edge) pairs; the two entries
    coincide for shocks.  Regions from left to right: UL, the 1-wave,
    star_left, the u-contact at sigma2, star_middle, the v-contact at
    sigma3, star_right, the 4-wave, UR.
    """

    UL: ConservedState
    UR: ConservedState
    star_left: ConservedState
    star_middle: ConservedState
    star_right: ConservedState
    config: WaveConfig
    ustar: float
    vstar: float
    wave1_speeds: tuple
    sigma2: float
    sigma3: float
    wave4_speeds: tuple

    def describe(self) -> str:
        """Wave structure with zero-strength waves omitted, e.g.
        'R1 + J3 + S4'."""
        parts = []
        uL = self.UL.f * self.UL.b
        scale = max(1.0, abs(uL), abs(self.ustar))
        if abs(self.ustar - uL) > 100 * STRENGTH_TOL * scale:
            parts.append("R1" if self.config.wave1 is WaveKind.RAREFACTION else "S1")
        if abs(self.star_left.f - self.star_middle.f) > 1e-12 * max(
            1.0, abs(self.star_middle.f)
        ):
            parts.append("J2")
        tauL = self.star_middle.g / self.star_middle.q
        tauR = self.star_right.g / self.star_right.q
        if abs(tauL - tauR) > 1e-12 * max(1.0, abs(tauR)):
            parts.append("J3")
        vR = self.UR.g * self.UR.q
        if abs(self.vstar - vR) > 100 * STRENGTH_TOL * max(1.0, self.vstar, vR):
            parts.append("R4" if self.config.wave4 is WaveKind.RAREFACTION else "S4")
        return " + ".join(parts) if parts else "constant"


def _solve_shock1_gstar(gL, qL, uL, tauL, ustar, sigma1):
    """Unique root g* > g_L of the 1-shock Hugoniot cubic.

    phi(g) = g - g_L - (1/sigma1) (g^3/(2 tau_L) + u* g
                                   - g_L^2 q_L / 2 - u_L g_L)

    with sigma1 < 0.  phi(g_L) < 0 and the cubic term dominates with a
    positive coefficient, so expanding the upper bracket end always
    finds the single sign change.
    """
    inv = 1.0 / sigma1
    const = 0.5 * gL * gL * qL + uL * gL

    def phi(g):
        return g - gL - inv * (0.5 * g**3 / tauL + ustar * g - const)

    lo = gL.copy()
    hi = 2.0 * gL
    for _ in range(200):
        bad = phi(hi) <= 0.0
        if not np.any(bad):
            break
        hi = np.where(bad, 2.0 * hi, hi)
    else:
        raise NoRoot("1-shock cubic bracket expansion failed")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        below = phi(mid) < 0.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    g = 0.5 * (lo + hi)
    for _ in range(5):
        dphi = 1.0 - inv * (1.5 * g * g / tauL + ustar)
        g = np.clip(g - phi(g) / dphi, lo, hi)
    return g


def star_states_arrays(fL, bL, gL, qL, fR, bR, gR, qR):
    """Solve many Riemann problems at once.

    Parameters are 1-d arrays of equal length.  Returns a dict of
    arrays: star components (fstar, bstar, gstarL, qstarL, gstarR,
    qstarR), invariants (ustar, vstar, plus the left/right data
    invariants reused by callers), wave classification masks
    (w1_is_shock, w4_is_shock) and the five signal speeds (w1l, w1r,
    sigma2, sigma3, w4l, w4r).

    Lanes where the two input states are bitwise equal skip the root
    finds entirely.
    """
    fL, bL, gL, qL, fR, bR, gR, qR = (
        np.atleast_1d(np.asarray(a, dtype=float))
        for a in (fL, bL, gL, qL, fR, bR, gR, qR)
    )
    n = fL.shape[0]
    uL = fL * bL
    vL = gL * qL
    xiL = fL / bL
    tauL = gL / qL
    etaL = (uL + vL) / vL**0.25
    uR = fR * bR
    vR = gR * qR
    tauR = gR / qR

    ustar = uR
    trivial = (fL == fR) & (bL == bR) & (gL == gR) & (qL == qR)

    fstar = np.sqrt(ustar * xiL)
    bstar = ustar / fstar

    tol1 = STRENGTH_TOL * np.maximum(1.0, np.maximum(np.abs(uL), np.abs(ustar)))
    w1_is_shock = ustar < uL - tol1

    vstar = vL.copy()
    idx_r = np.nonzero(~trivial & ~w1_is_shock)[0]
    if idx_r.size:
        vstar[idx_r] = core.v_from_eta_arrays(
            ustar[idx_r], etaL[idx_r], v_init=vL[idx_r]
        )
    sigma1 = np.zeros(n)
    idx_s = np.nonzero(w1_is_shock)[0]
    if idx_s.size:
        s1 = (
            bL[idx_s]
            * (fL[idx_s] ** 2 + fL[idx_s] * fstar[idx_s] + fstar[idx_s] ** 2)
            / (2.0 * fL[idx_s])
        )
        sigma1[idx_s] = s1
        gs = _solve_shock1_gstar(
            gL[idx_s], qL[idx_s], uL[idx_s], tauL[idx_s], ustar[idx_s], s1
        )
        vstar[idx_s] = gs * gs / tauL[idx_s]

    gstarL = np.sqrt(vstar * tauL)
    qstarL = gstarL / tauL
    gstarR = np.sqrt(vstar * tauR)
    qstarR = gstarR / tauR

    tol4 = STRENGTH_TOL * np.maximum(1.0, np.maximum(vR, vstar))
    w4_is_shock = vstar > vR + tol4

    sigma2 = 0.5 * ustar
    sigma3 = ustar + 0.5 * vstar
    sigma4 = uR + 0.5 * (vstar + np.sqrt(vstar * vR) + vR)

    w1l = np.where(w1_is_shock, sigma1, 1.5 * uL)
    w1r = np.where(w1_is_shock, sigma1, 1.5 * ustar)
    w4l = np.where(w4_is_shock, sigma4, ustar + 1.5 * vstar)
    w4r = np.where(w4_is_shock, sigma4, ustar + 1.5 * vR)

    return {
        "ustar": ustar,
        "vstar": vstar,
        "sigma1": sigma1,
        "fstar": fstar,
        "bstar": bstar,
        "gstarL": gstarL,
        "qstarL": qstarL,
        "gstarR": gstarR,
        "qstarR": qstarR,
        "w1_is_shock": w1_is_shock,
        "w4_is_shock": w4_is_shock,
        "w1l": w1l,
        "w1r": w1r,
        "sigma2": sigma2,
        "sigma3": sigma3,
        "w4l": w4l,
        "w4r": w4r,
        "uL": uL,
        "vL": vL,
        "xiL": xiL,
        "tauL": tauL,
        "etaL": etaL,
        "uR": uR,
        "vR": vR,
        "tauR": tauR,
    }


def interface_state_arrays(star, fR, bR):
    """State picked up at x/t = 0 for each lane.

    On the admissible set the 1-wave and sigma2 are negative while the
    4-wave edges are positive, so x/t = 0 always lies in the middle or
    right star region; the split is the sign of sigma3 (ties go right).
    """
    mid = star["sigma3"] > 0.0
    g = np.where(mid, star["gstarL"], star["gstarR"])
    q = np.where(mid, star["qstarL"], star["qstarR"])
    return np.asarray(fR, dtype=float), np.asarray(bR, dtype=float), g, q


def _check_admissible(U, label):
    if classify_state(U) is not StateSpaceClass.U:
        raise DomainError(f"{label} state {U} is outside the admissible set")


def classify_state(U):
    return core.classify(U)


def solve_star_states(UL: ConservedState, UR: ConservedState) -> WaveFan:
    """Exact wave structure of the Riemann problem with data UL, UR.

    Raises DomainError when either datum is outside the admissible set
    or a star state leaves its closure.
    """
    _check_admissible(UL, "left")
    _check_admissible(UR, "right")
    star = star_states_arrays(
        UL.f, UL.b, UL.g, UL.q, UR.f, UR.b, UR.g, UR.q
    )
    ustar = float(star["ustar"][0])
    vstar = float(star["vstar"][0])
    if not vstar > 0.0:
        raise DomainError("star state has nonpositive v")
    if ustar + vstar < -1e-12 * max(1.0, abs(ustar), vstar):
        raise DomainError("star state leaves the closure of the admissible set")

    fstar = float(star["fstar"][0])
    bstar = float(star["bstar"][0])
    star_left = ConservedState(
        fstar, bstar, float(star["gstarL"][0]), float(star["qstarL"][0])
    )
    star_middle = ConservedState(
        UR.f, UR.b, float(star["gstarL"][0]), float(star["qstarL"][0])
    )
    star_right = ConservedState(
        UR.f, UR.b, float(star["gstarR"][0]), float(star["qstarR"][0])
    )
    config = WaveConfig(
        wave1=WaveKind.SHOCK
        if bool(star["w1_is_shock"][0])
        else WaveKind.RAREFACTION,
        wave4=WaveKind.SHOCK
        if bool(star["w4_is_shock"][0])
        else WaveKind.RAREFACTION,
    )
    w1 = (float(star["w1l"][0]), float(star["w1r"][0]))
    w4 = (float(star["w4l"][0]), float(star["w4r"][0]))
    sigma2 = float(star["sigma2"][0])
    sigma3 = float(star["sigma3"][0])
    tol = 1e-10 * max(1.0, abs(ustar), vstar)
    if not (w1[1] <= sigma2 + tol and sigma2 <= sigma3 + tol and sigma3 <= w4[0] + tol):
        raise DomainError("wave speeds came out unordered")
    return WaveFan(
        UL=UL,
        UR=UR,
        star_left=star_left,
        star_middle=star_middle,
        star_right=star_right,
        config=config,
        ustar=ustar,
        vstar=vstar,
        wave1_speeds=w1,
        sigma2=sigma2,
        sigma3=sigma3,
        wave4_speeds=w4,
    )


def _fan1_state(fan: WaveFan, s: float) -> ConservedState:
    inv = core.to_invariants(fan.UL)
    u = 2.0 * s / 3.0
    v = core.v_from_eta(u, inv.eta, v_hint=inv.v)
    return core.from_primitive_invariants(u, inv.xi, inv.tau, v)


def _fan4_state(fan: WaveFan, s: float) -> ConservedState:
    tauR = fan.UR.g / fan.UR.q
    v = 2.0 * (s - fan.ustar) / 3.0
    g = (v * tauR) ** 0.5
    return ConservedState(fan.UR.f, fan.UR.b, g, g / tauR)


def sample(fan: WaveFan, s: float) -> ConservedState:
    """Self-similar solution evaluated at x/t = s.

    At a discontinuity the state on the right side is returned; both
    contacts and shocks follow this convention.
    """
    if s < fan.wave1_speeds[0]:
        return fan.UL
    if s < fan.wave1_speeds[1]:
        return _fan1_state(fan, s)
    if s < fan.sigma2:
        return fan.star_left
    if s < fan.sigma3:
        return fan.star_middle
    if s < fan.wave4_speeds[0]:
        return fan.star_right
    if s < fan.wave4_speeds[1]:
        return _fan4_state(fan, s)
    return fan.UR


def sample_many(fan: WaveFan, s) -> np.ndarray:
    """Vectorized :func:`sample`; returns shape (4, len(s))."""
    s = np.asarray(s, dtype=float)
    out = np.empty((4, s.shape[0]))
    regions = [
        (s < fan.wave1_speeds[0], fan.UL),
        ((s >= fan.wave1_speeds[1]) & (s < fan.sigma2), fan.star_left),
        ((s >= fan.sigma2) & (s < fan.sigma3), fan.star_middle),
        ((s >= fan.sigma3) & (s < fan.wave4_speeds[0]), fan.star_right),
        (s >= fan.wave4_speeds[1], fan.UR),
    ]
    for mask, state in regions:
        out[0, mask] = state.f
        out[1, mask] = state.b
        out[2, mask] = state.g
        out[3, mask] = state.q
    in1 = (s >= fan.wave1_speeds[0]) & (s < fan.wave1_speeds[1])
    if np.any(in1):
        inv = core.to_invariants(fan.UL)
        u = 2.0 * s[in1] / 3.0
        v = core.v_from_eta_arrays(u, np.full(u.shape, inv.eta), np.full(u.shape, inv.v))
        f = np.sqrt(u * inv.xi)
        g = np.sqrt(v * inv.tau)
        out[0, in1] = f
        out[1, in1] = u / f
        out[2, in1] = g
        out[3, in1] = g / inv.tau
    in4 = (s >= fan.wave4_speeds[0]) & (s < fan.wave4_speeds[1])
    if np.any(in4):
        tauR = fan.UR.g / fan.UR.q
        v = 2.0 * (s[in4] - fan.ustar) / 3.0
        g = np.sqrt(v * tauR)
        out[0, in4] = fan.UR.f
        out[1, in4] = fan.UR.b
        out[2, in4] = g
        out[3, in4] = g / tauR
    return out


def rh_residual(Ul: ConservedState, Ur: ConservedState, sigma: float) -> np.ndarray:
    """Rankine-Hugoniot defect sigma [U] - [F(U)] of a discontinuity."""
    jump = Ur.as_array() - Ul.as_array()
    return sigma * jump - (core.flux(Ur) - core.flux(Ul))
