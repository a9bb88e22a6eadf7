"""Second-order interface solver: time derivatives of the star states.

Given left/right traces and slopes at a cell interface, the routines
here resolve the local wave fan at t = 0+ and return the instantaneous
time derivative of U along x/t = 0 together with the interface state
itself.  The derivation works in Riemann-invariant coordinates: each
wave family transports one invariant whose time derivative on the data
side is known exactly (the interior equations reduce to advection), and
the way a 1-rarefaction or 1-shock rescales those derivatives is
available in closed form.  The resulting 6x6 linear system splits into
three 2x2 blocks solved in sequence:

  1. (f_t, b_t) in the right star region from the u and xi relations of
     the 4-wave; (f_t, b_t) on the left of the u-contact from the same
     u row plus the rescaled xi relation of the 1-wave.
  2. (g_t, q_t) left of the v-contact from the 1-wave's third relation
     (eta row for a rarefaction, the Hugoniot coefficient row for a
     shock) combined with the left tau relation.
  3. (g_t, q_t) right of the v-contact from continuity of v_t across it
     and the right tau relation carried by the 4-wave.

Nearly-equal traces short-circuit to the acoustic solve, the exact
linearization at the common state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core, riemann
from .core import ConservedState
from .errors import ConfigMismatch, DegenerateState, DomainError, SingularSystem
from .riemann import WaveFan, WaveKind

__all__ = [
    "SlopeData",
    "StarDerivatives",
    "ShockCoefficients",
    "lax_wendroff_time_derivs",
    "invariant_time_derivs_left",
    "invariant_time_derivs_right",
    "upsilon_tau_left",
    "fan_expansion_ratio",
    "rarefaction1_system",
    "shock1_coefficients",
    "shock1_system",
    "shock4_relations",
    "rarefaction4_relations",
    "acoustic_solve",
    "assemble_and_solve",
    "grp_interface",
    "batch_interface",
]

# Traces closer than this (relative sup norm) take the acoustic path.
ACOUSTIC_TOL = 1e-12

_PIVOT_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class SlopeData:
    """Spatial slopes of the two traces meeting at an interface."""

    dUL: np.ndarray
    dUR: np.ndarray


@dataclass(frozen=True, eq=False)
class StarDerivatives:
    """Time derivatives of U in the three star regions."""

    dL: np.ndarray
    dM: np.ndarray
    dR: np.ndarray


@dataclass(frozen=True, eq=False)
class ShockCoefficients:
    """Coefficient bundle of the 1-shock derivative relation.

    conv_star/conv_data hold the three x-to-t conversion factors at the
    star and data states, deltas the six geometric combinations of the
    Hugoniot, row_star/row_data the assembled coefficient rows
    multiplying (f_t, b_t, g_t, q_t) on either side.
    """

    sigma1: float
    conv_star: np.ndarray
    conv_data: np.ndarray
    deltas: np.ndarray
    row_star: np.ndarray
    row_data: np.ndarray


def lax_wendroff_time_derivs(U, dU) -> np.ndarray:
    """Data-side time derivative -DF(U) dU of a smooth trace."""
    dU = np.asarray(dU, dtype=float)
    return -core.jacobian(U) @ dU


def invariant_time_derivs_left(UL, dUL):
    """Time derivatives (xi_t, tau_t, eta_t, u_t) of the left trace.

    These follow from the interior advection forms: xi rides at u/2,
    tau at u + v/2, eta at u + 3v/2 and u at 3u/2, so each time
    derivative is minus that speed times the slope of the invariant.
    """
    f, b, g, q = UL.f, UL.b, UL.g, UL.q
    df, db, dg, dq = (float(c) for c in dUL)
    u = f * b
    v = g * q
    du = b * df + f * db
    dv = q * dg + g * dq
    dxi = df / b - f * db / (b * b)
    dtau = dg / q - g * dq / (q * q)
    xi_t = -0.5 * u * dxi
    tau_t = -(u + 0.5 * v) * dtau
    eta_t = -(u + 1.5 * v) * v**-0.25 * (du + (0.75 - u / (4.0 * v)) * dv)
    u_t = -1.5 * u * du
    return xi_t, tau_t, eta_t, u_t


def invariant_time_derivs_right(UR, dUR):
    """Time derivatives (xi_t, tau_t, u_t) of the right trace."""
    f, b, g, q = UR.f, UR.b, UR.g, UR.q
    df, db, dg, dq = (float(c) for c in dUR)
    u = f * b
    v = g * q
    du = b * df + f * db
    dxi = df / b - f * db / (b * b)
    dtau = dg / q - g * dq / (q * q)
    return -0.5 * u * dxi, -(u + 0.5 * v) * dtau, -1.5 * u * du


def upsilon_tau_left(v, UL) -> float:
    """Amplification kernel of the left tau derivative through a
    1-rarefaction, evaluated at interior value v.

    Equals u_L - v_L at v = v_L and tends to 0 for v -> 0+.
    """
    uL = UL.f * UL.b
    vL = UL.g * UL.q
    return v**0.75 * vL**-0.5 * (vL**-0.25 * (uL + vL) - 2.0 * v**0.75)


def _fan1_point(fan: WaveFan, beta: float):
    """Primitive state on the 1-rarefaction ray with slope beta."""
    inv = core.to_invariants(fan.UL)
    u = 2.0 * beta / 3.0
    v = core.v_from_eta(u, inv.eta, v_hint=inv.v)
    st = core.from_primitive_invariants(u, inv.xi, inv.tau, v)
    return st, u, v


def fan_expansion_ratio(side, fan: WaveFan, coordinate) -> float:
    """Ratio by which a rarefaction fan rescales the transported
    derivative between its head and the given characteristic
    coordinate (the ray slope at t = 0).
    """
    if side == "left":
        if fan.config.wave1 is not WaveKind.RAREFACTION:
            raise ConfigMismatch("left fan ratio needs a 1-rarefaction")
        _require_in_fan(coordinate, fan.wave1_speeds)
        inv = core.to_invariants(fan.UL)
        v = core.v_from_eta(2.0 * coordinate / 3.0, inv.eta, v_hint=inv.v)
        return (inv.v / v) ** 0.75
    if side == "right":
        if fan.config.wave4 is not WaveKind.RAREFACTION:
            raise ConfigMismatch("right fan ratio needs a 4-rarefaction")
        _require_in_fan(coordinate, fan.wave4_speeds)
        uR = fan.UR.f * fan.UR.b
        vR = fan.UR.g * fan.UR.q
        v = 2.0 * (coordinate - uR) / 3.0
        return (uR - 3.0 * vR) / (uR - 3.0 * v)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _require_in_fan(coord, speeds):
    lo, hi = speeds
    tol = 1e-10 * max(1.0, abs(lo), abs(hi))
    if not (lo - tol <= coord <= hi + tol):
        raise DomainError(f"coordinate {coord} outside fan [{lo}, {hi}]")


def rarefaction1_system(fan: WaveFan, UL, dUL, beta):
    """Derivative relations carried to the ray beta inside a
    1-rarefaction.

    Returns (A, D) with A of shape (3, 4): the xi, tau and eta rows
    evaluated at the fan state, and D the transported right-hand sides.
    At beta equal to the fan head the rows reduce to the unscaled left
    invariant derivatives (the eta row times U_t gives v^(1/4) eta_t).
    """
    if fan.config.wave1 is not WaveKind.RAREFACTION:
        raise ConfigMismatch("1-wave is not a rarefaction")
    _require_in_fan(beta, fan.wave1_speeds)
    st, u, v = _fan1_point(fan, beta)
    f, b, g, q = st.f, st.b, st.g, st.q
    uL = UL.f * UL.b
    vL = UL.g * UL.q
    xi_t, tau_t, eta_t, _ = invariant_time_derivs_left(UL, dUL)
    A = np.array(
        [
            [1.0 / b, -f / (b * b), 0.0, 0.0],
            [0.0, 0.0, 1.0 / q, -g / (q * q)],
            [b, f, (3.0 * v - u) / (4.0 * g), (3.0 * v - u) / (4.0 * q)],
        ]
    )
    if abs(2.0 * uL + vL) < _PIVOT_TOL * max(1.0, abs(uL), vL):
        raise DegenerateState("tau transport degenerates at 2 u_L + v_L = 0")
    D = np.array(
        [
            (u / uL) ** 1.5 * xi_t,
            upsilon_tau_left(v, UL)
            / (2.0 * uL + vL)
            * tau_t
            * (2.0 * u + v)
            / (u - v),
            (3.0 * vL - uL)
            / ((2.0 * uL + 3.0 * vL) * vL**0.75)
            * eta_t
            * (2.0 * u + 3.0 * v)
            * v
            / (3.0 * v - u),
        ]
    )
    return A, D


def shock1_coefficients(fan: WaveFan, UL) -> ShockCoefficients:
    """Coefficients of the derivative relation across a 1-shock."""
    if fan.config.wave1 is not WaveKind.SHOCK:
        raise ConfigMismatch("1-wave is not a shock")
    fL, bL, gL, qL = UL.f, UL.b, UL.g, UL.q
    uL = fL * bL
    vL = gL * qL
    fs = fan.star_left.f
    bs = fan.star_left.b
    gs = fan.star_left.g
    qs = fan.star_left.q
    us = fan.ustar
    vs = fan.vstar
    sigma = bL * (fL * fL + fL * fs + fs * fs) / (2.0 * fL)
    for u_, v_ in ((us, vs), (uL, vL)):
        if abs(2.0 * u_ + v_) < _PIVOT_TOL * max(1.0, abs(u_), v_):
            raise DegenerateState("conversion factors degenerate at 2u + v = 0")
    d1 = vL * gL + (uL - us) * (gL + 0.5 * gs) - fs * bL * (gL - 0.5 * gs)
    d2 = bL * (gs + gL)
    d3 = fL * (gs + gL) + fs * (gs - gL)
    d4 = 2.0 * vL + uL - us - fs * bL
    d5 = bs * (gL + gs) + bL * (gL - gs)
    d6 = fs * (gL + gs)

    def conv(u_, v_):
        t1 = 2.0 / (2.0 * u_ + 3.0 * v_)
        t2 = 2.0 / ((2.0 * u_ + 3.0 * v_) * (2.0 * u_ + v_))
        t3 = 4.0 * (u_ + v_) / ((2.0 * u_ + 3.0 * v_) * (2.0 * u_ + v_))
        return t1, t2, t3

    t1s, t2s, t3s = conv(us, vs)
    t1L, t2L, t3L = conv(uL, vL)
    row_star = np.array(
        [
            (1.0 - 4.0 * sigma / (3.0 * us)) * d5
            + (2.0 * sigma / (3.0 * fs * fs)) * d6
            + (2.0 * sigma * t1s / (3.0 * fs)) * (qs * gs * gs + 2.0 * d1),
            (1.0 - 4.0 * sigma / (3.0 * us)) * d6
            + (2.0 * sigma / (3.0 * bs * bs)) * d5
            + (2.0 * sigma * t1s / (3.0 * bs)) * (qs * gs * gs + 2.0 * d1),
            sigma * t2s * (gs * qs) ** 2 + (2.0 * d1 / gs) * (1.0 - sigma * t3s),
            gs * gs * (1.0 - sigma * t3s) + 2.0 * gs * sigma * d1 * t2s,
        ]
    )
    row_data = np.array(
        [
            d2 * (1.0 - 4.0 * sigma / (3.0 * uL))
            + (2.0 * sigma / (3.0 * fL * fL)) * d3
            + (2.0 * sigma * t1L / (3.0 * fL)) * (qL * gL * gL + d4 * gL),
            (2.0 * sigma / (3.0 * bL * bL)) * d2
            + d3 * (1.0 - 4.0 * sigma / (3.0 * uL))
            + (2.0 * sigma * t1L / (3.0 * bL)) * (qL * gL * gL + d4 * gL),
            (gL * qL) ** 2 * sigma * t2L + (1.0 - sigma * t3L) * d4,
            gL * gL * (1.0 - sigma * t3L + sigma * t2L * d4),
        ]
    )
    return ShockCoefficients(
        sigma1=sigma,
        conv_star=np.array([t1s, t2s, t3s]),
        conv_data=np.array([t1L, t2L, t3L]),
        deltas=np.array([d1, d2, d3, d4, d5, d6]),
        row_star=row_star,
        row_data=row_data,
    )


def shock1_system(fan: WaveFan, UL, dUL):
    """Derivative relations across a 1-shock: xi row, tau row and the
    Hugoniot coefficient row, each at the left star state."""
    co = shock1_coefficients(fan, UL)
    fs = fan.star_left.f
    bs = fan.star_left.b
    gs = fan.star_left.g
    qs = fan.star_left.q
    us = fan.ustar
    vs = fan.vstar
    uL = UL.f * UL.b
    vL = UL.g * UL.q
    xi_t, tau_t, _, _ = invariant_time_derivs_left(UL, dUL)
    denom = 2.0 * us + vs - 2.0 * co.sigma1
    if abs(denom) < _PIVOT_TOL * max(1.0, abs(us), vs, abs(co.sigma1)):
        raise DegenerateState("tau relation degenerates: sigma1 matches u* + v*/2")
    A = np.array(
        [
            [1.0 / bs, -fs / (bs * bs), 0.0, 0.0],
            [0.0, 0.0, 1.0 / qs, -gs / (qs * qs)],
            co.row_star,
        ]
    )
    D = np.array(
        [
            (us / uL) ** 1.5 * xi_t,
            tau_t
            / (2.0 * uL + vL)
            * (2.0 * us + vs)
            * (2.0 * uL + vL - 2.0 * co.sigma1)
            / denom,
            float(co.row_data @ lax_wendroff_time_derivs(UL, dUL)),
        ]
    )
    return A, D


def shock4_relations(fan: WaveFan, UR, dUR):
    """Derivative relations across a 4-shock: u row, xi row and the
    transported tau row, at the right star state."""
    if fan.config.wave4 is not WaveKind.SHOCK:
        raise ConfigMismatch("4-wave is not a shock")
    fR, bR, gR, qR = UR.f, UR.b, UR.g, UR.q
    gs = fan.star_right.g
    qs = fan.star_right.q
    us = fan.ustar
    vs = fan.vstar
    vR = gR * qR
    df, db, dg, dq = (float(c) for c in dUR)
    du = bR * df + fR * db
    dtau = dg / qR - gR * dq / (qR * qR)
    uR = fR * bR
    A = np.array(
        [
            [bR, fR, 0.0, 0.0],
            [1.0 / bR, -fR / (bR * bR), 0.0, 0.0],
            [0.0, 0.0, 1.0 / qs, -gs / (qs * qs)],
        ]
    )
    D = np.array(
        [
            -1.5 * uR * du,
            -0.5 * uR * (df / bR - fR * db / (bR * bR)),
            -0.5 * (2.0 * us + vs) * np.sqrt(vs / vR) * dtau,
        ]
    )
    return A, D


def rarefaction4_relations(fan: WaveFan, UR, dUR, alpha):
    """Derivative relations on the ray alpha inside a 4-rarefaction.

    At alpha equal to the fan tail (adjacent to the star region) the
    matrix and vector coincide with :func:`shock4_relations` evaluated
    at a zero-strength 4-shock of the same star value.
    """
    if fan.config.wave4 is not WaveKind.RAREFACTION:
        raise ConfigMismatch("4-wave is not a rarefaction")
    _require_in_fan(alpha, fan.wave4_speeds)
    fR, bR, gR, qR = UR.f, UR.b, UR.g, UR.q
    uR = fR * bR
    vR = gR * qR
    tauR = gR / qR
    v = 2.0 * (alpha - uR) / 3.0
    g = np.sqrt(v * tauR)
    q = g / tauR
    df, db, dg, dq = (float(c) for c in dUR)
    du = bR * df + fR * db
    dtau = dg / qR - gR * dq / (qR * qR)
    A = np.array(
        [
            [bR, fR, 0.0, 0.0],
            [1.0 / bR, -fR / (bR * bR), 0.0, 0.0],
            [0.0, 0.0, 1.0 / q, -g / (q * q)],
        ]
    )
    D = np.array(
        [
            -1.5 * uR * du,
            -0.5 * uR * (df / bR - fR * db / (bR * bR)),
            -0.5 * (2.0 * uR + v) * np.sqrt(v / vR) * dtau,
        ]
    )
    return A, D


def _solve_fb(P, Q, f, b):
    """Invert the 2x2 block {b f_t + f b_t = P, f_t/b - f b_t/b^2 = Q}."""
    ft = (P + b * b * Q) / (2.0 * b)
    bt = (P - b * b * Q) / (2.0 * f)
    return ft, bt


def _solve_gq(P, Q, g, q):
    """Same pattern for {q g_t + g q_t = P, g_t/q - g q_t/q^2 = Q}."""
    gt = (P + q * q * Q) / (2.0 * q)
    qt = (P - q * q * Q) / (2.0 * g)
    return gt, qt


def acoustic_solve(U0, dUL, dUR) -> StarDerivatives:
    """Star derivatives in the degenerate case UL = UR = U0.

    The wave fan collapses onto the characteristics of U0; with equal
    slopes the result reduces to the Lax-Wendroff derivative
    -DF(U0) dU exactly.
    """
    f, b, g, q = U0.f, U0.b, U0.g, U0.q
    u = f * b
    v = g * q
    dfL, dbL, dgL, dqL = (float(c) for c in dUL)
    dfR, dbR, dgR, dqR = (float(c) for c in dUR)
    duL = b * dfL + f * dbL
    duR = b * dfR + f * dbR
    dvL = q * dgL + g * dqL
    dxiL = dfL / b - f * dbL / (b * b)
    dxiR = dfR / b - f * dbR / (b * b)
    dtauL = dgL / q - g * dqL / (q * q)
    dtauR = dgR / q - g * dqR / (q * q)

    P = -1.5 * u * duR
    ftL, btL = _solve_fb(P, -0.5 * u * dxiL, f, b)
    ftR, btR = _solve_fb(P, -0.5 * u * dxiR, f, b)
    W = duL + (0.75 - u / (4.0 * v)) * dvL
    Vt = 4.0 * v / (3.0 * v - u) * (1.5 * u * duR - (u + 1.5 * v) * W)
    gtL, qtL = _solve_gq(Vt, -(u + 0.5 * v) * dtauL, g, q)
    gtR, qtR = _solve_gq(Vt, -(u + 0.5 * v) * dtauR, g, q)
    return StarDerivatives(
        dL=np.array([ftL, btL, gtL, qtL]),
        dM=np.array([ftR, btR, gtL, qtL]),
        dR=np.array([ftR, btR, gtR, qtR]),
    )


def _require_fan_matches(fan: WaveFan, UL, UR):
    same = np.allclose(
        fan.UL.as_array(), UL.as_array(), rtol=1e-12, atol=0.0
    ) and np.allclose(fan.UR.as_array(), UR.as_array(), rtol=1e-12, atol=0.0)
    if not same:
        raise ConfigMismatch("fan was solved from different data")


def assemble_and_solve(fan: WaveFan, UL, dUL, UR, dUR) -> StarDerivatives:
    """Solve the full interface derivative system for a resolved fan.

    Sequential 2x2 blocks; see the module docstring for the layout.
    Raises SingularSystem if the (g, q) pivot of a 1-shock degenerates.
    """
    _require_fan_matches(fan, UL, UR)
    uL = UL.f * UL.b
    vL = UL.g * UL.q
    us = fan.ustar
    vs = fan.vstar
    fsl, bsl = fan.star_left.f, fan.star_left.b
    gsl, qsl = fan.star_left.g, fan.star_left.q
    gsr, qsr = fan.star_right.g, fan.star_right.q
    fR, bR = fan.UR.f, fan.UR.b
    vR = fan.UR.g * fan.UR.q

    xi_tL, tau_tL, eta_tL, _ = invariant_time_derivs_left(UL, dUL)
    xi_tR, _, u_tR = invariant_time_derivs_right(UR, dUR)
    dgR, dqR = float(dUR[2]), float(dUR[3])
    dtauR = dgR / UR.q - UR.g * dqR / (UR.q * UR.q)
    dgL, dqL = float(dUL[2]), float(dUL[3])
    dtauL = dgL / UL.q - UL.g * dqL / (UL.q * UL.q)

    D1 = u_tR
    ftL, btL = _solve_fb(D1, (us / uL) ** 1.5 * xi_tL, fsl, bsl)
    ftR, btR = _solve_fb(D1, xi_tR, fR, bR)

    if fan.config.wave1 is WaveKind.RAREFACTION:
        dfL, dbL = float(dUL[0]), float(dUL[1])
        duL = UL.b * dfL + UL.f * dbL
        dvL = UL.q * dgL + UL.g * dqL
        WL = duL + (0.75 - uL / (4.0 * vL)) * dvL
        D3 = (
            -(3.0 * vL - uL)
            / (2.0 * vL)
            * WL
            * (2.0 * us + 3.0 * vs)
            * vs
            / (3.0 * vs - us)
        )
        P3 = D3 - D1
        a3g = (3.0 * vs - us) / (4.0 * gsl)
        a3q = (3.0 * vs - us) / (4.0 * qsl)
        D4 = (
            -0.5
            * dtauL
            * upsilon_tau_left(vs, UL)
            * (2.0 * us + vs)
            / (us - vs)
        )
    else:
        co = shock1_coefficients(fan, UL)
        rhs3 = float(co.row_data @ lax_wendroff_time_derivs(UL, dUL))
        P3 = rhs3 - co.row_star[0] * ftL - co.row_star[1] * btL
        a3g = co.row_star[2]
        a3q = co.row_star[3]
        denom = 2.0 * us + vs - 2.0 * co.sigma1
        if abs(denom) < _PIVOT_TOL * max(1.0, abs(us), vs, abs(co.sigma1)):
            raise DegenerateState("tau relation degenerates across the 1-shock")
        D4 = (
            -0.5
            * dtauL
            * (2.0 * us + vs)
            * (2.0 * uL + vL - 2.0 * co.sigma1)
            / denom
        )

    c4g = 1.0 / qsl
    c4q = -gsl / (qsl * qsl)
    det = a3g * c4q - a3q * c4g
    scale = max(abs(a3g), abs(a3q), 1.0) * max(abs(c4g), abs(c4q), 1.0)
    if abs(det) < _PIVOT_TOL * scale:
        raise SingularSystem("(g, q) block pivot vanished")
    gtL = (P3 * c4q - a3q * D4) / det
    qtL = (a3g * D4 - c4g * P3) / det

    P5 = qsl * gtL + gsl * qtL
    D6 = -0.5 * dtauR * (2.0 * us + vs) * np.sqrt(vs / vR)
    gtR, qtR = _solve_gq(P5, D6, gsr, qsr)

    return StarDerivatives(
        dL=np.array([ftL, btL, gtL, qtL]),
        dM=np.array([ftR, btR, gtL, qtL]),
        dR=np.array([ftR, btR, gtR, qtR]),
    )


def grp_interface(UL, dUL, UR, dUR):
    """Interface state and its time derivative at x/t = 0.

    Returns (U0, dUdt).  The derivative is dM when the v-contact moves
    right (sigma3 > 0) and dR otherwise; at sigma3 = 0 the two give the
    same flux, so the choice does not affect the scheme.
    """
    dUL = np.asarray(dUL, dtype=float)
    dUR = np.asarray(dUR, dtype=float)
    gap = max(
        abs(UL.f - UR.f), abs(UL.b - UR.b), abs(UL.g - UR.g), abs(UL.q - UR.q)
    )
    scale = max(1.0, abs(UL.f), abs(UL.b), abs(UL.g), abs(UL.q))
    if gap <= ACOUSTIC_TOL * scale:
        d = acoustic_solve(UL, dUL, dUR)
        sigma3 = UL.f * UL.b + 0.5 * UL.g * UL.q
        U0 = UL
    else:
        fan = riemann.solve_star_states(UL, UR)
        d = assemble_and_solve(fan, UL, dUL, UR, dUR)
        sigma3 = fan.sigma3
        U0 = riemann.sample(fan, 0.0)
    return U0, (d.dM if sigma3 > 0.0 else d.dR)


# ---------------------------------------------------------------------------
# vectorized production kernel


def _batch_general(UL, dUL, UR, dUR):
    fL, bL, gL, qL = UL
    fR, bR, gR, qR = UR
    dfL, dbL, dgL, dqL = dUL
    dfR, dbR, dgR, dqR = dUR

    star = riemann.star_states_arrays(fL, bL, gL, qL, fR, bR, gR, qR)
    us = star["ustar"]
    vs = star["vstar"]
    fs = star["fstar"]
    bs = star["bstar"]
    gsl = star["gstarL"]
    qsl = star["qstarL"]
    gsr = star["gstarR"]
    qsr = star["qstarR"]
    uL = star["uL"]
    vL = star["vL"]
    uR = star["uR"]
    vR = star["vR"]
    shock1 = star["w1_is_shock"]

    duL = bL * dfL + fL * dbL
    dvL = qL * dgL + gL * dqL
    duR = bR * dfR + fR * dbR
    dxiL = dfL / bL - fL * dbL / (bL * bL)
    dxiR = dfR / bR - fR * dbR / (bR * bR)
    dtauL = dgL / qL - gL * dqL / (qL * qL)
    dtauR = dgR / qR - gR * dqR / (qR * qR)

    D1 = -1.5 * uR * duR
    D2 = (us / uL) ** 1.5 * (-0.5 * uL * dxiL)
    ftL = (D1 + bs * bs * D2) / (2.0 * bs)
    btL = (D1 - bs * bs * D2) / (2.0 * fs)
    D2R = -0.5 * uR * dxiR
    ftR = (D1 + bR * bR * D2R) / (2.0 * bR)
    btR = (D1 - bR * bR * D2R) / (2.0 * fR)

    n = us.shape[0]
    P3 = np.empty(n)
    a3g = np.empty(n)
    a3q = np.empty(n)
    D4 = np.empty(n)

    idx_r = np.nonzero(~shock1)[0]
    if idx_r.size:
        i = idx_r
        WL = duL[i] + (0.75 - uL[i] / (4.0 * vL[i])) * dvL[i]
        D3 = (
            -(3.0 * vL[i] - uL[i])
            / (2.0 * vL[i])
            * WL
            * (2.0 * us[i] + 3.0 * vs[i])
            * vs[i]
            / (3.0 * vs[i] - us[i])
        )
        P3[i] = D3 - D1[i]
        a3g[i] = (3.0 * vs[i] - us[i]) / (4.0 * gsl[i])
        a3q[i] = (3.0 * vs[i] - us[i]) / (4.0 * qsl[i])
        ups = vs[i] ** 0.75 * vL[i] ** -0.5 * (
            vL[i] ** -0.25 * (uL[i] + vL[i]) - 2.0 * vs[i] ** 0.75
        )
        D4[i] = -0.5 * dtauL[i] * ups * (2.0 * us[i] + vs[i]) / (us[i] - vs[i])

    idx_s = np.nonzero(shock1)[0]
    if idx_s.size:
        i = idx_s
        sigma = star["sigma1"][i]
        fLi, bLi, gLi, qLi = fL[i], bL[i], gL[i], qL[i]
        uLi, vLi = uL[i], vL[i]
        fsi, bsi, gsi, qsi = fs[i], bs[i], gsl[i], qsl[i]
        usi, vsi = us[i], vs[i]
        if np.any(
            np.abs(2.0 * usi + vsi)
            < _PIVOT_TOL * np.maximum(1.0, np.maximum(np.abs(usi), vsi))
        ) or np.any(
            np.abs(2.0 * uLi + vLi)
            < _PIVOT_TOL * np.maximum(1.0, np.maximum(np.abs(uLi), vLi))
        ):
            raise DegenerateState("conversion factors degenerate at 2u + v = 0")
        d1 = vLi * gLi + (uLi - usi) * (gLi + 0.5 * gsi) - fsi * bLi * (
            gLi - 0.5 * gsi
        )
        d2 = bLi * (gsi + gLi)
        d3 = fLi * (gsi + gLi) + fsi * (gsi - gLi)
        d4 = 2.0 * vLi + uLi - usi - fsi * bLi
        d5 = bsi * (gLi + gsi) + bLi * (gLi - gsi)
        d6 = fsi * (gLi + gsi)
        t1s = 2.0 / (2.0 * usi + 3.0 * vsi)
        t2s = 2.0 / ((2.0 * usi + 3.0 * vsi) * (2.0 * usi + vsi))
        t3s = 4.0 * (usi + vsi) / ((2.0 * usi + 3.0 * vsi) * (2.0 * usi + vsi))
        t1L = 2.0 / (2.0 * uLi + 3.0 * vLi)
        t2L = 2.0 / ((2.0 * uLi + 3.0 * vLi) * (2.0 * uLi + vLi))
        t3L = 4.0 * (uLi + vLi) / ((2.0 * uLi + 3.0 * vLi) * (2.0 * uLi + vLi))
        As = (
            (1.0 - 4.0 * sigma / (3.0 * usi)) * d5
            + (2.0 * sigma / (3.0 * fsi * fsi)) * d6
            + (2.0 * sigma * t1s / (3.0 * fsi)) * (qsi * gsi * gsi + 2.0 * d1)
        )
        Bs = (
            (1.0 - 4.0 * sigma / (3.0 * usi)) * d6
            + (2.0 * sigma / (3.0 * bsi * bsi)) * d5
            + (2.0 * sigma * t1s / (3.0 * bsi)) * (qsi * gsi * gsi + 2.0 * d1)
        )
        Cs = sigma * t2s * (gsi * qsi) ** 2 + (2.0 * d1 / gsi) * (1.0 - sigma * t3s)
        Ds = gsi * gsi * (1.0 - sigma * t3s) + 2.0 * gsi * sigma * d1 * t2s
        AL = (
            d2 * (1.0 - 4.0 * sigma / (3.0 * uLi))
            + (2.0 * sigma / (3.0 * fLi * fLi)) * d3
            + (2.0 * sigma * t1L / (3.0 * fLi)) * (qLi * gLi * gLi + d4 * gLi)
        )
        BL = (
            (2.0 * sigma / (3.0 * bLi * bLi)) * d2
            + d3 * (1.0 - 4.0 * sigma / (3.0 * uLi))
            + (2.0 * sigma * t1L / (3.0 * bLi)) * (qLi * gLi * gLi + d4 * gLi)
        )
        CL = (gLi * qLi) ** 2 * sigma * t2L + (1.0 - sigma * t3L) * d4
        DL = gLi * gLi * (1.0 - sigma * t3L + sigma * t2L * d4)
        # Lax-Wendroff time derivatives of the left trace
        ftd = -(uLi * dfL[i] + 0.5 * fLi * fLi * dbL[i])
        btd = -(0.5 * bLi * bLi * dfL[i] + uLi * dbL[i])
        gtd = -(
            gLi * bLi * dfL[i]
            + fLi * gLi * dbL[i]
            + (uLi + vLi) * dgL[i]
            + 0.5 * gLi * gLi * dqL[i]
        )
        qtd = -(
            bLi * qLi * dfL[i]
            + fLi * qLi * dbL[i]
            + 0.5 * qLi * qLi * dgL[i]
            + (uLi + vLi) * dqL[i]
        )
        rhs3 = AL * ftd + BL * btd + CL * gtd + DL * qtd
        P3[i] = rhs3 - As * ftL[i] - Bs * btL[i]
        a3g[i] = Cs
        a3q[i] = Ds
        denom = 2.0 * usi + vsi - 2.0 * sigma
        if np.any(
            np.abs(denom)
            < _PIVOT_TOL * np.maximum(1.0, np.maximum(np.abs(usi), vsi))
        ):
            raise DegenerateState("tau relation degenerates across a 1-shock")
        D4[i] = (
            -0.5
            * dtauL[i]
            * (2.0 * usi + vsi)
            * (2.0 * uLi + vLi - 2.0 * sigma)
            / denom
        )

    c4g = 1.0 / qsl
    c4q = -gsl / (qsl * qsl)
    det = a3g * c4q - a3q * c4g
    pivot_scale = np.maximum(np.abs(a3g), np.maximum(np.abs(a3q), 1.0)) * np.maximum(
        np.abs(c4g), np.maximum(np.abs(c4q), 1.0)
    )
    if np.any(np.abs(det) < _PIVOT_TOL * pivot_scale):
        raise SingularSystem("(g, q) block pivot vanished")
    gtL = (P3 * c4q - a3q * D4) / det
    qtL = (a3g * D4 - c4g * P3) / det

    P5 = qsl * gtL + gsl * qtL
    D6 = -0.5 * dtauR * (2.0 * us + vs) * np.sqrt(vs / vR)
    gtR = (P5 + qsr * qsr * D6) / (2.0 * qsr)
    qtR = (P5 - qsr * qsr * D6) / (2.0 * gsr)

    mid = star["sigma3"] > 0.0
    U0 = np.stack(
        [fR, bR, np.where(mid, gsl, gsr), np.where(mid, qsl, qsr)]
    )
    dUdt = np.stack(
        [ftR, btR, np.where(mid, gtL, gtR), np.where(mid, qtL, qtR)]
    )
    return U0, dUdt


def _batch_acoustic(U0, dUL, dUR):
    f, b, g, q = U0
    dfL, dbL, dgL, dqL = dUL
    dfR, dbR, dgR, dqR = dUR
    u = f * b
    v = g * q
    duL = b * dfL + f * dbL
    duR = b * dfR + f * dbR
    dvL = q * dgL + g * dqL
    dxiR = dfR / b - f * dbR / (b * b)
    dtauL = dgL / q - g * dqL / (q * q)
    dtauR = dgR / q - g * dqR / (q * q)

    P = -1.5 * u * duR
    QR = -0.5 * u * dxiR
    ftR = (P + b * b * QR) / (2.0 * b)
    btR = (P - b * b * QR) / (2.0 * f)
    W = duL + (0.75 - u / (4.0 * v)) * dvL
    Vt = 4.0 * v / (3.0 * v - u) * (1.5 * u * duR - (u + 1.5 * v) * W)
    DL = -(u + 0.5 * v) * dtauL
    DR = -(u + 0.5 * v) * dtauR
    gtL = (Vt + q * q * DL) / (2.0 * q)
    qtL = (Vt - q * q * DL) / (2.0 * g)
    gtR = (Vt + q * q * DR) / (2.0 * q)
    qtR = (Vt - q * q * DR) / (2.0 * g)

    mid = u + 0.5 * v > 0.0
    dUdt = np.stack(
        [ftR, btR, np.where(mid, gtL, gtR), np.where(mid, qtL, qtR)]
    )
    return np.stack([f, b, g, q]), dUdt


def batch_interface(UL, dUL, UR, dUR):
    """Vectorized :func:`grp_interface` over arrays of shape (4, M).

    Returns (U0, dUdt), both of shape (4, M).  Lanes whose traces agree
    to within the acoustic tolerance are dispatched to the linearized
    solve, the rest through the full fan resolution.
    """
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    dUL = np.asarray(dUL, dtype=float)
    dUR = np.asarray(dUR, dtype=float)
    gap = np.max(np.abs(UL - UR), axis=0)
    scale = np.maximum(1.0, np.max(np.abs(UL), axis=0))
    acoustic = gap <= ACOUSTIC_TOL * scale

    m = UL.shape[1]
    U0 = np.empty((4, m))
    dUdt = np.empty((4, m))
    idx_g = np.nonzero(~acoustic)[0]
    if idx_g.size:
        u0, dt = _batch_general(
            UL[:, idx_g], dUL[:, idx_g], UR[:, idx_g], dUR[:, idx_g]
        )
        U0[:, idx_g] = u0
        dUdt[:, idx_g] = dt
    idx_a = np.nonzero(acoustic)[0]
    if idx_a.size:
        u0, dt = _batch_acoustic(UL[:, idx_a], dUL[:, idx_a], dUR[:, idx_a])
        U0[:, idx_a] = u0
        dUdt[:, idx_a] = dt
    return U0, dUdt
