"""Finite-volume schemes on a uniform 1-d grid.

Three updates share the same conservative skeleton and differ only in
how they compute interface fluxes:

* godunov_step: piecewise-constant data, exact Riemann interface state.
* grp_step: piecewise-linear data; the interface solver returns the
  state and its time derivative, the flux is taken at the midpoint
  state U0 + dt/2 dU/dt, and the slopes are refreshed from the evolved
  interface values U0 + dt dU/dt.
* muscl_rk2_step: piecewise-linear reconstruction with exact Riemann
  interface states, advanced by Heun's two-stage method.

Cell averages are stored as an array of shape (4, N) in the order
(f, b, g, q).  Ghost cells implement periodic wrap or outflow copy
(outflow ghosts carry zero slope).
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import core, grp, riemann
from .errors import DegenerateState, StateSpaceViolation

__all__ = [
    "BoundaryCondition",
    "LimiterMode",
    "SchemeKind",
    "SchemeConfig",
    "GridState",
    "SimulationLog",
    "minmod3",
    "reconstruct_slopes",
    "apply_bc",
    "cfl_dt",
    "godunov_step",
    "grp_step",
    "muscl_rk2_step",
    "run_simulation",
]


class BoundaryCondition(enum.Enum):
    PERIODIC = "periodic"
    OUTFLOW = "outflow"


class LimiterMode(enum.Enum):
    MINMOD = "minmod"
    UNLIMITED_CENTRAL = "central"


class SchemeKind(enum.Enum):
    GODUNOV = "godunov"
    GRP2 = "grp"
    MUSCL_RK2 = "muscl"


@dataclass(frozen=True)
class SchemeConfig:
    scheme: SchemeKind = SchemeKind.GRP2
    cfl: float = 0.4
    theta: float = 1.0
    limiter: LimiterMode = LimiterMode.MINMOD
    continue_on_violation: bool = False


@dataclass(frozen=True, eq=False)
class GridState:
    """Cell averages plus per-cell slopes at one time level."""

    x_lo: float
    x_hi: float
    t: float
    averages: np.ndarray
    slopes: np.ndarray
    bc: BoundaryCondition

    @property
    def n_cells(self) -> int:
        return self.averages.shape[1]

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n_cells

    def centers(self) -> np.ndarray:
        return self.x_lo + (np.arange(self.n_cells) + 0.5) * self.dx

    def conserved_totals(self) -> np.ndarray:
        return self.dx * np.sum(self.averages, axis=1)


@dataclass
class SimulationLog:
    steps: int = 0
    dts: list = field(default_factory=list)
    conserved_start: np.ndarray | None = None
    conserved_end: np.ndarray | None = None
    wall_seconds: float = 0.0
    violations: list = field(default_factory=list)


def minmod3(a, b, c):
    """Componentwise three-argument minmod: 0 on any sign disagreement,
    otherwise the argument of smallest magnitude."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    pos = (a > 0) & (b > 0) & (c > 0)
    neg = (a < 0) & (b < 0) & (c < 0)
    out = np.where(pos, np.minimum(a, np.minimum(b, c)), 0.0)
    out = np.where(neg, np.maximum(a, np.maximum(b, c)), out)
    if out.ndim == 0:
        return float(out)
    return out


def _ghost_pad(U, S, bc):
    if bc is BoundaryCondition.PERIODIC:
        Ue = np.concatenate([U[:, -1:], U, U[:, :1]], axis=1)
        Se = np.concatenate([S[:, -1:], S, S[:, :1]], axis=1)
    else:
        Ue = np.concatenate([U[:, :1], U, U[:, -1:]], axis=1)
        Se = np.concatenate([np.zeros_like(S[:, :1]), S, np.zeros_like(S[:, :1])], axis=1)
    return Ue, Se


def apply_bc(grid: GridState):
    """Averages and slopes extended by one ghost cell per side."""
    return _ghost_pad(grid.averages, grid.slopes, grid.bc)


def reconstruct_slopes(U, bc, limiter, theta, dx):
    """Per-cell slopes from averages: limited one-sided/central minmod,
    or the plain central difference in UNLIMITED_CENTRAL mode."""
    Ue, _ = _ghost_pad(U, np.zeros_like(U), bc)
    central = (Ue[:, 2:] - Ue[:, :-2]) / (2.0 * dx)
    if limiter is LimiterMode.UNLIMITED_CENTRAL:
        return central
    dm = (U - Ue[:, :-2]) / dx
    dp = (Ue[:, 2:] - U) / dx
    return minmod3(theta * dm, central, theta * dp)


def cfl_dt(grid: GridState, cfl: float) -> float:
    """Time step cfl * dx / max |lambda| over all cells."""
    smax = core.max_wave_speed(*grid.averages)
    if not np.isfinite(smax) or smax <= 0.0:
        raise DegenerateState("no finite positive wave speed on the grid")
    return cfl * grid.dx / smax


def _validate(U, t, config):
    f, b, g, q = U
    bad = ~(
        np.isfinite(U).all(axis=0) & (f > 0.0) & (g > 0.0) & (q > 0.0) & (b < 0.0)
    )
    if not np.any(bad):
        return []
    cells = np.nonzero(bad)[0]
    if config.continue_on_violation:
        return list(cells)
    raise StateSpaceViolation(
        f"cell {cells[0]} left the admissible set at t = {t:.6g}",
        cell=int(cells[0]),
        time=t,
    )


def godunov_step(grid: GridState, config: SchemeConfig, dt=None) -> GridState:
    """First-order Godunov update (slopes ignored and left at zero)."""
    if dt is None:
        dt = cfl_dt(grid, config.cfl)
    dx = grid.dx
    Ue, _ = _ghost_pad(grid.averages, np.zeros_like(grid.averages), grid.bc)
    star = riemann.star_states_arrays(
        Ue[0, :-1], Ue[1, :-1], Ue[2, :-1], Ue[3, :-1],
        Ue[0, 1:], Ue[1, 1:], Ue[2, 1:], Ue[3, 1:],
    )
    f0, b0, g0, q0 = riemann.interface_state_arrays(star, Ue[0, 1:], Ue[1, 1:])
    F = np.stack(core.flux_arrays(f0, b0, g0, q0))
    Unew = grid.averages - (dt / dx) * (F[:, 1:] - F[:, :-1])
    _validate(Unew, grid.t + dt, config)
    return replace(grid, t=grid.t + dt, averages=Unew, slopes=np.zeros_like(Unew))


def grp_step(grid: GridState, config: SchemeConfig, dt=None) -> GridState:
    """Second-order update driven by the interface derivative solver."""
    if dt is None:
        dt = cfl_dt(grid, config.cfl)
    dx = grid.dx
    Ue, Se = apply_bc(grid)
    traceL = Ue[:, :-1] + 0.5 * dx * Se[:, :-1]
    traceR = Ue[:, 1:] - 0.5 * dx * Se[:, 1:]
    U0, Ut = grp.batch_interface(traceL, Se[:, :-1], traceR, Se[:, 1:])
    Umid = U0 + 0.5 * dt * Ut
    F = np.stack(core.flux_arrays(Umid[0], Umid[1], Umid[2], Umid[3]))
    Unew = grid.averages - (dt / dx) * (F[:, 1:] - F[:, :-1])
    _validate(Unew, grid.t + dt, config)

    Uend = U0 + dt * Ut
    central = (Uend[:, 1:] - Uend[:, :-1]) / dx
    if config.limiter is LimiterMode.UNLIMITED_CENTRAL:
        Snew = central
    else:
        Un_e, _ = _ghost_pad(Unew, np.zeros_like(Unew), grid.bc)
        dm = (Unew - Un_e[:, :-2]) / dx
        dp = (Un_e[:, 2:] - Unew) / dx
        Snew = minmod3(config.theta * dm, central, config.theta * dp)
    return replace(grid, t=grid.t + dt, averages=Unew, slopes=Snew)


def _muscl_rhs(U, bc, limiter, theta, dx):
    S = reconstruct_slopes(U, bc, limiter, theta, dx)
    Ue, Se = _ghost_pad(U, S, bc)
    traceL = Ue[:, :-1] + 0.5 * dx * Se[:, :-1]
    traceR = Ue[:, 1:] - 0.5 * dx * Se[:, 1:]
    star = riemann.star_states_arrays(
        traceL[0], traceL[1], traceL[2], traceL[3],
        traceR[0], traceR[1], traceR[2], traceR[3],
    )
    f0, b0, g0, q0 = riemann.interface_state_arrays(star, traceR[0], traceR[1])
    F = np.stack(core.flux_arrays(f0, b0, g0, q0))
    return -(F[:, 1:] - F[:, :-1]) / dx


def muscl_rk2_step(grid: GridState, config: SchemeConfig, dt=None) -> GridState:
    """MUSCL-Hancock style two-stage (Heun) update with exact Riemann
    interface states; slopes are recomputed from the averages at each
    stage."""
    if dt is None:
        dt = cfl_dt(grid, config.cfl)
    dx = grid.dx
    U = grid.averages
    k1 = _muscl_rhs(U, grid.bc, config.limiter, config.theta, dx)
    U1 = U + dt * k1
    _validate(U1, grid.t + dt, config)
    k2 = _muscl_rhs(U1, grid.bc, config.limiter, config.theta, dx)
    Unew = U + 0.5 * dt * (k1 + k2)
    _validate(Unew, grid.t + dt, config)
    Snew = reconstruct_slopes(Unew, grid.bc, config.limiter, config.theta, dx)
    return replace(grid, t=grid.t + dt, averages=Unew, slopes=Snew)


_STEPPERS = {
    SchemeKind.GODUNOV: godunov_step,
    SchemeKind.GRP2: grp_step,
    SchemeKind.MUSCL_RK2: muscl_rk2_step,
}


def run_simulation(grid: GridState, config: SchemeConfig, t_end: float):
    """March the given initial grid to t_end.

    The final step is clipped to land on t_end exactly.  Returns the
    final GridState and a SimulationLog with per-step dt, conserved
    totals at both ends and wall-clock time.
    """
    stepper = _STEPPERS[config.scheme]
    log = SimulationLog(conserved_start=grid.conserved_totals())
    start = time.perf_counter()
    eps = 1e-13 * max(1.0, abs(t_end))
    while grid.t < t_end - eps:
        dt = min(cfl_dt(grid, config.cfl), t_end - grid.t)
        grid = stepper(grid, config, dt)
        log.steps += 1
        log.dts.append(dt)
        if config.continue_on_violation:
            cells = _validate(grid.averages, grid.t, config)
            if cells:
                log.violations.append((grid.t, cells))
    log.wall_seconds = time.perf_counter() - start
    log.conserved_end = grid.conserved_totals()
    return grid, log
