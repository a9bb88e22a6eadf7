"""State algebra for the two-layer thin-film system.

The conserved vector is U = (f, b, g, q) and the flux is

    F(U) = ( f^2 b / 2,
             f b^2 / 2,
             g^2 q / 2 + f b g,
             g q^2 / 2 + f b q ).

The admissible set is f, g, q > 0, b < 0, f b + g q >= 0.  Its interior
splits the characteristic speeds

    lam1 = 3 f b / 2  <  lam2 = f b / 2  <=  lam3 = f b + g q / 2
                                         <   lam4 = f b + 3 g q / 2,

fields 1 and 4 genuinely nonlinear, fields 2 and 3 linearly degenerate.
Riemann-invariant coordinates used throughout: u = f b, xi = f / b,
tau = g / q, v = g q and eta = (u + v) v^(-1/4).

Most routines come in two forms: array kernels acting on numpy arrays of
matching shape (the schemes run on these) and scalar wrappers over
ConservedState.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateState, DomainError, NoRoot

__all__ = [
    "ConservedState",
    "InvariantState",
    "EigenDecomposition",
    "StateSpaceClass",
    "flux",
    "jacobian",
    "eigen",
    "to_invariants",
    "from_primitive_invariants",
    "v_from_eta",
    "classify",
    "flux_arrays",
    "eigenvalue_arrays",
    "max_wave_speed",
    "v_from_eta_arrays",
]


@dataclass(frozen=True)
class ConservedState:
    """One point in conserved variables."""

    f: float
    b: float
    g: float
    q: float

    def as_array(self) -> np.ndarray:
        return np.array([self.f, self.b, self.g, self.q], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "ConservedState":
        f, b, g, q = (float(c) for c in arr)
        return cls(f, b, g, q)

    def in_state_space(self) -> bool:
        return classify(self) is StateSpaceClass.U


@dataclass(frozen=True)
class InvariantState:
    """The same point in Riemann-invariant coordinates."""

    u: float
    xi: float
    tau: float
    v: float
    eta: float


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues (ascending) and right eigenvectors (columns r1..r4)."""

    lambdas: np.ndarray
    rvecs: np.ndarray


class StateSpaceClass(enum.Enum):
    U = "U"
    U1 = "U1"
    U2 = "U2"
    U3 = "U3"
    U4 = "U4"
    U5 = "U5"
    INVALID = "Invalid"


def _components(U):
    if isinstance(U, ConservedState):
        return U.f, U.b, U.g, U.q
    f, b, g, q = U
    return float(f), float(b), float(g), float(q)


# ---------------------------------------------------------------------------
# array kernels


def flux_arrays(f, b, g, q):
    """Flux components for arrays of matching shape.

    Returns
    -------
    tuple of four arrays (F1, F2, F3, F4).
    """
    fb = f * b
    return (
        0.5 * f * fb,
        0.5 * b * fb,
        (0.5 * g * q + fb) * g,
        (0.5 * g * q + fb) * q,
    )


def eigenvalue_arrays(f, b, g, q):
    """Characteristic speeds (lam1, lam2, lam3, lam4) as arrays."""
    u = f * b
    v = g * q
    return 1.5 * u, 0.5 * u, u + 0.5 * v, u + 1.5 * v


def max_wave_speed(f, b, g, q):
    """max_i max_j |lam_i(U_j)| over the given arrays."""
    l1, l2, l3, l4 = eigenvalue_arrays(
        np.asarray(f, dtype=float),
        np.asarray(b, dtype=float),
        np.asarray(g, dtype=float),
        np.asarray(q, dtype=float),
    )
    return float(
        max(
            np.max(np.abs(l1)),
            np.max(np.abs(l2)),
            np.max(np.abs(l3)),
            np.max(np.abs(l4)),
        )
    )


def v_from_eta_arrays(u, eta, v_init=None):
    """Solve u + v = eta * v**(1/4) for v > 0, elementwise.

    h(v) = u + v - eta v^(1/4) satisfies h(0) = u < 0 and is eventually
    increasing, so an expanding bracket followed by bisection always
    lands on the unique root.  Five Newton sweeps polish the bisection
    result; steps leaving the bracket are clamped back.

    Parameters
    ----------
    u : array, u < 0 elementwise.
    eta : array of the same shape.
    v_init : optional array of initial bracket guesses.

    Raises
    ------
    NoRoot
        If the expanding bracket fails (u >= 0 lanes, or no sign change
        after 200 doublings).
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if np.any(u >= 0):
        raise NoRoot("v_from_eta requires u < 0")

    def h(v):
        return u + v - eta * v**0.25

    lo = np.full_like(u, 1e-12)
    # h(0) = u < 0 exactly; fall back to 0 when 1e-12 already overshoots.
    lo = np.where(h(lo) > 0.0, 0.0, lo)
    if v_init is None:
        hi = np.maximum(1.0, -u)
    else:
        hi = np.maximum(np.asarray(v_init, dtype=float), 1e-6)
    for _ in range(200):
        bad = h(hi) <= 0.0
        if not np.any(bad):
            break
        hi = np.where(bad, 2.0 * hi, hi)
    else:
        raise NoRoot("v_from_eta bracket expansion failed")

    for _ in range(100):
        mid = 0.5 * (lo + hi)
        below = h(mid) < 0.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    v = 0.5 * (lo + hi)
    for _ in range(5):
        hv = h(v)
        dh = 1.0 - 0.25 * eta / v**0.75
        step = np.where(np.abs(dh) > 1e-300, hv / np.where(dh == 0, 1.0, dh), 0.0)
        v = np.clip(v - step, lo, hi)
    return v


# ---------------------------------------------------------------------------
# scalar interface


def flux(U) -> np.ndarray:
    """F(U) as a length-4 array."""
    f, b, g, q = _components(U)
    return np.array(
        [
            0.5 * f * f * b,
            0.5 * f * b * b,
            0.5 * g * g * q + f * b * g,
            0.5 * g * q * q + f * b * q,
        ]
    )


def jacobian(U) -> np.ndarray:
    """DF(U), the 4x4 flux Jacobian.

    The upper-left 2x2 block decouples: (f, b) evolve autonomously and
    drive the (g, q) block through the lower-left entries.
    """
    f, b, g, q = _components(U)
    fb = f * b
    gq = g * q
    return np.array(
        [
            [fb, 0.5 * f * f, 0.0, 0.0],
            [0.5 * b * b, fb, 0.0, 0.0],
            [g * b, f * g, fb + gq, 0.5 * g * g],
            [b * q, f * q, 0.5 * q * q, fb + gq],
        ]
    )


def eigen(U) -> EigenDecomposition:
    """Eigenvalues and right eigenvectors of DF(U).

    Raises
    ------
    DegenerateState
        If any component vanishes (the eigenvector formulas divide by
        f, b and q).
    """
    f, b, g, q = _components(U)
    if f == 0.0 or b == 0.0 or g == 0.0 or q == 0.0:
        raise DegenerateState("eigen decomposition needs nonzero components")
    u = f * b
    v = g * q
    lambdas = np.array([1.5 * u, 0.5 * u, u + 0.5 * v, u + 1.5 * v])
    w = (u - 3.0 * v) / (4.0 * q)
    # columns are the (unnormalized) right eigenvectors r1..r4
    rvecs = np.array(
        [
            [w / b, -f / b, 0.0, 0.0],
            [w / f, 1.0, 0.0, 0.0],
            [g / q, 0.0, -g / q, g / q],
            [1.0, 0.0, 1.0, 1.0],
        ]
    )
    return EigenDecomposition(lambdas=lambdas, rvecs=rvecs)


def to_invariants(U) -> InvariantState:
    """Map to (u, xi, tau, v, eta) coordinates.

    Raises DegenerateState when b = 0, q = 0 or g q <= 0 (eta takes a
    fourth root of v = g q).
    """
    f, b, g, q = _components(U)
    if b == 0.0 or q == 0.0:
        raise DegenerateState("invariants need b != 0 and q != 0")
    v = g * q
    if v <= 0.0:
        raise DegenerateState("eta needs g q > 0")
    u = f * b
    return InvariantState(u=u, xi=f / b, tau=g / q, v=v, eta=(u + v) / v**0.25)


def from_primitive_invariants(u, xi, tau, v) -> ConservedState:
    """Invert (u, xi, tau, v) back to conserved variables.

    Requires u < 0, u * xi > 0, tau > 0, v > 0 so that the square roots
    pick the admissible branch f > 0, b < 0, g > 0, q > 0.
    """
    if not (v > 0.0 and tau > 0.0):
        raise DomainError("need v > 0 and tau > 0")
    if not (u < 0.0 and u * xi > 0.0):
        raise DomainError("need u < 0 with matching xi sign")
    f = (u * xi) ** 0.5
    g = (v * tau) ** 0.5
    return ConservedState(f=f, b=u / f, g=g, q=g / tau)


def v_from_eta(u, eta, v_hint=None) -> float:
    """Scalar form of :func:`v_from_eta_arrays`."""
    hint = None if v_hint is None else np.array([v_hint], dtype=float)
    return float(v_from_eta_arrays(np.array([u]), np.array([eta]), hint)[0])


def classify(U) -> StateSpaceClass:
    """Classify a state into the admissible set or one of the companion
    open regions with b > 0.

    All region inequalities are strict except f b + g q >= 0 for the
    admissible set itself; every boundary case and any non-finite
    component maps to INVALID.
    """
    f, b, g, q = _components(U)
    if not all(np.isfinite(c) for c in (f, b, g, q)):
        return StateSpaceClass.INVALID
    if not (f > 0.0 and g > 0.0 and q > 0.0):
        return StateSpaceClass.INVALID
    s = f * b + g * q
    if b < 0.0:
        if s >= 0.0:
            return StateSpaceClass.U
        t = f * b + 3.0 * g * q
        if t > 0.0:
            return StateSpaceClass.U1
        if t < 0.0:
            return StateSpaceClass.U2
        return StateSpaceClass.INVALID
    if b > 0.0:
        fb = f * b
        gq = g * q
        if fb < gq:
            return StateSpaceClass.U3
        if gq < fb < 3.0 * gq:
            return StateSpaceClass.U4
        if fb > 3.0 * gq:
            return StateSpaceClass.U5
        return StateSpaceClass.INVALID
    return StateSpaceClass.INVALID
