"""Closed-form stationary and traveling waves, and the interface algebra.

Away from the origin a stationary profile solves the classical equation
-u_xx + sin(u) = 0; the impurity imposes the gluing (jump) condition

    u_x(0+) - u_x(0-) = q * sin(u(0)).

The degree-1 solution is the kink K(x) = 4*arctan(e^x): being smooth, it
can only satisfy the condition with sin(K(0)) = 0, which pins its center
to x = 0 for every q != 0.  An H1 ("pinned") wave exists exactly for
|q| > 2:

    Q(x) = 4*arctan( y * e^{-|x|} ),   y = sqrt((q+2)/(q-2)),

where y = e^{-x0} solves the matching equation -2/q = (1-y^2)/(1+y^2)
obtained by inserting a reflected pair of kink branches into the jump
condition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FieldState, Grid1D, make_state
from .errors import CouplingError, NoH1WaveError, SubluminalError

__all__ = [
    "MatchingRoot",
    "kink_profile",
    "boosted_kink_state",
    "matching_root",
    "ground_state",
    "ground_state_slopes",
    "gluing_residual",
    "reflected",
    "shifted_by_2pi",
]


@dataclass(frozen=True)
class MatchingRoot:
    """Root y = e^{-x0} of the matching equation -2/q = (1-y^2)/(1+y^2).

    exists is True iff |q| > 2; then y = sqrt((q+2)/(q-2)) and the residual
    of the matching equation vanishes to round-off.
    """

    q: float
    y: float
    exists: bool


def kink_profile(grid: Grid1D, x0: float = 0.0) -> FieldState:
    """Static kink u1(x) = 4*arctan(e^{x-x0}), u2 = 0.

    Monotone increasing from ~0 to ~2*pi; u1(x0) = pi.
    """
    u1 = 4.0 * np.arctan(np.exp(grid.x - x0))
    return make_state(grid, u1, np.zeros(grid.node_count))


def boosted_kink_state(grid: Grid1D, v: float, x0: float = 0.0, t: float = 0.0) -> FieldState:
    """Lorentz-boosted kink sampled at time t, with its exact u2 = d_t u1.

    u1 = 4*arctan(exp(xi)), xi = (x - v*t - x0)/sqrt(1 - v^2), and
    u2 = -2*v*gamma*sech(xi) by the chain rule.  Requires |v| < 1.
    """
    if not abs(v) < 1.0:
        raise SubluminalError(f"traveling kinks need |v| < 1, got v={v}")
    gamma = 1.0 / np.sqrt(1.0 - v * v)
    xi = gamma * (grid.x - v * t - x0)
    u1 = 4.0 * np.arctan(np.exp(xi))
    u2 = -2.0 * v * gamma / np.cosh(xi)
    return make_state(grid, u1, u2, t=t)


def matching_root(q: float) -> MatchingRoot:
    """Solve the matching equation for the interface offset y = e^{-x0}.

    A positive root exists iff |q| > 2, where y = sqrt((q+2)/(q-2)); for
    0 < |q| <= 2 the equation has no positive solution and no H1 stationary
    wave exists.
    """
    if q == 0:
        raise CouplingError("matching equation is undefined for q = 0")
    if abs(q) <= 2.0:
        return MatchingRoot(q=q, y=float("nan"), exists=False)
    return MatchingRoot(q=q, y=float(np.sqrt((q + 2.0) / (q - 2.0))), exists=True)


def ground_state(grid: Grid1D, q: float) -> FieldState:
    """Pinned stationary wave Q(x) = 4*arctan(y*e^{-|x|}), u2 = 0.

    Requires |q| > 2; the positive branch is returned.  Sign-flipped or
    2*pi-shifted copies are obtained with the explicit symmetry helpers,
    not stored as variants.
    """
    root = matching_root(q)
    if not root.exists:
        raise NoH1WaveError(
            f"no H1 stationary wave for q={q}: the matching equation has a "
            f"positive root only for |q| > 2"
        )
    u1 = 4.0 * np.arctan(root.y * np.exp(-np.abs(grid.x)))
    return make_state(grid, u1, np.zeros(grid.node_count))


def ground_state_slopes(q: float) -> tuple[float, float]:
    """Exact one-sided derivatives (Q_x(0-), Q_x(0+)) of the pinned wave.

    From the kink branches, Q_x(0-) = 4y/(1+y^2) = 2y(q-2)/q and
    Q_x(0+) = -Q_x(0-) by evenness.
    """
    root = matching_root(q)
    if not root.exists:
        raise NoH1WaveError(f"no H1 stationary wave for q={q}")
    s = 2.0 * root.y * (q - 2.0) / q
    return s, -s


def gluing_residual(
    profile: FieldState,
    q: float,
    slopes: tuple[float, float] | None = None,
) -> float:
    """Interface residual r = [u_x(0+) - u_x(0-)] - q*sin(u1(0)).

    r = 0 iff the profile satisfies the jump condition across the impurity.
    The one-sided derivatives come from 3-point second-order stencils at the
    zero node; pass exact slopes (left, right) for closed-form profiles to
    bypass the O(dx^2) stencil error.
    """
    grid = profile.grid
    z = grid.zero_index
    u = profile.u1
    if slopes is None:
        dx = grid.spacing
        d_minus = (3.0 * u[z] - 4.0 * u[z - 1] + u[z - 2]) / (2.0 * dx)
        d_plus = (-3.0 * u[z] + 4.0 * u[z + 1] - u[z + 2]) / (2.0 * dx)
    else:
        d_minus, d_plus = slopes[0], slopes[1]
    return float((d_plus - d_minus) - q * np.sin(u[z]))


def reflected(state: FieldState) -> FieldState:
    """Spatial reflection x -> -x on the symmetric grid."""
    return make_state(state.grid, state.u1[::-1], state.u2[::-1], t=state.t)


def shifted_by_2pi(state: FieldState, k: int) -> FieldState:
    """Add the discrete symmetry offset 2*pi*k to u1."""
    return make_state(state.grid, state.u1 + 2.0 * np.pi * k, state.u2, t=state.t)
