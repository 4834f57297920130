"""Grids, field states, energy-space norms, and the conserved energy.

The model throughout the package is the sine-Gordon equation with a point
impurity of strength q at the origin,

    u_tt - u_xx + (1 + q*delta0(x)) * sin(u) = 0,

truncated to a symmetric grid on [-L, L] with a node pinned at x = 0.  A
state is the pair (u1, u2) = (u, u_t).  Its conserved energy is

    E(u1, u2) = int( |u2|^2/2 + |d_x u1|^2/2 + (1 - cos u1) ) dx
                + q * (1 - cos u1(0)),

where the impurity term reads the zero node directly (sharp mode) or the
mollified average <rho_eps, u1> (mollified mode).

Discretization conventions, shared by every module:

* composite trapezoid quadrature over the grid nodes;
* a sharp delta carries weight 1/dx at the zero node inside quadratures,
  the unique one-node rule that integrates a unit point mass with
  first-order consistency;
* gradient-type quadratures use the staggered cell difference
  (u[i+1] - u[i])/dx, a second-order sample of d_x u at the cell
  midpoint.  This is the one convention that (a) never straddles the
  interface -- stationary impurity profiles have a slope jump exactly at
  the node x = 0, i.e. at a cell *endpoint*, so a centered stencil there
  would lose an O(1) amount of gradient energy; (b) makes the leapfrog
  force in :mod:`sgdelta.dynamics` exactly minus the gradient of this
  energy, so the monitored drift is pure O(dt^2) shadow error; and
  (c) gives exact summation-by-parts against the tridiagonal operator of
  :mod:`sgdelta.spectrum`.  Point derivative evaluations (the gluing
  residual) use 3-point one-sided stencils instead.

All values here are plain functions of their (immutable) inputs; nothing
holds interior mutable state, so everything is safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridError, GridMismatchError, ResolutionError

__all__ = [
    "Grid1D",
    "FieldState",
    "ImpurityParams",
    "EnergyBreakdown",
    "DeviationNorm",
    "make_grid",
    "make_state",
    "zero_state",
    "energy",
    "deviation_norm",
    "sin_seminorms",
    "h1_l2_norm",
]


def _trap(y: np.ndarray, dx: float) -> float:
    """Composite trapezoid of samples y on a uniform mesh of spacing dx."""
    return float(dx * (y.sum() - 0.5 * (y[0] + y[-1])))


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Uniform symmetric mesh on [-L, L] with a node exactly at x = 0."""

    half_width: float
    node_count: int
    spacing: float
    zero_index: int
    x: np.ndarray
    weights: np.ndarray  # trapezoid weights: dx inside, dx/2 at the ends

    def matches(self, other: "Grid1D") -> bool:
        return (
            self.node_count == other.node_count
            and self.half_width == other.half_width
        )

    def integrate(self, samples: np.ndarray) -> float:
        """Trapezoid quadrature of node samples over [-L, L]."""
        return float(np.dot(self.weights, samples))

    def __repr__(self) -> str:  # keep array spam out of reports
        return (
            f"Grid1D(L={self.half_width}, N={self.node_count}, "
            f"dx={self.spacing:.6g})"
        )


def make_grid(half_width: float, node_count: int) -> Grid1D:
    """Build the uniform grid; node_count must be odd so that x = 0 is a node.

    The zero node is required by the impurity quadrature and by the
    interface (gluing) condition of stationary waves.
    """
    if not half_width > 0:
        raise GridError(f"half_width must be positive, got {half_width}")
    n = int(node_count)
    if n != node_count or n < 3 or n % 2 == 0:
        raise GridError(
            f"node_count must be an odd integer >= 3 so that x = 0 is a node, "
            f"got {node_count}"
        )
    dx = 2.0 * half_width / (n - 1)
    zero = (n - 1) // 2
    x = (np.arange(n) - zero) * dx  # x[zero] == 0.0 exactly
    w = np.full(n, dx)
    w[0] = w[-1] = 0.5 * dx
    return Grid1D(
        half_width=float(half_width),
        node_count=n,
        spacing=dx,
        zero_index=zero,
        x=_frozen(x),
        weights=_frozen(w),
    )


@dataclass(frozen=True, eq=False)
class FieldState:
    """Sampled state (u1, u2) = (u, u_t) on a grid, at time t."""

    grid: Grid1D
    u1: np.ndarray
    u2: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        n = self.grid.node_count
        if self.u1.shape != (n,) or self.u2.shape != (n,):
            raise GridMismatchError(
                f"field samples must have shape ({n},), got "
                f"{self.u1.shape} and {self.u2.shape}"
            )
        if not (np.isfinite(self.u1).all() and np.isfinite(self.u2).all()):
            raise ValueError("field samples must be finite")


def make_state(grid: Grid1D, u1: np.ndarray, u2: np.ndarray, t: float = 0.0) -> FieldState:
    return FieldState(grid=grid, u1=_frozen(u1), u2=_frozen(u2), t=float(t))


def zero_state(grid: Grid1D, t: float = 0.0) -> FieldState:
    z = np.zeros(grid.node_count)
    return make_state(grid, z, z, t)


@dataclass(frozen=True)
class ImpurityParams:
    """Impurity coupling q and how the delta is discretized.

    delta_mode:
        "sharp"      one-node weight q/dx at the zero node;
        "mollified"  bump rho_eps of width eps; the impurity force is
                     q * rho_eps(x) * sin(<rho_eps, u1>) where <.,.> is the
                     grid quadrature pairing.  Setting pairing="pointwise"
                     switches to the alternative local reading
                     q * rho_eps(x) * sin(u1(x)), kept for comparison runs.
    """

    q: float
    delta_mode: str = "sharp"
    eps: float | None = None
    pairing: str = "scalar"

    def __post_init__(self):
        if self.delta_mode not in ("sharp", "mollified"):
            raise ValueError(f"unknown delta_mode {self.delta_mode!r}")
        if self.pairing not in ("scalar", "pointwise"):
            raise ValueError(f"unknown pairing {self.pairing!r}")
        if self.delta_mode == "mollified":
            if self.eps is None or not self.eps > 0:
                raise ValueError("mollified mode needs a positive width eps")


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy split into its four parts; total is their exact float sum."""

    kinetic: float
    gradient: float
    potential: float
    delta_term: float
    total: float


@dataclass(frozen=True)
class DeviationNorm:
    """H1 x L2 distance between two states: total = h1_part + l2_part."""

    h1_part: float
    l2_part: float
    total: float


# -- gradients ---------------------------------------------------------------

def cell_gradient(grid: Grid1D, u: np.ndarray) -> np.ndarray:
    """Staggered first difference (u[i+1] - u[i])/dx on the N-1 cell midpoints."""
    return np.diff(u) / grid.spacing


def grad_sq_integral(grid: Grid1D, u: np.ndarray) -> float:
    """int |d_x u|^2 dx by midpoint quadrature of the staggered gradient."""
    g = cell_gradient(grid, u)
    return float(grid.spacing * np.dot(g, g))


def h1_l2_norm(grid: Grid1D, v1: np.ndarray, v2: np.ndarray) -> DeviationNorm:
    """H1 x L2 norm of a difference field (v1, v2) on the grid."""
    h1 = float(np.sqrt(grid.integrate(v1**2) + grad_sq_integral(grid, v1)))
    l2 = float(np.sqrt(grid.integrate(v2**2)))
    return DeviationNorm(h1_part=h1, l2_part=l2, total=h1 + l2)


def deviation_norm(state: FieldState, reference: FieldState) -> DeviationNorm:
    """Stability metric ||(u1 - ref1, u2 - ref2)||_{H1 x L2}."""
    if not state.grid.matches(reference.grid):
        raise GridMismatchError("states live on different grids")
    return h1_l2_norm(state.grid, state.u1 - reference.u1, state.u2 - reference.u2)


# -- mollifier samples (shared with dynamics) --------------------------------

def _mollifier_samples(grid: Grid1D, eps: float) -> np.ndarray:
    """Discrete unit-mass bump rho_eps(x) = eps^-1 rho(x/eps) on the grid.

    The reference bump is rho(s) ∝ exp(-1/(1-s^2)) on |s| < 1.  After
    sampling, the profile is renormalized so that its trapezoid quadrature
    is exactly 1; eps must cover at least two mesh cells to be resolved.
    """
    if eps < 2.0 * grid.spacing:
        raise ResolutionError(
            f"mollifier width eps={eps} under-resolved: need eps >= 2*dx = "
            f"{2.0 * grid.spacing}"
        )
    s = grid.x / eps
    rho = np.zeros(grid.node_count)
    inside = np.abs(s) < 1.0
    rho[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    mass = grid.integrate(rho)
    return rho / mass


# -- energy ------------------------------------------------------------------

def energy(state: FieldState, params: ImpurityParams) -> EnergyBreakdown:
    """Conserved energy of a state, split into its four parts.

    delta_term is q*(1 - cos u1(0)) in sharp mode and q*(1 - cos<rho_eps, u1>)
    in mollified mode.  kinetic, gradient and potential are nonnegative;
    delta_term lies in [-2|q|, 2|q|].
    """
    grid = state.grid
    kinetic = 0.5 * grid.integrate(state.u2**2)
    gradient = 0.5 * grad_sq_integral(grid, state.u1)
    potential = grid.integrate(1.0 - np.cos(state.u1))
    if params.delta_mode == "sharp":
        u0 = state.u1[grid.zero_index]
    else:
        rho = _mollifier_samples(grid, params.eps)
        u0 = grid.integrate(rho * state.u1)
    delta_term = params.q * (1.0 - np.cos(u0))
    total = kinetic + gradient + potential + delta_term
    return EnergyBreakdown(
        kinetic=float(kinetic),
        gradient=float(gradient),
        potential=float(potential),
        delta_term=float(delta_term),
        total=float(total),
    )


def sin_seminorms(state: FieldState) -> tuple[float, float]:
    """Diagnostic pair (||d_x u1||_L2, ||sin(u1/2)||_L2).

    On the truncated grid every sampled field is square integrable, so the
    energy space only shows up through this pair, reported alongside
    energies.
    """
    grid = state.grid
    grad = float(np.sqrt(grad_sq_integral(grid, state.u1)))
    half = float(np.sqrt(grid.integrate(np.sin(0.5 * state.u1) ** 2)))
    return grad, half
