"""Exception types shared across the package.

Split into two families so the command line tool can map them to exit
codes: ``PhysicsError`` covers inputs rejected on modelling grounds
(exit code 2), ``NumericsError`` covers runtime numerical failures of an
otherwise valid computation (exit code 3).  Plain schema problems in
configuration files raise ``ConfigError`` (exit code 1).
"""


class SgDeltaError(Exception):
    """Base class for all package errors."""


class ConfigError(SgDeltaError, ValueError):
    """Malformed configuration document (unknown key, bad type, bad shape)."""


class PhysicsError(SgDeltaError, ValueError):
    """Input rejected by a modelling rule rather than a schema rule."""


class GridError(PhysicsError):
    """Invalid grid request; a node at x = 0 is mandatory (N odd, >= 3)."""


class GridMismatchError(PhysicsError):
    """Operands sampled on different grids."""


class CouplingError(PhysicsError):
    """q = 0 requested where the impurity coupling must be nonzero."""


class NoH1WaveError(PhysicsError):
    """No stationary H1 wave exists for the requested coupling (|q| <= 2)."""


class SubluminalError(PhysicsError):
    """Traveling-wave speed must satisfy |v| < 1."""


class ResolutionError(PhysicsError):
    """Mollifier width is unresolved on the grid (eps < 2*dx)."""


class CflError(PhysicsError):
    """Time step violates the stability bound dt <= 0.9*dx."""


class LightConeError(PhysicsError):
    """Requested time pushes the light cone of the datum outside the grid."""


class NumericsError(SgDeltaError, RuntimeError):
    """Runtime numerical failure (blow-up, non-convergence)."""


class BlowUpError(NumericsError):
    """Non-finite or exploding state detected during time stepping.

    This signals a failure of the discrete scheme, not of the PDE: the
    continuous problem is globally well posed.
    """

    def __init__(self, message: str, time: float):
        super().__init__(message)
        self.time = time


class ConvergenceError(NumericsError):
    """Iteration budget exhausted before reaching the requested tolerance."""
