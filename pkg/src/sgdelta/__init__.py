"""sgdelta: numerical laboratory for the sine-Gordon equation with a point impurity.

    u_tt - u_xx + (1 + q*delta0(x)) * sin(u) = 0

Library layout:

* ``core``        grids, states, energy, H1 x L2 norms
* ``waves``       closed-form kink / pinned wave, matching and gluing algebra
* ``dynamics``    symplectic time stepping (sharp and mollified impurity),
                  linear Klein-Gordon reference propagator
* ``spectrum``    linearized operator with the interface condition, bottom
                  eigenpairs, Morse index, growth rates
* ``experiments`` stability/instability trials, kink scattering sweeps,
                  energy minimization, mollifier convergence studies
* ``cli``         reproducible runs driven by JSON configs
"""

from .core import (
    DeviationNorm,
    EnergyBreakdown,
    FieldState,
    Grid1D,
    ImpurityParams,
    deviation_norm,
    energy,
    make_grid,
    make_state,
    sin_seminorms,
    zero_state,
)
from .waves import (
    MatchingRoot,
    boosted_kink_state,
    gluing_residual,
    ground_state,
    ground_state_slopes,
    kink_profile,
    matching_root,
)

__version__ = "0.1.0"

from .dynamics import (  # noqa: E402  (dynamics imports core)
    MollifierProfile,
    Trajectory,
    evolve,
    linear_kg_reference,
    mollifier_profile,
    step,
)
from .spectrum import (  # noqa: E402
    LinearizedOperator,
    SpectralReport,
    assemble_linearized,
    bilinear_form,
    eigen_bottom,
    growth_rate,
)
from .experiments import (  # noqa: E402
    InstabilityReport,
    MinimizationReport,
    MollifiedConvergence,
    ScatterOutcome,
    StabilityReport,
    instability_trial,
    minimize_energy,
    mollified_convergence,
    scattering_sweep,
    stability_trial,
)

__all__ = [
    "Grid1D",
    "FieldState",
    "ImpurityParams",
    "EnergyBreakdown",
    "DeviationNorm",
    "MatchingRoot",
    "make_grid",
    "make_state",
    "zero_state",
    "energy",
    "deviation_norm",
    "sin_seminorms",
    "kink_profile",
    "boosted_kink_state",
    "matching_root",
    "ground_state",
    "ground_state_slopes",
    "gluing_residual",
    "MollifierProfile",
    "Trajectory",
    "mollifier_profile",
    "step",
    "evolve",
    "linear_kg_reference",
    "LinearizedOperator",
    "SpectralReport",
    "assemble_linearized",
    "eigen_bottom",
    "bilinear_form",
    "growth_rate",
    "StabilityReport",
    "InstabilityReport",
    "ScatterOutcome",
    "MinimizationReport",
    "MollifiedConvergence",
    "stability_trial",
    "instability_trial",
    "scattering_sweep",
    "minimize_energy",
    "mollified_convergence",
    "__version__",
]
