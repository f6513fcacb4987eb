"""kinvlasov: a 1D1V two-species relativistic kinetic plasma solver.

The evolved system couples two collisionless kinetic equations to Lorenz-gauge
wave equations for the potentials phi and A.  The force acting on the
distributions is the convective derivative of the vector potential,
F = -(q/c)(dA/dt + v dA/dx); the conventional potential-form Lorentz force is
available as a comparator mode.  The gauge condition and the minus-species
continuity equation are monitored as residuals rather than enforced, making
the redundancy of the overdetermined system a runtime consistency check.
"""

__version__ = "0.1.0"

from .config import (  # noqa: F401
    Config,
    ConfigError,
    InitConfig,
    SpeciesConfig,
    load_config,
    parse_config,
    validate_config,
)
from .diagnostics import (  # noqa: F401
    DiagnosticsRecord,
    EquationLedger,
    FrequencyEstimate,
    LedgerEntry,
    StateHistory,
    compare_runs,
    conserved_totals,
    oscillation_frequency,
    residual_report,
    vlasov_residual,
)
from .fields import (  # noqa: F401
    CflResult,
    WaveLevels,
    cfl_check,
    field_energy_proxy,
    gauge_residual,
    poisson_init,
    wave_step,
)
from .forces import (  # noqa: F401
    lorentz_factor,
    modified_force,
    standard_force,
    velocity_from_momentum,
)
from .grid import PhaseSpaceGrid, build_grid  # noqa: F401
from .moments import (  # noqa: F401
    MomentSet,
    charge_density,
    compute_moments,
    continuity_residual,
    current_density,
    number_density,
    particle_flux,
)
from .runner import RunResult, compare_simulations, run_simulation  # noqa: F401
from .state import (  # noqa: F401
    FieldState,
    SimulationState,
    SpeciesState,
    initialize_state,
)
from .vlasov import (  # noqa: F401
    STAGE_ORDER,
    KickDisplacementError,
    SplittingStage,
    advect_x,
    kick_p,
    step,
    time_step,
)
