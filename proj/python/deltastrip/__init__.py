"""Ground states of the NLS with a delta defect line on a strip."""

from ._deltastrip import (
    DeltaStripError,
    Field,
    FunctionalReport,
    GreensSpec,
    MinimizeResult,
    ProblemParams,
    StripGrid,
    enforce_symmetry,
    eval_all,
    evaluate,
    extend_soliton,
    gamma_star,
    greens_eval,
    l_star_star_bound,
    minimize_action,
    minimize_energy,
    mode_coefficient,
    nehari_project,
    omega_of_mass,
    pohozaev_residuals,
    recover_omega,
    run_config,
    soliton_energy,
    soliton_mass,
    soliton_value,
    verify_solution_via_green,
)

__all__ = [name for name in dir() if not name.startswith("_")]
