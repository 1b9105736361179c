"""Jaynes-Cummings-Hubbard coupled-cavity simulator (C++ core)."""

from ._core import (
    Boundary,
    Branch,
    Frame,
    ModelParams,
    __version__,
    dispersive_shift,
    evolve_polaritons,
    format_double,
    ground_state,
    hamiltonian,
    middle_site,
    parse_config,
    run_experiment,
    sector_configs,
    sector_dimension,
    single_cell_level,
    trajectory_seed,
    xy_effective_coupling,
)

SWEEP_COLUMNS = ("delta_over_g", "mode", "var_N_mid", "stderr", "n_sites", "filling")
TIMESERIES_COLUMNS = ("t_times_A", "observable_label", "value", "case")

__all__ = [
    "Boundary",
    "Branch",
    "Frame",
    "ModelParams",
    "SWEEP_COLUMNS",
    "TIMESERIES_COLUMNS",
    "__version__",
    "dispersive_shift",
    "evolve_polaritons",
    "format_double",
    "ground_state",
    "hamiltonian",
    "middle_site",
    "parse_config",
    "run_experiment",
    "sector_configs",
    "sector_dimension",
    "single_cell_level",
    "trajectory_seed",
    "xy_effective_coupling",
]
