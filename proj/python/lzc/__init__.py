"""Transition probabilities for a linear level crossing a Coulomb band."""

from ._lzc import (
    CharacteristicRoots,
    ConfigError,
    LzcError,
    ModelParams,
    NotConverged,
    analyze,
    char_poly,
    converged_p00,
    falling_factorial,
    find_roots,
    log_gamma,
    n2_probabilities,
    p00_degenerate,
    p00_independent_crossings,
    p0j_asymptote,
    pq0_time_average,
    run_config,
    stirling2,
    survival_probability,
    time_averaged_population,
)

__all__ = [
    "CharacteristicRoots",
    "ConfigError",
    "LzcError",
    "ModelParams",
    "NotConverged",
    "analyze",
    "char_poly",
    "converged_p00",
    "falling_factorial",
    "find_roots",
    "log_gamma",
    "n2_probabilities",
    "p00_degenerate",
    "p00_independent_crossings",
    "p0j_asymptote",
    "pq0_time_average",
    "run_config",
    "stirling2",
    "survival_probability",
    "time_averaged_population",
]
