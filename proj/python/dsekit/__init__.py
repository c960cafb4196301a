"""Python surface of the dsekit toolkit.

Thin re-export of the pybind11 module; fronts are lists of per-objective
value lists in minimize form.
"""

from ._dsekit import (  # noqa: F401
    __version__,
    additive_approximation,
    bootstrap_different,
    cliffs_delta,
    count_violations,
    dominates,
    epsilon_indicator,
    evaluate,
    feature_names,
    generational_distance,
    goal_metrics,
    hypervolume,
    inverted_generational_distance,
    minkowski_distance,
    nondominated_indices,
    normalize_front,
    reference_front,
    reproducibility,
    run,
    scott_knott,
    spread,
)
