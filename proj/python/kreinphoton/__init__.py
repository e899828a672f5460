"""Krein-space single-photon wavefunctions on the forward light cone."""

from ._kreinphoton import (
    ApexExcluded,
    ConfigError,
    Error,
    NumericalError,
    RangeError,
    b_matrix,
    check_s0,
    cross_check,
    eigensystem,
    evaluate_state,
    fundamental_symmetry,
    hilbert_form,
    inner_products,
    isometry,
    j_bar,
    krein_form,
    library_test_functions,
    run_suite,
    suite_check_ids,
    suite_names,
    version,
)

__all__ = [
    "ApexExcluded",
    "ConfigError",
    "Error",
    "NumericalError",
    "RangeError",
    "b_matrix",
    "check_s0",
    "cross_check",
    "eigensystem",
    "evaluate_state",
    "fundamental_symmetry",
    "hilbert_form",
    "inner_products",
    "isometry",
    "j_bar",
    "krein_form",
    "library_test_functions",
    "run_suite",
    "suite_check_ids",
    "suite_names",
    "version",
]
