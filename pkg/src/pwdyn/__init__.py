"""Dynamics of a two-parameter piecewise-quadratic interval map and the
two-species simplex operator it reduces from: orbits, the trapping
interval, periodic points with stability, stretching exponents, and
parameter sweeps.
"""

from ._version import __version__
from .errors import (
    DegenerateParameterError,
    DomainError,
    NumericIntegrityError,
    PreconditionError,
    ResolutionWarning,
    RuleRangeError,
    SimplexViolationError,
)
from .map_core import (
    DOMAIN_TOL,
    Branch,
    BranchPoint,
    MapParams,
    branch_of,
    check_domain,
    conjugate_map_check,
    eval_f,
    eval_f_deriv,
    eval_f_vec,
    iterate_n,
    left_deriv_formula,
    preimages_of,
    right_deriv_formula,
)
from .orbits import (
    DEFAULT_ENTRY_CAP,
    InvariantInterval,
    OrbitRecord,
    RecordPolicy,
    SimplexState,
    Termination,
    backward_orbit,
    entry_time,
    entry_times_batch,
    invariant_interval,
    orbit,
    preimage_step,
    simplex_coefficients,
    simplex_drift,
    simplex_orbit,
    simplex_piecewise_orbit,
)
from .periodic import (
    BlockPartition,
    CycleRecord,
    FixedPointSet,
    InclusionCheck,
    Interval,
    Stability,
    TransitionReport,
    TwoCycleSurvey,
    block_partition,
    classify_cycle,
    find_cycles,
    fixed_points,
    four_block_regime,
    odd_period_scan,
    transition_check,
    two_cycle_a_window,
    two_cycle_b_window,
    two_cycle_closed_form,
    two_cycle_exists,
    two_cycle_ratio_test,
    two_cycle_region_oracle,
    two_cycle_survey,
)
from .chaos import (
    BifurcationSample,
    BRule,
    LyapunovEstimate,
    RuleKind,
    band_count,
    bifurcation_sweep,
    lyapunov,
    lyapunov_ceiling,
    lyapunov_lanes,
    lyapunov_sweep,
    retained_within,
)
from .verify import Check, SuiteResult, available_suites, run_suites

__all__ = [
    "__version__",
    "DegenerateParameterError", "DomainError", "NumericIntegrityError",
    "PreconditionError", "ResolutionWarning", "RuleRangeError", "SimplexViolationError",
    "DOMAIN_TOL", "Branch", "BranchPoint", "MapParams", "branch_of", "check_domain",
    "conjugate_map_check", "eval_f", "eval_f_deriv", "eval_f_vec", "iterate_n",
    "left_deriv_formula", "preimages_of", "right_deriv_formula",
    "DEFAULT_ENTRY_CAP", "InvariantInterval", "OrbitRecord", "RecordPolicy",
    "SimplexState", "Termination", "backward_orbit", "entry_time", "entry_times_batch",
    "invariant_interval", "orbit", "preimage_step", "simplex_coefficients",
    "simplex_drift", "simplex_orbit", "simplex_piecewise_orbit",
    "BlockPartition", "CycleRecord", "FixedPointSet", "InclusionCheck", "Interval",
    "Stability", "TransitionReport", "TwoCycleSurvey", "block_partition",
    "classify_cycle", "find_cycles", "fixed_points", "four_block_regime",
    "odd_period_scan", "transition_check", "two_cycle_a_window", "two_cycle_b_window",
    "two_cycle_closed_form", "two_cycle_exists", "two_cycle_ratio_test",
    "two_cycle_region_oracle", "two_cycle_survey",
    "BifurcationSample", "BRule", "LyapunovEstimate", "RuleKind", "band_count",
    "bifurcation_sweep", "lyapunov", "lyapunov_ceiling", "lyapunov_lanes",
    "lyapunov_sweep", "retained_within",
    "Check", "SuiteResult", "available_suites", "run_suites",
]
