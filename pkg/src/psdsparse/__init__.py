"""Deterministic greedy equal-weight sparsification of PSD decompositions of the identity."""

from .baseline import BaselineTrace, sample_run
from .errors import (
    AuditFailed,
    BoundViolation,
    CenteringCertificateFailed,
    DimensionMismatch,
    Disconnected,
    DomainError,
    EmptyFamily,
    FormatError,
    InstanceError,
    IsotropicTransformFailed,
    NoConvergence,
    NonFinite,
    NormBoundTooSmall,
    NotIsotropic,
    NotPSD,
    NotSymmetric,
    Overflow,
    PotentialGrowthViolation,
    PsdSparseError,
    WeightsNotSimplex,
)
from .greedy import (
    GreedyTrace,
    Schedule,
    StepRecord,
    bound_all_steps,
    bound_fixed_n,
    default_k_max,
    required_n,
    run,
    select_next,
)
from .instance import (
    CenteredFamily,
    Instance,
    center,
    gen_bases,
    gen_graph_edges,
    gen_random_psd,
    load_edge_list,
    load_instance,
    parse_edge_lines,
    random_connected_edges,
    save_instance,
    to_payload,
    validate,
)
from .potential import (
    LogPotential,
    PsiValue,
    log_potential,
    log_potential_from_eigenvalues,
    psi,
    psi_value,
    scalar_exp_bound_gap,
)
from .symmat import Spectrum, SymMatrix, eigh, loewner_leq, op_norm, sym_apply
from .verify import (
    SUITES,
    CheckReport,
    GeneralCenteredFamily,
    check_golden_thompson,
    check_interpolation,
    check_lower_bound,
    check_mgf,
    check_one_step,
    random_centered_family,
    run_all,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "AuditFailed",
    "BaselineTrace",
    "BoundViolation",
    "CenteredFamily",
    "CenteringCertificateFailed",
    "CheckReport",
    "DimensionMismatch",
    "Disconnected",
    "DomainError",
    "EmptyFamily",
    "FormatError",
    "GeneralCenteredFamily",
    "GreedyTrace",
    "Instance",
    "InstanceError",
    "IsotropicTransformFailed",
    "LogPotential",
    "NoConvergence",
    "NonFinite",
    "NormBoundTooSmall",
    "NotIsotropic",
    "NotPSD",
    "NotSymmetric",
    "Overflow",
    "PotentialGrowthViolation",
    "PsdSparseError",
    "PsiValue",
    "SUITES",
    "Schedule",
    "Spectrum",
    "StepRecord",
    "SymMatrix",
    "WeightsNotSimplex",
    "bound_all_steps",
    "bound_fixed_n",
    "center",
    "check_golden_thompson",
    "check_interpolation",
    "check_lower_bound",
    "check_mgf",
    "check_one_step",
    "default_k_max",
    "eigh",
    "gen_bases",
    "gen_graph_edges",
    "gen_random_psd",
    "load_edge_list",
    "load_instance",
    "loewner_leq",
    "log_potential",
    "log_potential_from_eigenvalues",
    "op_norm",
    "parse_edge_lines",
    "psi",
    "psi_value",
    "random_centered_family",
    "random_connected_edges",
    "required_n",
    "run",
    "run_all",
    "run_suite",
    "sample_run",
    "save_instance",
    "scalar_exp_bound_gap",
    "select_next",
    "sym_apply",
    "to_payload",
    "validate",
]
