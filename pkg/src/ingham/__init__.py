"""Discrete-time norm equivalences for exponential sums under a weakened
gap condition, with window-kernel certificates, empirical frame constants
from Hermitian pencils, one-frequency augmentation, and junction
observability for coupled strings and beams."""

__version__ = "0.1.0"

from .bounds import (
    ContinuumRow,
    FrameBoundReport,
    HarauxPlan,
    continuum_limit_scan,
    epsilon_k,
    extended_frame_constants,
    frame_constants,
    haraux_filter,
    hermitian_pencil_eig,
    plan_haraux,
    sampled_gram,
)
from .errors import CertificationError, StructuralError, ValidationError
from .exponents import (
    BandMask,
    ExponentSequence,
    GapClassification,
    GapValidation,
    GapViolation,
    band_mask,
    classify,
    validate_weak_gap,
)
from .kernels import (
    VARIANT_DIRECT,
    VARIANT_INVERSE,
    G_eval,
    WindowKernel,
    certify_constants,
    convolution_eval,
    g_transform,
    h_transform,
    periodize,
)
from .observability import (
    BEAM,
    STRING,
    CoupledSystem,
    ExponentTag,
    Mode,
    ObservabilityReport,
    ObservationTrace,
    ReconstructionResult,
    SobolevSpec,
    assemble_exponents,
    check_caps,
    initial_data_energy,
    mode_caps,
    observe,
    reconstruct,
    sobolev_norm,
    trace_jump_sum,
    verify_observability,
    with_amplitudes,
)
from .quadforms import QMatrix, q_form, q_matrix, q_prime
from .sums import (
    AugmentedExpSum,
    ExpSum,
    PoissonReport,
    SamplingGrid,
    continuous_energy,
    eval_sum,
    poisson_sides,
    sampled_energy,
    sum_from_dict,
)

__all__ = [
    "AugmentedExpSum",
    "BandMask",
    "BEAM",
    "CertificationError",
    "ContinuumRow",
    "CoupledSystem",
    "ExponentSequence",
    "ExponentTag",
    "ExpSum",
    "FrameBoundReport",
    "GapClassification",
    "GapValidation",
    "GapViolation",
    "G_eval",
    "HarauxPlan",
    "Mode",
    "ObservabilityReport",
    "ObservationTrace",
    "PoissonReport",
    "QMatrix",
    "ReconstructionResult",
    "SamplingGrid",
    "SobolevSpec",
    "STRING",
    "StructuralError",
    "ValidationError",
    "VARIANT_DIRECT",
    "VARIANT_INVERSE",
    "WindowKernel",
    "assemble_exponents",
    "band_mask",
    "certify_constants",
    "check_caps",
    "classify",
    "continuous_energy",
    "continuum_limit_scan",
    "convolution_eval",
    "epsilon_k",
    "eval_sum",
    "extended_frame_constants",
    "frame_constants",
    "g_transform",
    "h_transform",
    "haraux_filter",
    "hermitian_pencil_eig",
    "initial_data_energy",
    "mode_caps",
    "observe",
    "periodize",
    "plan_haraux",
    "poisson_sides",
    "q_form",
    "q_matrix",
    "q_prime",
    "reconstruct",
    "sampled_energy",
    "sampled_gram",
    "sobolev_norm",
    "sum_from_dict",
    "trace_jump_sum",
    "validate_weak_gap",
    "verify_observability",
    "with_amplitudes",
]
