from .checklist import Target, ChecklistItem, HypothesisChecklist
from .barrier import (
    CnsConvention,
    BarrierConfig,
    SAccumulation,
    BarrierCertificate,
    max_epsilon,
    check_hypotheses,
    compute_S,
    probability_lower_bound,
    mu_lower_bound,
)
from .capture import CaptureReport, PerturbationMode, verify_zero_capture
from .symmetrize import (
    TMode,
    RadiiSchedule,
    SymmetrizationCertificate,
    validate_radii,
    kac_rice_expected_crossings,
    optimal_T,
    symmetrization_bound,
    symmetrization_certificate,
)

__all__ = [
    'Target', 'ChecklistItem', 'HypothesisChecklist',
    'CnsConvention', 'BarrierConfig', 'SAccumulation', 'BarrierCertificate',
    'max_epsilon', 'check_hypotheses', 'compute_S', 'probability_lower_bound', 'mu_lower_bound',
    'CaptureReport', 'PerturbationMode', 'verify_zero_capture',
    'TMode', 'RadiiSchedule', 'SymmetrizationCertificate',
    'validate_radii', 'kac_rice_expected_crossings', 'optimal_T',
    'symmetrization_bound', 'symmetrization_certificate',
]
