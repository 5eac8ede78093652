from .wave import (
    WaveSample,
    GridSpec,
    FieldBasis,
    sample_wave,
    evaluate_field,
    evaluate_points,
    empirical_covariance,
)
from .census import ComponentRecord, NodalCensus, nodal_census
from .ensemble import EnsembleStats, estimate_mu
from .crossings import CrossingStats, circle_crossings
from .export import export_csv, export_pgm

__all__ = [
    'WaveSample', 'GridSpec', 'FieldBasis',
    'sample_wave', 'evaluate_field', 'evaluate_points', 'empirical_covariance',
    'ComponentRecord', 'NodalCensus', 'nodal_census',
    'EnsembleStats', 'estimate_mu',
    'CrossingStats', 'circle_crossings',
    'export_csv', 'export_pgm',
]
