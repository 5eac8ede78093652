from .errors import (
    NodalBoundsError,
    EnvelopeError,
    NoSignChangeError,
    BandUnboundedError,
    HypothesisError,
    DegenerateError,
    NoSolutionError,
    UsageError,
)
from .artifacts import ArtifactError, ArtifactStore, SCHEMA_VERSION

__all__ = [
    'NodalBoundsError', 'EnvelopeError', 'NoSignChangeError', 'BandUnboundedError',
    'HypothesisError', 'DegenerateError', 'NoSolutionError', 'UsageError',
    'ArtifactError', 'ArtifactStore', 'SCHEMA_VERSION',
]
