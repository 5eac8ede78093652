from .logmag import LogMagnitude
from .specfun import (
    bessel_j,
    bessel_j_deriv,
    bessel_j_table,
    log_upper_gamma,
    gaussian_deficit_tail,
    appendix_deficit_tail,
)
from .harmonic import HarmonicField
from .rootfind import (
    Interval,
    ExtremumKind,
    ExtremumRecord,
    ExtremumSearch,
    find_root,
    bessel_zero,
    level_band,
    interval_max,
)

__all__ = [
    'LogMagnitude',
    'bessel_j', 'bessel_j_deriv', 'bessel_j_table',
    'log_upper_gamma', 'gaussian_deficit_tail', 'appendix_deficit_tail',
    'HarmonicField',
    'Interval', 'ExtremumKind', 'ExtremumRecord', 'ExtremumSearch',
    'find_root', 'bessel_zero', 'level_band', 'interval_max',
]
