"""
Per-invocation run configuration: flat key=value config files overridden by
command-line flags
"""
from __future__ import annotations

import argparse
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from bounds.symmetrize import RadiiSchedule
from utils.errors import UsageError
from .settings import Settings

logger = logging.getLogger(__name__)

COMMANDS = ('barrier', 'symmetrize', 'simulate', 'report')
TARGETS = ('mu0', 'mu1')
T_MODES = {'prop': 'prop_formula', 'prop_formula': 'prop_formula',
           'appendix': 'appendix_formula', 'appendix_formula': 'appendix_formula',
           'explicit': 'explicit'}
CNS_CONVENTIONS = ('kac_rice_exact', 'factor_ten')
EXPORT_FORMATS = ('none', 'csv', 'pgm', 'both')

# j_{1,1} - j_{0,1}
DELTA_LIMIT = 1.42688


@dataclass
class RunConfig:
    command: str
    target: str = 'mu0'
    delta: float = 0.5
    epsilon: Optional[float] = None
    truncation: int = 100
    cns_convention: str = 'kac_rice_exact'
    radii: Optional[Tuple[float, ...]] = None
    t_mode: str = 'prop_formula'
    t_value: Optional[float] = None
    grid: int = field(default_factory=lambda: Settings.DEFAULT_RESOLUTION)
    half_width: float = field(default_factory=lambda: Settings.DEFAULT_HALF_WIDTH)
    counting_radius: Optional[float] = None
    terms: int = field(default_factory=lambda: Settings.DEFAULT_TERMS)
    samples: int = 200
    seed: int = field(default_factory=lambda: Settings.DEFAULT_SEED)
    workers: int = field(default_factory=lambda: Settings.DEFAULT_WORKERS)
    xi0: Optional[float] = None
    crossing_radius: Optional[float] = None
    export: str = 'none'
    out: Path = field(default_factory=lambda: Settings.OUTPUT_DIR)
    deterministic_output: bool = False
    inputs: List[Path] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['out'] = str(self.out)
        data['inputs'] = [str(p) for p in self.inputs]
        data['radii'] = None if self.radii is None else list(self.radii)
        return data


# ==================== value parsing ====================

def _optional_float(value: str) -> Optional[float]:
    return None if value.strip().lower() in ('auto', 'none', '') else float(value)


def _float_list(value: str) -> Tuple[float, ...]:
    return tuple(float(part) for part in value.split(',') if part.strip())


def _radii(value: str) -> Tuple[float, ...]:
    """Comma-separated radii, or `nested` / `nested:K` for r_k = sqrt(k+1) j_{0,1}, k = 1..K"""
    keyword, _, count = value.strip().lower().partition(':')
    if keyword == 'nested':
        return RadiiSchedule.nested_limit(int(count) if count else 5).radii
    return _float_list(value)


def _path_list(value: str) -> List[Path]:
    return [Path(part.strip()) for part in value.split(',') if part.strip()]


def _bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f"not a boolean: {value!r}")


PARSERS = {
    'target': str,
    'delta': float,
    'epsilon': _optional_float,
    'truncation': int,
    'cns_convention': str,
    'radii': _radii,
    't_mode': str,
    't_value': _optional_float,
    'grid': int,
    'half_width': float,
    'counting_radius': _optional_float,
    'terms': int,
    'samples': int,
    'seed': int,
    'workers': int,
    'xi0': _optional_float,
    'crossing_radius': _optional_float,
    'export': str,
    'out': Path,
    'deterministic_output': _bool,
    'inputs': _path_list,
}


def _normalize_key(key: str) -> str:
    return key.strip().lstrip('-').replace('-', '_')


def parse_value(key: str, raw: str) -> Any:
    """Convert one raw string for `key`; UsageError names the key"""
    name = _normalize_key(key)
    if name not in PARSERS:
        raise UsageError(f"unknown configuration key '{key}'")
    try:
        return PARSERS[name](raw)
    except ValueError as e:
        raise UsageError(f"invalid value for '{key}': {raw!r} ({e})") from e


def read_config_file(path: Path) -> Dict[str, Any]:
    """
    Flat key=value file; '#' starts a comment, blank lines are skipped

    Raises:
        UsageError: unreadable file, malformed line or unknown key
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.readlines()
    except OSError as e:
        raise UsageError(f"cannot read config file {path}: {e}") from e

    values: Dict[str, Any] = {}
    for number, line in enumerate(lines, start=1):
        text = line.split('#', 1)[0].strip()
        if not text:
            continue
        if '=' not in text:
            raise UsageError(f"{path}:{number}: expected key=value, got {text!r}")
        key, raw = (part.strip() for part in text.split('=', 1))
        values[_normalize_key(key)] = parse_value(key, raw)
    logger.debug(f"Config file {path}: {sorted(values)}")
    return values


# ==================== command line ====================

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='main.py', description='Certified bounds and Monte Carlo estimates for nodal-domain '
                                                 'connectivity of the monochromatic random wave')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument('--config', type=Path, default=None, help='Flat key=value config file; flags override it')
        p.add_argument('--out', default=argparse.SUPPRESS, help='Output directory (default: data/output)')
        p.add_argument('--seed', default=argparse.SUPPRESS, help='Master seed')
        p.add_argument('--deterministic-output', action='store_const', const='true', default=argparse.SUPPRESS,
                       help='Omit timestamps so identical runs give identical bytes')

    barrier = sub.add_parser('barrier', help='Barrier-method lower bound for mu(0) or mu(1)')
    barrier.add_argument('--target', choices=TARGETS, default=argparse.SUPPRESS)
    barrier.add_argument('--delta', default=argparse.SUPPRESS, help=f'Annulus half-width, < {DELTA_LIMIT}')
    barrier.add_argument('--epsilon', default=argparse.SUPPRESS, help="Perturbation budget or 'auto'")
    barrier.add_argument('--truncation', default=argparse.SUPPRESS, help='Orders summed before the tail bound')
    barrier.add_argument('--cns-convention', choices=CNS_CONVENTIONS, default=argparse.SUPPRESS)
    common(barrier)

    symmetrize = sub.add_parser('symmetrize', help='Symmetrization lower bound over a radii schedule')
    symmetrize.add_argument('--target', choices=TARGETS, default=argparse.SUPPRESS)
    symmetrize.add_argument('--radii', default=argparse.SUPPRESS, help="Comma-separated increasing radii, or 'nested[:K]'")
    symmetrize.add_argument('--t-mode', choices=sorted(T_MODES), default=argparse.SUPPRESS)
    symmetrize.add_argument('--t-value', default=argparse.SUPPRESS, help='T for --t-mode explicit')
    common(symmetrize)

    simulate = sub.add_parser('simulate', help='Monte Carlo nodal-domain census')
    simulate.add_argument('--grid', default=argparse.SUPPRESS, help='Points per axis')
    simulate.add_argument('--half-width', default=argparse.SUPPRESS, help='Box half-width L')
    simulate.add_argument('--counting-radius', default=argparse.SUPPRESS, help='Counting radius R (default 0.9 L)')
    simulate.add_argument('--terms', default=argparse.SUPPRESS, help='Series truncation N')
    simulate.add_argument('--samples', default=argparse.SUPPRESS, help='Number of independent waves')
    simulate.add_argument('--workers', default=argparse.SUPPRESS, help='Parallel worker threads')
    simulate.add_argument('--xi0', default=argparse.SUPPRESS, help='Fixed F(0) for exports and crossings')
    simulate.add_argument('--crossing-radius', default=argparse.SUPPRESS,
                          help='Also count zeros on this circle')
    simulate.add_argument('--export', choices=EXPORT_FORMATS, default=argparse.SUPPRESS,
                          help='Export the first sample field')
    common(simulate)

    report = sub.add_parser('report', help='Markdown summary of artifacts')
    report.add_argument('--inputs', default=argparse.SUPPRESS, help='Comma-separated artifact files')
    common(report)
    return parser


def validate(config: RunConfig) -> RunConfig:
    """Range checks before dispatch; UsageError names the offending key"""
    if config.command not in COMMANDS:
        raise UsageError(f"unknown command '{config.command}'")
    if config.target not in TARGETS:
        raise UsageError(f"target must be one of {TARGETS}, got '{config.target}'")
    if not 0.0 < config.delta < DELTA_LIMIT:
        raise UsageError(f"delta must lie in (0, {DELTA_LIMIT}) (j_1,1 - j_0,1 = {DELTA_LIMIT}), got {config.delta}")
    if config.epsilon is not None and not config.epsilon > 0:
        raise UsageError(f"epsilon must be positive or 'auto', got {config.epsilon}")
    if not 10 <= config.truncation <= 510:
        raise UsageError(f"truncation must lie in [10, 510], got {config.truncation}")
    if config.cns_convention not in CNS_CONVENTIONS:
        raise UsageError(f"cns-convention must be one of {CNS_CONVENTIONS}, got '{config.cns_convention}'")
    if config.t_mode not in T_MODES:
        raise UsageError(f"t-mode must be one of {sorted(T_MODES)}, got '{config.t_mode}'")
    config.t_mode = T_MODES[config.t_mode]
    if config.t_mode == 'explicit' and (config.t_value is None or not config.t_value > 0):
        raise UsageError("t-mode explicit needs a positive t-value")
    if config.radii is not None and (not config.radii or any(r <= 0 for r in config.radii)):
        raise UsageError(f"radii must be positive, got {config.radii}")
    if config.grid < 64:
        raise UsageError(f"grid must be >= 64, got {config.grid}")
    if not 0.0 < config.half_width <= 70.0:
        raise UsageError(f"half-width must lie in (0, 70], got {config.half_width}")
    if config.counting_radius is not None and not 0.0 < config.counting_radius < config.half_width:
        raise UsageError(f"counting-radius must lie in (0, half-width), got {config.counting_radius}")
    if not 1 <= config.terms <= 511:
        raise UsageError(f"terms must lie in [1, 511], got {config.terms}")
    if config.samples < 1:
        raise UsageError(f"samples must be >= 1, got {config.samples}")
    if config.seed < 0:
        raise UsageError(f"seed must be nonnegative, got {config.seed}")
    if config.workers < 1:
        raise UsageError(f"workers must be >= 1, got {config.workers}")
    if config.export not in EXPORT_FORMATS:
        raise UsageError(f"export must be one of {EXPORT_FORMATS}, got '{config.export}'")
    if config.crossing_radius is not None and not 0.0 < config.crossing_radius <= 100.0:
        raise UsageError(f"crossing-radius must lie in (0, 100], got {config.crossing_radius}")
    return config


def parse_config(argv: Optional[Sequence[str]] = None, config_file: Optional[Path] = None) -> RunConfig:
    """
    Build a RunConfig from a config file (if any) and command-line flags; flags win

    Raises:
        UsageError: unknown key, malformed value or out-of-range parameter
    """
    namespace = vars(build_parser().parse_args(argv))
    command = namespace.pop('command')
    flag_file = namespace.pop('config', None)

    values: Dict[str, Any] = {}
    for path in (config_file, flag_file):
        if path is not None:
            values.update(read_config_file(path))
    for key, raw in namespace.items():
        values[key] = parse_value(key, str(raw))

    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise UsageError(f"unknown configuration key '{unknown[0]}'")

    config = RunConfig(command=command, **values)
    return validate(config)
