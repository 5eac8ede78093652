from .settings import Settings
from .run_config import RunConfig, parse_config, read_config_file

__all__ = ['Settings', 'RunConfig', 'parse_config', 'read_config_file']
