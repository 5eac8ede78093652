import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()


def _env_int(key: str, default: int) -> int:
    value = os.getenv(key)
    return default if value in (None, '') else int(value)


def _env_float(key: str, default: float) -> float:
    value = os.getenv(key)
    return default if value in (None, '') else float(value)


class Settings:
    """
    Centralized configuration settings
    """

    # ==================== Paths ====================
    PROJECT_ROOT = Path(__file__).parent.parent.resolve()

    # base directory for configs and outputs
    DATA_DIR = Path(os.getenv('DATA_DIR', PROJECT_ROOT / 'data')).resolve()

    # example run configs, one per subcommand
    CONFIG_DIR = DATA_DIR / 'configs'

    # relative OUTPUT_DIR resolves under DATA_DIR
    _output_dir_env = os.getenv('OUTPUT_DIR')
    if _output_dir_env:
        _output_path = Path(_output_dir_env)
        if not _output_path.is_absolute():
            OUTPUT_DIR = (DATA_DIR / _output_dir_env).resolve()
        else:
            OUTPUT_DIR = _output_path.resolve()
    else:
        OUTPUT_DIR = (DATA_DIR / 'output').resolve()

    LOG_DIR = Path(os.getenv('LOG_DIR', PROJECT_ROOT / 'logs')).resolve()

    # ==================== Run defaults ====================
    DEFAULT_SEED = _env_int('DEFAULT_SEED', 20240601)
    DEFAULT_WORKERS = _env_int('DEFAULT_WORKERS', 1)
    DEFAULT_TERMS = _env_int('DEFAULT_TERMS', 100)
    DEFAULT_RESOLUTION = _env_int('DEFAULT_RESOLUTION', 500)
    DEFAULT_HALF_WIDTH = _env_float('DEFAULT_HALF_WIDTH', 20.0)

    # ==================== Other ====================
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    @classmethod
    def initialize_directories(cls) -> None:
        """
        Create the data, output and log directories
        """
        for directory in (cls.DATA_DIR, cls.OUTPUT_DIR, cls.LOG_DIR):
            directory.mkdir(parents=True, exist_ok=True)

    @classmethod
    def validate(cls) -> bool:
        """
        Validate that run defaults make sense
        """
        cls.initialize_directories()

        if cls.DEFAULT_SEED < 0:
            raise ValueError("DEFAULT_SEED must be nonnegative")
        if cls.DEFAULT_WORKERS < 1:
            raise ValueError("DEFAULT_WORKERS must be >= 1")
        if not 1 <= cls.DEFAULT_TERMS <= 511:
            raise ValueError("DEFAULT_TERMS must lie in [1, 511]")
        if cls.DEFAULT_RESOLUTION < 64:
            raise ValueError("DEFAULT_RESOLUTION must be >= 64")
        if not 0 < cls.DEFAULT_HALF_WIDTH <= 70:
            raise ValueError("DEFAULT_HALF_WIDTH must lie in (0, 70] so grid corners stay within r <= 100")
        if cls.LOG_LEVEL.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            raise ValueError(f"LOG_LEVEL {cls.LOG_LEVEL!r} is not a logging level")
        return True

    @classmethod
    def get_path_info(cls) -> dict:
        """
        All configured paths (for debugging and the run log)
        """
        return {
            'project_root': str(cls.PROJECT_ROOT),
            'data_dir': str(cls.DATA_DIR),
            'config_dir': str(cls.CONFIG_DIR),
            'output_dir': str(cls.OUTPUT_DIR),
            'log_dir': str(cls.LOG_DIR),
        }
