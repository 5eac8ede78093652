import pytest

from simulation.wave import GridSpec


@pytest.fixture
def small_grid():
    """Coarse grid that still resolves the first rings of J0"""
    return GridSpec(half_width=8.0, resolution=96, counting_radius=7.0)


@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / "output"
    path.mkdir()
    return path
