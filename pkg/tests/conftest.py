import pytest

from voronoi_bounds.forms import SymForm


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("VORONOI_BOUNDS_CACHE", str(tmp_path / "cache"))


@pytest.fixture
def a2():
    return SymForm([[2, 1], [1, 2]])
