"""Configuration for pytest."""

import os
import sys

import pytest

# Ensure the repository root is importable as in a source checkout
ROOT_DIR = os.path.join(os.path.dirname(__file__), "..")
if ROOT_DIR not in sys.path:
    sys.path.insert(0, ROOT_DIR)

from metaward.metawardpy.correlators import CorrelatorFamily, CorrelatorSpec  # noqa: E402


@pytest.fixture(autouse=True)
def single_thread(monkeypatch):
    """Run verifiers serially unless a test asks for workers."""
    monkeypatch.delenv("METAWARD_THREADS", raising=False)
    yield


@pytest.fixture
def meta_spec() -> CorrelatorSpec:
    """Bounded meta-conformal two-point function with unit quantum numbers."""
    return CorrelatorSpec.matched(CorrelatorFamily.META_FINAL, x=0.75, gamma=0.5, mu=1.0)


@pytest.fixture
def dual_spec() -> CorrelatorSpec:
    """Dual two-point function away from the degenerate nu values."""
    return CorrelatorSpec.matched(CorrelatorFamily.DUAL, x=0.75, gamma=1.0, nu1=0.8, nu2=1.3, mu=0.5, c=0.25)


@pytest.fixture
def grid_file(tmp_path):
    """Return a writer for CSV grid files in a temporary directory."""

    def write(rows, header="t,r,zeta1,zeta2", name="grid.csv"):
        path = tmp_path / name
        lines = [header] + [",".join(str(value) for value in row) for row in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(path)

    return write
