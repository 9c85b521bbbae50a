"""
CStar - Shared test fixtures
"""

from pathlib import Path

import pytest

from cstar.kernel.registry import Registry
from cstar.quote.env import SyntaxEnv
from cstar.seplogic.theory import register_theory

BENCHMARKS = Path(__file__).resolve().parents[2] / "benchmarks"


@pytest.fixture
def registry() -> Registry:
    reg = Registry()
    register_theory(reg)
    return reg


@pytest.fixture
def env(registry: Registry) -> SyntaxEnv:
    return SyntaxEnv(registry)


@pytest.fixture
def benchmarks() -> Path:
    return BENCHMARKS


@pytest.fixture
def isolated(monkeypatch, tmp_path):
    """Keep a developer's .env and cache settings out of the tests."""
    monkeypatch.chdir(tmp_path)
    for name in ("CSTAR_INCLUDE_PATH", "CSTAR_CACHE_DIR", "CSTAR_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
