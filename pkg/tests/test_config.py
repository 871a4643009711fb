from pathlib import Path

import pytest
from pydantic import ValidationError

from primon.config import OutputFormat, RunConfig


def test_defaults(monkeypatch):
    monkeypatch.delenv("PRIMON_CACHE", raising=False)
    config = RunConfig()
    assert config.precision_bits == 128
    assert config.quadrature_tolerance == 1e-20
    assert config.output_format is OutputFormat.CSV
    assert config.prime_cache_path is None
    assert config.significant_digits == 20


def test_cache_path_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("PRIMON_CACHE", str(tmp_path / "p.bin"))
    assert RunConfig().prime_cache_path == tmp_path / "p.bin"


def test_explicit_value_beats_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("PRIMON_CACHE", str(tmp_path / "env.bin"))
    monkeypatch.setenv("PRIMON_PRECISION_BITS", "200")
    config = RunConfig(prime_cache_path=Path("flag.bin"), precision_bits=256)
    assert config.prime_cache_path == Path("flag.bin")
    assert config.precision_bits == 256


def test_invalid_values_are_rejected():
    with pytest.raises(ValidationError):
        RunConfig(precision_bits=32)
    with pytest.raises(ValidationError):
        RunConfig(quadrature_tolerance=0)
    with pytest.raises(ValidationError):
        RunConfig(unknown_key=1)


def test_workers_auto():
    assert RunConfig(thread_count=3).workers() == 3
    assert 1 <= RunConfig(thread_count=0).workers() <= 8
