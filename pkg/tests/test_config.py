import pytest

from eiscoh.config import (
    DEFAULT_FIELD,
    DEFAULT_SEED,
    QuadratureConfig,
    RunConfig,
    build_run_config,
    load_config_file,
    parse_int_list,
)
from eiscoh.errors import ConfigError


def test_run_config_defaults():
    cfg = RunConfig(subcommand="weyl")
    assert cfg.field == DEFAULT_FIELD
    assert isinstance(cfg.quad, QuadratureConfig)
    assert cfg.quad.seed == DEFAULT_SEED
    assert cfg.quad is not RunConfig(subcommand="weyl").quad


def test_run_config_validation():
    with pytest.raises(ConfigError, match="unknown subcommand"):
        RunConfig(subcommand="plot")
    with pytest.raises(ConfigError, match="at least 2"):
        RunConfig(subcommand="weyl", n=1)
    with pytest.raises(ConfigError, match="k must lie"):
        RunConfig(subcommand="kostant", n=3, k=4)


def test_parse_int_list():
    assert parse_int_list("0, 2,-1,4") == (0, 2, -1, 4)
    with pytest.raises(ConfigError):
        parse_int_list("0,x")


def test_file_values_lose_to_flags(tmp_path):
    path = tmp_path / "eiscoh.ini"
    path.write_text("[defaults]\nfield = zeta5\nn = 4\n\n[intertwine]\nmethod = monte-carlo\nsamples = 5000\n")
    file_values = load_config_file(path, "intertwine")
    assert file_values == {"field": "zeta5", "n": 4, "method": "monte-carlo", "samples": 5000}

    cfg = build_run_config("intertwine", file_values, {"n": 3, "k": None, "seed": 7})
    assert (cfg.field, cfg.n, cfg.k) == ("zeta5", 3, None)
    assert cfg.quad.method == "monte-carlo"
    assert (cfg.quad.samples, cfg.quad.seed) == (5000, 7)


def test_other_sections_are_ignored(tmp_path):
    path = tmp_path / "eiscoh.ini"
    path.write_text("[weyl]\nn = 5\n")
    assert load_config_file(path, "kostant") == {}
