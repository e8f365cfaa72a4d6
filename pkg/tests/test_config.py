"""Tests for configuration loading and logging setup."""
import logging

import pytest

from qbroadcast.config import (
    Config,
    LoggingConfig,
    OptimizerConfig,
    create_example_config,
    setup_logging,
)


def test_defaults():
    config = Config()
    assert config.numerics.quantization_bits == 40
    assert config.optimizer == OptimizerConfig(restarts=5, max_iter=2000, ftol=1e-12, gtol=1e-10)
    assert config.simulation.alpha == 0.3
    assert config.search.aux_sizes == {}


def test_from_dict_fills_missing_sections():
    config = Config.from_dict({'runtime': {'seed': 42}, 'search': {'samples': 10, 'aux_sizes': {'U': 3}}})
    assert config.runtime.seed == 42
    assert config.runtime.workers == 4
    assert config.search.aux_sizes == {'U': 3}
    assert config.numerics.dim_cap == 256


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(TypeError):
        Config.from_dict({'runtime': {'seeds': 1}})


def test_from_file_missing():
    with pytest.raises(FileNotFoundError):
        Config.from_file('/nonexistent/qbroadcast.yaml')


def test_example_config_round_trip(tmp_path, capsys):
    path = tmp_path / 'qbroadcast.yaml'
    create_example_config(str(path))
    assert 'Example config created' in capsys.readouterr().out
    config = Config.from_file(str(path))
    assert config.search.aux_sizes == {'U': 2, 'V': 2}
    assert config.to_dict()['numerics'] == Config().to_dict()['numerics']


def test_from_env(monkeypatch):
    monkeypatch.setenv('QB_SEED', '17')
    monkeypatch.setenv('QB_DIM_CAP', '64')
    monkeypatch.setenv('QB_LOG_LEVEL', 'DEBUG')
    config = Config.from_env()
    assert config.runtime.seed == 17
    assert config.numerics.dim_cap == 64
    assert config.logging.level == 'DEBUG'


def test_load_prefers_file(tmp_path, monkeypatch):
    path = tmp_path / 'custom.yaml'
    path.write_text('runtime:\n  seed: 5\n')
    monkeypatch.setenv('QB_SEED', '99')
    assert Config.load(str(path)).runtime.seed == 5
    monkeypatch.chdir(tmp_path)
    assert Config.load().runtime.seed == 99


def test_setup_logging_writes_file(tmp_path):
    root = logging.getLogger()
    saved_handlers, saved_level = list(root.handlers), root.level
    log_file = tmp_path / 'logs' / 'run.log'
    try:
        setup_logging(LoggingConfig(level='DEBUG', log_file=str(log_file)))
        logging.getLogger('qbroadcast.test').debug('hello from the test')
        for handler in root.handlers:
            handler.flush()
        assert 'hello from the test' in log_file.read_text()
    finally:
        for handler in list(root.handlers):
            root.removeHandler(handler)
            handler.close()
        for handler in saved_handlers:
            root.addHandler(handler)
        root.setLevel(saved_level)
