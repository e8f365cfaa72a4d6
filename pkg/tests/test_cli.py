"""End-to-end tests for the command-line front end."""
import json

import numpy as np
import pandas as pd
import pytest
import yaml

from qbroadcast.cli import EXIT_INPUT_ERROR, EXIT_OK, atom_table, load_channel, load_distribution, main
from qbroadcast.config import Config, NumericsConfig
from qbroadcast.errors import ValidationError
from qbroadcast.regions import degraded_channel, evaluate_region, markov_chain_distribution
from qbroadcast.schema import channel_to_file, distribution_to_file, encode_matrix


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    """Keep Config.load away from any qbroadcast.yaml in the checkout."""
    monkeypatch.chdir(tmp_path)
    for var in ('QB_SEED', 'QB_WORKERS', 'QB_OUTPUT_DIR', 'QB_LOG_FILE'):
        monkeypatch.delenv(var, raising=False)


@pytest.fixture
def instance_files(tmp_path):
    rng = np.random.default_rng(31)
    channel = degraded_channel(rng, input_size=2, d_b=2)
    dist = markov_chain_distribution(rng, 2, 2, 2).build()
    channel_path = tmp_path / 'channel.json'
    dist_path = tmp_path / 'dist.json'
    channel_path.write_text(json.dumps(channel_to_file(channel)))
    dist_path.write_text(json.dumps(distribution_to_file(dist)))
    return str(channel_path), str(dist_path)


def qubit_channel_file(tmp_path, b1_states):
    one = [encode_matrix(np.ones((1, 1)))] * len(b1_states)
    data = {
        'dims': [2, 1, 1],
        'marginals': {'B1': [encode_matrix(s) for s in b1_states], 'B2': one, 'B3': one},
    }
    path = tmp_path / 'qubit.json'
    path.write_text(json.dumps(data))
    return str(path)


def test_verify_lemmas_is_reproducible(tmp_path):
    first, second = tmp_path / 'a', tmp_path / 'b'
    args = ['verify', '--suite', 'lemmas', '--trials', '3', '--seed', '7', '--workers', '1']
    assert main(args + ['--out', str(first)]) == EXIT_OK
    assert main(args + ['--out', str(second)]) == EXIT_OK

    report = json.loads((first / 'verify_lemmas.json').read_text())
    assert report['run']['seed'] == 7
    assert report['passed'] is True
    rows = pd.read_parquet(first / 'certificates_lemmas.parquet')
    assert len(rows) == 12
    assert (first / 'verify_lemmas.json').read_bytes() == (second / 'verify_lemmas.json').read_bytes()


def test_region_fm_check(tmp_path, instance_files):
    channel, dist = instance_files
    code = main(['region', 'fm-check', '--theorem', 'multilevel', '--channel', channel, '--dist', dist,
                 '--out', str(tmp_path / 'fm')])
    assert code == EXIT_OK
    report = json.loads((tmp_path / 'fm' / 'fm_check_multilevel.json').read_text())
    assert report['equal'] is True and report['passed'] is True


def test_region_evaluate_writes_vertices(tmp_path, instance_files):
    channel, dist = instance_files
    out = tmp_path / 'eval'
    code = main(['region', 'evaluate', '--theorem', 'multilevel', '--channel', channel, '--dist', dist,
                 '--out', str(out)])
    assert code == EXIT_OK
    lines = (out / 'region_multilevel_final_R0_R1.csv').read_text().splitlines()
    assert lines[0].startswith('# command:')
    vertices = pd.read_csv(out / 'region_multilevel_final_R0_R1.csv', comment='#')
    assert list(vertices.columns) == ['R0', 'R1']
    assert ((vertices['R0'] >= 0) & (vertices['R1'] >= 0)).all()


def test_region_compare_generated_instance(tmp_path):
    out = tmp_path / 'cmp'
    assert main(['region', 'compare', '--seed', '3', '--out', str(out)]) == EXIT_OK
    report = json.loads((out / 'region_compare.json').read_text())
    assert report['generated'] is True
    assert len(report['checks']) == 4


def test_region_requires_options(tmp_path):
    assert main(['region', 'evaluate', '--theorem', 'multilevel', '--out', str(tmp_path)]) == EXIT_INPUT_ERROR


def test_eigencount_qubit(tmp_path):
    plus = np.full((2, 2), 0.5)
    path = qubit_channel_file(tmp_path, [np.diag([1.0, 0.0]), plus])
    out = tmp_path / 'eig'
    assert main(['eigencount', '--base', path, '--n', '6', '--out', str(out)]) == EXIT_OK
    report = json.loads((out / 'eigencount_n6.json').read_text())
    assert report['nu'] <= 7
    assert report['passed'] is True


def test_input_errors_exit_two(tmp_path, capsys):
    assert main(['eigencount', '--base', str(tmp_path / 'missing.json'), '--n', '2']) == EXIT_INPUT_ERROR

    bad_psd = qubit_channel_file(tmp_path, [np.diag([1.5, -0.5]), np.diag([1.0, 0.0])])
    assert main(['eigencount', '--base', bad_psd, '--n', '2']) == EXIT_INPUT_ERROR
    assert 'marginals.B1[0]' in capsys.readouterr().err

    broken = tmp_path / 'broken.json'
    broken.write_text('{"dims": [2, 1, 1], ')
    assert main(['eigencount', '--base', str(broken), '--n', '2']) == EXIT_INPUT_ERROR
    assert 'invalid JSON' in capsys.readouterr().err


def test_simulate_from_yaml_spec(tmp_path, instance_files):
    spec = {
        'scenario': 'multilevel_2deg',
        'rates': {'R0': 1.0, 'S1': 1.0, 'S2': 0.0},
        'channel': 'channel.json',
        'distribution': 'dist.json',
        'alphas': [0.3],
        'trials': 5,
        'seed': 2,
    }
    spec_path = tmp_path / 'run.yaml'
    spec_path.write_text(yaml.safe_dump(spec))
    out = tmp_path / 'sim'
    code = main(['simulate', '--spec', str(spec_path), '--trials', '2', '--workers', '1', '--out', str(out)])
    assert code == EXIT_OK
    trials = pd.read_parquet(out / 'trials_multilevel_2deg.parquet')
    assert len(trials) == 2 * 3
    report = json.loads((out / 'simulate_multilevel_2deg.json').read_text())
    assert report['trials'] == 2
    assert report['run']['seed'] == 2
    assert set(report['bounds']['0.3']) == {'B1', 'B2', 'B3'}


def test_simulate_rejects_bad_alpha(tmp_path, instance_files):
    spec_path = tmp_path / 'run.yaml'
    spec_path.write_text(yaml.safe_dump({
        'scenario': 'multilevel_2deg', 'rates': {'R0': 1.0},
        'channel': 'channel.json', 'distribution': 'dist.json',
    }))
    assert main(['simulate', '--spec', str(spec_path), '--alpha', '1.5', '--trials', '1']) == EXIT_INPUT_ERROR


def test_init_config(tmp_path):
    path = tmp_path / 'example.yaml'
    assert main(['init-config', str(path)]) == EXIT_OK
    assert yaml.safe_load(path.read_text())['runtime']['seed'] == 0


def test_density_tolerance_comes_from_config(tmp_path):
    path = qubit_channel_file(tmp_path, [np.diag([0.5 + 1e-6, 0.5]), np.diag([1.0, 0.0])])
    with pytest.raises(ValidationError):
        load_channel(path)
    channel = load_channel(path, NumericsConfig(density_tol=1e-5))
    assert channel.input_size == 2


def test_atom_table_uses_configured_quantization(instance_files):
    channel_path, dist_path = instance_files
    config = Config.from_dict({'numerics': {'quantization_bits': 8}})
    channel = load_channel(channel_path, config.numerics)
    dist = load_distribution(dist_path)
    table = atom_table(channel, dist, config)
    assert table.bits == 8
    instance = evaluate_region('multilevel_final', channel, dist, table)
    assert all(256 % row.rhs.denominator == 0 for row in instance.system.inequalities)


def test_simulate_default_alpha_and_total_error(tmp_path, instance_files):
    spec_path = tmp_path / 'run.yaml'
    spec_path.write_text(yaml.safe_dump({
        'scenario': 'multilevel_2deg', 'rates': {'R0': 1.0, 'S1': 1.0},
        'channel': 'channel.json', 'distribution': 'dist.json',
    }))
    config_path = tmp_path / 'qb.yaml'
    config_path.write_text('simulation:\n  alpha: 0.4\n')
    out = tmp_path / 'sim'
    code = main(['simulate', '--spec', str(spec_path), '--config', str(config_path), '--trials', '2',
                 '--workers', '1', '--out', str(out)])
    assert code == EXIT_OK
    report = json.loads((out / 'simulate_multilevel_2deg.json').read_text())
    assert list(report['bounds']) == ['0.4']
    for r, stats in report['receivers'].items():
        assert stats['total_error'] == pytest.approx(stats['mean'] + report['encoder_failure'])
        assert report['bounds']['0.4'][r]['within_bound'] is True
