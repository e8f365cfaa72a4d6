"""Tests for artifact storage."""
import json
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from qbroadcast.schema import TRIAL_SCHEMA
from qbroadcast.storage import ArtifactStore, dumps

META = {'seed': 7, 'tolerance': 1e-9, 'version': '0.1.0'}


@pytest.fixture
def store(tmp_path):
    return ArtifactStore(str(tmp_path / 'out'), metadata=META)


def trial_frame():
    return pd.DataFrame([
        {'trial': 0, 'seed': 11, 'receiver': 'B1', 'error': 0.12, 'hn_bound': 0.5,
         'residual_min_eig': 0.0, 'encoder_failure': 0.0},
        {'trial': 0, 'seed': 11, 'receiver': 'B2', 'error': 0.05, 'hn_bound': 0.3,
         'residual_min_eig': 0.01, 'encoder_failure': 0.0},
    ])


def test_json_carries_run_metadata_first(store):
    path = store.write_json('report', {'equal': True, 'value': Fraction(3, 8)})
    data = json.loads(path.read_text())
    assert list(data)[0] == 'run'
    assert data['run'] == META
    assert data['value'] == '3/8'
    assert store.read_json('report')['equal'] is True


def test_json_rewrite_is_bit_identical(store):
    payload = {'rows': [1, 2, 3], 'x': np.float64(0.25)}
    first = store.write_json('same', payload).read_bytes()
    second = store.write_json('same', payload).read_bytes()
    assert first == second
    assert first.endswith(b'\n')


def test_csv_header_and_read_back(store):
    df = pd.DataFrame({'R0': ['0', '1/2'], 'R1': ['1/4', '0']})
    path = store.write_csv('vertices', df)
    lines = path.read_text().splitlines()
    assert lines[0] == '# seed: 7'
    assert lines[1].startswith('# tolerance:')
    back = store.read_csv('vertices')
    assert list(back.columns) == ['R0', 'R1']
    assert len(back) == 2


def test_parquet_metadata_round_trip(store):
    path = store.write_table('trials', trial_frame(), TRIAL_SCHEMA)
    assert path.suffix == '.parquet'
    df, meta = store.read_table('trials')
    assert meta == META
    assert list(df['receiver']) == ['B1', 'B2']
    assert str(df['trial'].dtype) == 'int64'


def test_empty_and_missing_tables(store):
    assert store.write_table('nothing', pd.DataFrame()) is None
    df, meta = store.read_table('absent')
    assert df.empty and meta == {}


def test_schema_rejects_missing_columns(store):
    with pytest.raises(ValueError):
        store.write_table('bad', trial_frame().drop(columns=['hn_bound']), TRIAL_SCHEMA)


def test_dumps_numpy_and_fractions():
    text = dumps({'a': np.int64(3), 'b': np.bool_(True), 'c': np.arange(2), 'd': (Fraction(1, 3),)})
    assert json.loads(text) == {'a': 3, 'b': True, 'c': [0, 1], 'd': ['1/3']}
    with pytest.raises(TypeError):
        dumps({'x': object()})
