"""
Artifact storage: JSON reports, CSV vertex lists and Parquet tables.
Every artifact carries the run metadata (seed, tolerances, library version).
"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

from ..schema import validate_dataframe

logger = logging.getLogger(__name__)

METADATA_KEY = b'qbroadcast'


def _default(obj: Any):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(data: Any) -> str:
    """Deterministic JSON text (key order preserved, no timestamps)."""
    return json.dumps(data, indent=2, default=_default, allow_nan=True) + '\n'


class ArtifactStore:
    """
    Writes run artifacts under one directory.

    ``metadata`` (seed, tolerances, version) is embedded in every artifact:
    as a top-level 'run' entry in JSON, as '#'-prefixed header lines in CSV,
    and as schema metadata in Parquet.
    """

    def __init__(
        self,
        base_path: str = 'artifacts',
        metadata: Optional[Dict[str, Any]] = None,
        compression: str = 'snappy'
    ):
        """
        Args:
            base_path: Output directory (created if missing)
            metadata: Run metadata embedded in every artifact
            compression: Parquet compression ('snappy', 'gzip', 'zstd')
        """
        self.base_path = Path(base_path)
        self.base_path.mkdir(parents=True, exist_ok=True)
        self.metadata = dict(metadata or {})
        self.compression = compression

    def _path(self, name: str, suffix: str) -> Path:
        path = self.base_path / name
        if path.suffix != suffix:
            path = path.with_suffix(suffix)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def write_json(self, name: str, data: Dict[str, Any]) -> Path:
        path = self._path(name, '.json')
        payload = {'run': self.metadata, **data}
        path.write_text(dumps(payload))
        logger.info(f"Wrote report to {path}")
        return path

    def write_csv(self, name: str, df: pd.DataFrame) -> Path:
        path = self._path(name, '.csv')
        header = ''.join(f"# {k}: {json.dumps(v, default=_default)}\n" for k, v in self.metadata.items())
        with open(path, 'w', newline='') as fh:
            fh.write(header)
            df.to_csv(fh, index=False)
        logger.info(f"Wrote {len(df):,} rows to {path}")
        return path

    def write_table(self, name: str, df: pd.DataFrame, schema: Optional[dict] = None) -> Optional[Path]:
        """
        Write a Parquet table, validating against ``schema`` first.

        Returns:
            Path, or None for an empty frame
        """
        if df.empty:
            logger.warning(f"Attempted to write empty table '{name}'")
            return None
        if schema:
            df = validate_dataframe(df, schema)
        path = self._path(name, '.parquet')
        table = pa.Table.from_pandas(df, preserve_index=False)
        meta = dict(table.schema.metadata or {})
        meta[METADATA_KEY] = json.dumps(self.metadata, default=_default).encode()
        pq.write_table(table.replace_schema_metadata(meta), path, compression=self.compression)
        logger.info(f"Wrote {len(df):,} rows to {path}")
        return path

    def read_table(self, name: str) -> Tuple[pd.DataFrame, Dict[str, Any]]:
        """Load a Parquet table and its run metadata."""
        path = self._path(name, '.parquet')
        if not path.exists():
            logger.warning(f"File not found: {path}")
            return pd.DataFrame(), {}
        table = pq.read_table(path)
        raw = (table.schema.metadata or {}).get(METADATA_KEY)
        return table.to_pandas(), json.loads(raw) if raw else {}

    def read_json(self, name: str) -> Dict[str, Any]:
        return json.loads(self._path(name, '.json').read_text())

    def read_csv(self, name: str) -> pd.DataFrame:
        return pd.read_csv(self._path(name, '.csv'), comment='#')
