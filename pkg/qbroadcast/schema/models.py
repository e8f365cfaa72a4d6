"""
Data schemas for qbroadcast input files and output records.

Input files: broadcast channels (complex matrices as [re, im] pairs),
auxiliary distributions with deterministic input maps, and simulation run
specs. Output records: lemma certificates and Monte-Carlo trial rows.
"""
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator, model_validator

from ..errors import ValidationError
from ..linalg.hermitian import DENSITY_TOL, HERMITIAN_TOL, check_density
from ..states.cq_state import AuxiliaryDistribution, BroadcastChannel, ClassicalRegister, RECEIVERS

# Matrix rows of [re, im] pairs
ComplexMatrix = List[List[List[float]]]


def complex_matrix(entries: ComplexMatrix, path: str = 'matrix') -> np.ndarray:
    """
    Decode a matrix written as rows of [re, im] pairs.

    Raises:
        ValidationError: If an entry is not a pair or the matrix is ragged
    """
    try:
        a = np.asarray(entries, dtype=float)
    except ValueError as e:
        raise ValidationError(f"ragged matrix: {e}", path)
    if a.ndim != 3 or a.shape[-1] != 2:
        raise ValidationError(f"expected rows of [re, im] pairs, got array shape {a.shape}", path)
    return a[..., 0] + 1j * a[..., 1]


def encode_matrix(m: np.ndarray) -> ComplexMatrix:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


class ChannelFile(BaseModel):
    """
    Broadcast channel input file.

    Either ``outputs`` (joint states on B1 (x) B2 (x) B3, one per input
    symbol) or ``marginals`` (per-receiver states; the joint is their
    product) must be given.
    """
    dims: List[int] = Field(min_length=3, max_length=3, description="(d_B1, d_B2, d_B3)")
    outputs: Optional[List[ComplexMatrix]] = None
    marginals: Optional[Dict[str, List[ComplexMatrix]]] = None

    @field_validator('dims')
    @classmethod
    def positive_dims(cls, v):
        if any(d < 1 for d in v):
            raise ValueError(f"dims must be positive, got {v}")
        return v

    @model_validator(mode='after')
    def one_source(self):
        if (self.outputs is None) == (self.marginals is None):
            raise ValueError("exactly one of 'outputs' or 'marginals' is required")
        if self.marginals is not None and set(self.marginals) != set(RECEIVERS):
            raise ValueError(f"marginals must be keyed by {list(RECEIVERS)}")
        return self

    def to_channel(self, density_tol: float = DENSITY_TOL, hermitian_tol: float = HERMITIAN_TOL) -> BroadcastChannel:
        """
        Build the channel, validating every state with its entry path.

        Args:
            density_tol: Trace and positivity tolerance per state
            hermitian_tol: Hermiticity tolerance per state

        Raises:
            ValidationError: Non-PSD, non-unit-trace or misshapen entry
        """
        if self.outputs is not None:
            total = int(np.prod(self.dims))
            states = []
            for x, entry in enumerate(self.outputs):
                path = f"outputs[{x}]"
                rho = complex_matrix(entry, path)
                if rho.shape != (total, total):
                    raise ValidationError(f"expected shape {(total, total)}, got {rho.shape}", path)
                states.append(check_density(rho, density_tol, path, hermitian_tol))
            return BroadcastChannel(np.stack(states), self.dims, validate=False)

        marginals = []
        for i, receiver in enumerate(RECEIVERS):
            block = []
            for x, entry in enumerate(self.marginals[receiver]):
                path = f"marginals.{receiver}[{x}]"
                rho = complex_matrix(entry, path)
                if rho.shape != (self.dims[i], self.dims[i]):
                    raise ValidationError(f"expected shape {(self.dims[i],) * 2}, got {rho.shape}", path)
                block.append(check_density(rho, density_tol, path, hermitian_tol))
            marginals.append(np.stack(block))
        return BroadcastChannel.from_marginals(marginals, validate=False)


class RegisterEntry(BaseModel):
    """Classical register declaration"""
    name: str
    size: int = Field(ge=1)


class DistributionFile(BaseModel):
    """
    Auxiliary distribution input file.

    ``pmf`` and ``input_map`` are flat row-major lists over the declared
    registers. Instead of ``input_map``, ``input_register`` names the
    register that is the channel input itself.
    """
    registers: List[RegisterEntry] = Field(min_length=1)
    pmf: List[float]
    input_map: Optional[List[int]] = None
    input_register: Optional[str] = None

    @model_validator(mode='after')
    def shapes(self):
        size = int(np.prod([r.size for r in self.registers]))
        if len(self.pmf) != size:
            raise ValueError(f"pmf has {len(self.pmf)} entries, registers need {size}")
        if (self.input_map is None) == (self.input_register is None):
            raise ValueError("exactly one of 'input_map' or 'input_register' is required")
        if self.input_map is not None and len(self.input_map) != size:
            raise ValueError(f"input_map has {len(self.input_map)} entries, registers need {size}")
        if self.input_register is not None and self.input_register not in [r.name for r in self.registers]:
            raise ValueError(f"input_register '{self.input_register}' is not a declared register")
        return self

    def to_distribution(self) -> AuxiliaryDistribution:
        registers = [ClassicalRegister(r.name, r.size) for r in self.registers]
        if self.input_register is not None:
            return AuxiliaryDistribution.with_input_register(registers, self.pmf, self.input_register)
        return AuxiliaryDistribution(registers, self.pmf, self.input_map)


def distribution_to_file(dist: AuxiliaryDistribution) -> Dict[str, Any]:
    return {
        'registers': [{'name': r.name, 'size': r.alphabet_size} for r in dist.registers],
        'pmf': [float(p) for p in dist.pmf.ravel()],
        'input_map': [int(x) for x in dist.input_map.ravel()],
    }


def channel_to_file(channel: BroadcastChannel) -> Dict[str, Any]:
    return {
        'dims': list(channel.dims),
        'outputs': [encode_matrix(rho) for rho in channel.outputs],
    }


class SimulationSpec(BaseModel):
    """Simulation run file: scenario, rates, instance paths, orders, trials"""
    scenario: str
    rates: Dict[str, float]
    channel: str = Field(description="Path to a channel file")
    distribution: str = Field(description="Path to a distribution file")
    alphas: Optional[List[float]] = Field(default=None, description="Defaults to simulation.alpha of the config")
    trials: int = Field(gt=0, default=100)
    seed: int = 0

    @field_validator('rates')
    @classmethod
    def nonnegative_rates(cls, v):
        bad = {k: r for k, r in v.items() if r < 0}
        if bad:
            raise ValueError(f"rates must be nonnegative: {bad}")
        return v

    @field_validator('alphas')
    @classmethod
    def alpha_range(cls, v):
        if v is not None and any(not 0 < a < 1 for a in v):
            raise ValueError(f"alpha must lie in (0, 1), got {v}")
        return v


class Certificate(BaseModel):
    """Numerical check of one inequality on one instance"""
    lemma_id: str
    instance_digest: str = Field(description="sha256 of lemma id, tolerance and instance arrays")
    lhs: float
    rhs: float
    margin: float
    passed: bool
    tolerance: float = Field(ge=0)
    instance_seed: Optional[int] = None
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode='after')
    def passed_matches_margin(self):
        if self.passed != (self.margin >= -self.tolerance):
            raise ValueError("passed must equal (margin >= -tolerance)")
        return self

    def to_row(self) -> Dict[str, Any]:
        return {
            'lemma_id': self.lemma_id,
            'instance_digest': self.instance_digest,
            'instance_seed': -1 if self.instance_seed is None else self.instance_seed,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'margin': self.margin,
            'passed': self.passed,
            'tolerance': self.tolerance,
        }


# DataFrame schemas (for validation and type enforcement)

CERTIFICATE_SCHEMA = {
    'lemma_id': 'string',
    'instance_digest': 'string',
    'instance_seed': 'int64',
    'lhs': 'float64',
    'rhs': 'float64',
    'margin': 'float64',
    'passed': 'bool',
    'tolerance': 'float64',
}

# One row per (trial, receiver)
TRIAL_SCHEMA = {
    'trial': 'int64',
    'seed': 'int64',
    'receiver': 'string',
    'error': 'float64',
    'hn_bound': 'float64',
    'residual_min_eig': 'float64',
    'encoder_failure': 'float64',
}


def validate_dataframe(df: pd.DataFrame, schema: dict) -> pd.DataFrame:
    """
    Validate and enforce DataFrame schema.

    Args:
        df: DataFrame to validate
        schema: Expected schema dict (column -> dtype)

    Returns:
        Validated DataFrame with enforced types

    Raises:
        ValueError: If validation fails
    """
    missing = set(schema.keys()) - set(df.columns)
    if missing:
        raise ValueError(f"Missing required columns: {sorted(missing)}")

    for col, dtype in schema.items():
        try:
            df[col] = df[col].astype(dtype)
        except Exception as e:
            raise ValueError(f"Failed to convert '{col}' to {dtype}: {e}")

    return df
