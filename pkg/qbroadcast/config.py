"""
Configuration management for qbroadcast.
Supports config files, environment variables, and defaults.
"""
import os
import logging
import logging.handlers
import yaml
from pathlib import Path
from typing import Optional, Dict, Any
from dataclasses import dataclass, field, asdict


@dataclass
class NumericsConfig:
    """Tolerances and caps shared by every numerical module"""
    cluster_tol: float = 1e-9
    hermitian_tol: float = 1e-12
    density_tol: float = 1e-10
    certificate_tol: float = 1e-9
    dim_cap: int = 256
    quantization_bits: int = 40


@dataclass
class OptimizerConfig:
    """Minimization settings for the down-arrow Renyi mutual information"""
    restarts: int = 5
    max_iter: int = 2000
    ftol: float = 1e-12
    gtol: float = 1e-10


@dataclass
class SimulationConfig:
    """Random-coding simulator settings"""
    trials: int = 100
    alpha: float = 0.3
    raw_product: bool = False
    encoder_threshold: float = 1.0


@dataclass
class SearchConfig:
    """Distribution search settings for frontier sampling"""
    samples: int = 200
    refine_steps: int = 50
    step_size: float = 0.1
    aux_sizes: Dict[str, int] = field(default_factory=dict)


@dataclass
class RuntimeConfig:
    """Process-level settings"""
    seed: int = 0
    workers: int = 4
    output_dir: str = 'artifacts'


@dataclass
class LoggingConfig:
    """Logging configuration"""
    level: str = 'INFO'
    log_file: Optional[str] = None
    max_bytes: int = 10 * 1024 * 1024
    backup_count: int = 3


@dataclass
class Config:
    """Main configuration object"""
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    search: SearchConfig = field(default_factory=SearchConfig)
    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    @classmethod
    def from_file(cls, config_path: str) -> 'Config':
        """
        Load configuration from YAML file.

        Args:
            config_path: Path to qbroadcast.yaml

        Returns:
            Config object
        """
        config_file = Path(config_path)

        if not config_file.exists():
            raise FileNotFoundError(f"Config file not found: {config_path}")

        with open(config_file, 'r') as f:
            data = yaml.safe_load(f)

        return cls.from_dict(data or {})

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Config':
        """
        Create Config from dictionary.

        Args:
            data: Configuration dict (missing sections take defaults)

        Returns:
            Config object
        """
        return cls(
            numerics=NumericsConfig(**data.get('numerics', {})),
            optimizer=OptimizerConfig(**data.get('optimizer', {})),
            simulation=SimulationConfig(**data.get('simulation', {})),
            search=SearchConfig(**data.get('search', {})),
            runtime=RuntimeConfig(**data.get('runtime', {})),
            logging=LoggingConfig(**data.get('logging', {}))
        )

    @classmethod
    def from_env(cls) -> 'Config':
        """
        Load configuration from environment variables.

        Environment variables:
            QB_SEED
            QB_WORKERS
            QB_OUTPUT_DIR
            QB_DIM_CAP
            QB_CLUSTER_TOL
            QB_LOG_LEVEL
            QB_LOG_FILE

        Returns:
            Config object
        """
        return cls(
            numerics=NumericsConfig(
                dim_cap=int(os.getenv('QB_DIM_CAP', '256')),
                cluster_tol=float(os.getenv('QB_CLUSTER_TOL', '1e-9'))
            ),
            runtime=RuntimeConfig(
                seed=int(os.getenv('QB_SEED', '0')),
                workers=int(os.getenv('QB_WORKERS', '4')),
                output_dir=os.getenv('QB_OUTPUT_DIR', 'artifacts')
            ),
            logging=LoggingConfig(
                level=os.getenv('QB_LOG_LEVEL', 'INFO'),
                log_file=os.getenv('QB_LOG_FILE')
            )
        )

    @classmethod
    def load(cls, config_path: Optional[str] = None) -> 'Config':
        """
        Load configuration with priority: file > env > defaults.

        Args:
            config_path: Optional path to qbroadcast.yaml

        Returns:
            Config object
        """
        if config_path and Path(config_path).exists():
            return cls.from_file(config_path)

        default_path = Path('qbroadcast.yaml')
        if default_path.exists():
            return cls.from_file(str(default_path))

        return cls.from_env()

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def setup_logging(config: Optional[LoggingConfig] = None) -> None:
    """
    Configure root logging: console handler plus optional rotating file.

    Args:
        config: Logging settings (default: INFO to console only)
    """
    config = config or LoggingConfig()
    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    root = logging.getLogger()
    root.setLevel(getattr(logging, config.level.upper(), logging.INFO))
    for handler in list(root.handlers):
        root.removeHandler(handler)

    console = logging.StreamHandler()
    console.setFormatter(formatter)
    root.addHandler(console)

    if config.log_file:
        Path(config.log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            config.log_file,
            maxBytes=config.max_bytes,
            backupCount=config.backup_count
        )
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)


def create_example_config(output_path: str = 'qbroadcast.yaml'):
    """
    Create example configuration file.

    Args:
        output_path: Where to save example config
    """
    example = Config().to_dict()
    example['search']['aux_sizes'] = {'U': 2, 'V': 2}

    with open(output_path, 'w') as f:
        yaml.dump(example, f, default_flow_style=False, sort_keys=False)

    print(f"Example config created: {output_path}")
