from .models import (
    CERTIFICATE_SCHEMA,
    TRIAL_SCHEMA,
    Certificate,
    ChannelFile,
    DistributionFile,
    RegisterEntry,
    SimulationSpec,
    channel_to_file,
    complex_matrix,
    distribution_to_file,
    encode_matrix,
    validate_dataframe,
)

__all__ = [
    'CERTIFICATE_SCHEMA',
    'TRIAL_SCHEMA',
    'Certificate',
    'ChannelFile',
    'DistributionFile',
    'RegisterEntry',
    'SimulationSpec',
    'channel_to_file',
    'complex_matrix',
    'distribution_to_file',
    'encode_matrix',
    'validate_dataframe',
]
