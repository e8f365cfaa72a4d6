"""Classical-quantum states, broadcast channels and auxiliary distributions"""
from .cq_state import (
    RECEIVERS,
    AuxiliaryDistribution,
    BroadcastChannel,
    ClassicalRegister,
    CqState,
    channel_to_cqstate,
    cq_from_classical,
    receiver_index,
    receiver_states,
)

__all__ = [
    'RECEIVERS',
    'AuxiliaryDistribution',
    'BroadcastChannel',
    'ClassicalRegister',
    'CqState',
    'channel_to_cqstate',
    'cq_from_classical',
    'receiver_index',
    'receiver_states',
]
