"""One-shot random-coding simulator: codebooks, pinched square-root decoders, exact errors and bounds"""
from .scenarios import SCENARIOS, Binning, Layer, ReceiverPlan, Scenario, ThresholdTest, get_scenario
from .codebook import Codebook, CodebookSpec, codebook_size, encoder_select, generate_codebook, tensor_square
from .povm import DecoderPOVM, ReceiverContext, build_receiver_povm
from .bounds import ReceiverBound, TestBound, analytic_bound
from .simulate import (
    CodeSimulator,
    MonteCarloResult,
    ReceiverOutcome,
    ReceiverStatistics,
    TrialResult,
    average_error_exact,
    monte_carlo,
    trial_seeds,
)

__all__ = [
    'SCENARIOS',
    'Binning',
    'Layer',
    'ReceiverPlan',
    'Scenario',
    'ThresholdTest',
    'get_scenario',
    'Codebook',
    'CodebookSpec',
    'codebook_size',
    'encoder_select',
    'generate_codebook',
    'tensor_square',
    'DecoderPOVM',
    'ReceiverContext',
    'build_receiver_povm',
    'ReceiverBound',
    'TestBound',
    'analytic_bound',
    'CodeSimulator',
    'MonteCarloResult',
    'ReceiverOutcome',
    'ReceiverStatistics',
    'TrialResult',
    'average_error_exact',
    'monte_carlo',
    'trial_seeds',
]
