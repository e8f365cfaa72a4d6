"""
Exception hierarchy for qbroadcast.
Library code raises these; the CLI maps them to exit codes.
"""
from typing import Optional


class QBroadcastError(Exception):
    """Base class for all qbroadcast errors"""


class ValidationError(QBroadcastError, ValueError):
    """
    Invalid operator, state, distribution or input file entry.

    Args:
        message: Human readable description
        path: Location of the offending entry (e.g. 'outputs[3]')
    """

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class DimensionError(QBroadcastError, ValueError):
    """Dimension mismatch or configured dimension cap exceeded"""


class MarkovConstraintError(ValidationError):
    """
    Distribution violates a Markov chain a region requires.

    Args:
        chain: Violated chain, e.g. 'U-V-X'
        deviation: Largest absolute deviation from the factorization
    """

    def __init__(self, chain: str, deviation: float):
        self.chain = chain
        self.deviation = deviation
        super().__init__(
            f"distribution violates Markov chain {chain} (max deviation {deviation:.3e})"
        )


class InfeasibleSystemError(QBroadcastError):
    """Linear program or inequality system has no feasible point"""


class UnboundedSystemError(QBroadcastError):
    """Linear program is unbounded in the requested direction"""


class ConvergenceWarning(UserWarning):
    """Numerical optimizer stopped before meeting its tolerances"""
