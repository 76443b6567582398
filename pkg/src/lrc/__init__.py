"""Linear reliability channel: simulation, ML decoding and large-deviations analysis."""

from .model import (
    BitSequence,
    LengthMismatch,
    LrcParams,
    ReliabilityPermutation,
    bit_flip_probability,
    elementary_symmetric_log,
    hard_noise_log_pmf,
    sample_permutation,
    soft_noise_log_pmf,
    transmit,
)

__version__ = "0.1.0"
