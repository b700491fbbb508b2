"""BPSK over AWGN: SNR conversion, frame sampling, hard decisions.

The Eb/N0 convention is rate-normalized for unit-energy BPSK:
sigma^2 = 1 / (2 * R * 10^(EbN0_dB / 10)).  Frame noise comes from a
counter-based substream keyed by (master_seed, frame_index), so results do
not depend on how frames are distributed over workers.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FrameSample:
    """One transmitted frame and its channel observations."""

    u: np.ndarray       # codeword bits
    x: np.ndarray       # bipolar symbols 1 - 2u
    y: np.ndarray       # soft channel values
    z: np.ndarray       # hard decisions (y < 0)
    sigma: float


def ebn0_to_sigma(ebn0_db, rate):
    """Noise standard deviation for a given Eb/N0 (dB) and code rate."""
    if not 0.0 < rate < 1.0:
        raise ValueError(f"rate must be in (0,1), got {rate}")
    if not np.isfinite(ebn0_db):
        raise ValueError("ebn0_db must be finite")
    return float(1.0 / np.sqrt(2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def hard_decision(y):
    """z_n = 1 iff y_n < 0; the tie y_n = 0 maps to 0 for determinism."""
    return (np.asarray(y) < 0).astype(np.uint8)


def transmit(u, sigma, rng):
    """Send bits over the AWGN channel using the caller's generator."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    u = np.asarray(u, dtype=np.uint8)
    x = 1.0 - 2.0 * u
    y = x + rng.standard_normal(len(u)) * sigma
    return FrameSample(u=u, x=x, y=y, z=hard_decision(y), sigma=float(sigma))


def frame_rng(master_seed, frame_index):
    """Counter-based per-frame generator: depends only on (seed, index)."""
    key = np.array([master_seed, frame_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
