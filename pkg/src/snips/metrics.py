"""Per-trial error metrics and aggregation of served UEs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "SERVED_THRESHOLD",
    "TrialResult",
    "rmsse_per_ue",
    "uncoded_ber",
    "served_fraction",
]

SERVED_THRESHOLD = 0.125


@dataclass(frozen=True)
class TrialResult:
    bit_errors: int
    bit_count: int
    rmsse: np.ndarray
    served: np.ndarray
    params: dict = field(default_factory=dict)

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bit_count

    @classmethod
    def from_errors(cls, rmsse, bit_errors: int, bit_count: int, **params) -> "TrialResult":
        if not 0 <= bit_errors <= bit_count:
            raise ValueError("bit error count out of range")
        rmsse = np.asarray(rmsse, dtype=float)
        return cls(int(bit_errors), int(bit_count), rmsse, rmsse < SERVED_THRESHOLD, dict(params))

    def __eq__(self, other):
        if not isinstance(other, TrialResult):
            return NotImplemented
        return (
            self.bit_errors == other.bit_errors
            and self.bit_count == other.bit_count
            and np.array_equal(self.rmsse, other.rmsse)
            and np.array_equal(self.served, other.served)
            and self.params == other.params
        )


def rmsse_per_ue(S_true: np.ndarray, S_star: np.ndarray) -> np.ndarray:
    """Root mean-square symbol error of each row (UE), relative to its energy."""
    S_true = np.asarray(S_true)
    S_star = np.asarray(S_star)
    if S_true.shape != S_star.shape:
        raise ValueError("shape mismatch")
    den = np.sum(np.abs(S_true) ** 2, axis=-1)
    if np.any(den == 0):
        raise ValueError("zero-energy transmission")
    num = np.sum(np.abs(S_star - S_true) ** 2, axis=-1)
    return np.sqrt(num / den)


def uncoded_ber(bits_true, bits_hat) -> float:
    bits_true = np.asarray(bits_true)
    bits_hat = np.asarray(bits_hat)
    if bits_true.shape != bits_hat.shape:
        raise ValueError("shape mismatch")
    return float(np.count_nonzero(bits_true != bits_hat)) / bits_true.size


def served_fraction(results: Sequence[TrialResult]) -> float:
    if len(results) == 0:
        raise ValueError("no trial results to aggregate")
    served = sum(int(np.count_nonzero(r.served)) for r in results)
    total = sum(r.served.size for r in results)
    return served / total
