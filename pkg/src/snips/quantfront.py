"""Low-resolution data conversion: gain control, midrise quantizer, Bussgang constants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import ndtr

__all__ = [
    "QuantizerSpec",
    "GainControl",
    "quantizer_moments",
    "quantizer_mse",
    "optimal_step",
    "bussgang_constants",
    "quantizer_spec",
    "quantize_real",
    "learn_gains",
    "quantize_complex",
    "MAX_GAIN",
]

MAX_GAIN = 1e6
_ZERO_ENERGY = 1e-30
_STEP_BOUNDS = (1e-3, 4.0)


def _phi(t):
    return np.exp(-0.5 * np.square(t)) / math.sqrt(2.0 * math.pi)


def quantizer_moments(q: int, delta: float) -> tuple[float, float]:
    """Return ``(E[Q(x) x], E[Q(x)^2])`` for x ~ N(0, 1).

    Uses the exact Gaussian integrals over the 2^q cells: the positive half
    has cells [k*delta, (k+1)*delta) with level (k + 1/2)*delta, and the
    outermost cell extends to infinity.
    """
    L = 2 ** (q - 1)
    k = np.arange(L)
    levels = (k + 0.5) * delta
    lo = k * delta
    hi = np.append(lo[1:], np.inf)
    # \int_a^b x phi(x) dx = phi(a) - phi(b);  \int_a^b phi(x) dx = Phi(b) - Phi(a)
    phi_hi = np.where(np.isinf(hi), 0.0, _phi(np.where(np.isinf(hi), 0.0, hi)))
    first = 2.0 * np.sum(levels * (_phi(lo) - phi_hi))
    prob = ndtr(hi) - ndtr(lo)
    second = 2.0 * np.sum(levels**2 * prob)
    return float(first), float(second)


def quantizer_mse(q: int, delta: float) -> float:
    """E[(Q(x) - x)^2] for standard normal x."""
    qx, qq = quantizer_moments(q, delta)
    return qq - 2.0 * qx + 1.0


@lru_cache(maxsize=None)
def optimal_step(q: int) -> float:
    """MSE-optimal step size of the q-bit midrise quantizer for N(0, 1) input."""
    if not (isinstance(q, (int, np.integer)) and q >= 1):
        raise ValueError(f"q must be a finite positive integer, got {q!r}")
    res = minimize_scalar(
        lambda d: quantizer_mse(int(q), d),
        bounds=_STEP_BOUNDS,
        method="bounded",
        options={"xatol": 1e-12, "maxiter": 500},
    )
    return float(res.x)


def bussgang_constants(q: int, delta: float) -> tuple[float, float]:
    """Bussgang gain and distortion power for unit-variance Gaussian input.

    ``gamma = E[Q(x) x]`` and ``D = E[Q(x)^2] - gamma^2``.
    """
    qx, qq = quantizer_moments(q, delta)
    return qx, qq - qx**2


@dataclass(frozen=True)
class QuantizerSpec:
    """Resolution plus its derived constants. ``q = inf`` is ideal conversion."""

    q: float
    delta: float
    gamma: float
    dist_power: float

    @property
    def infinite(self) -> bool:
        return math.isinf(self.q)

    @property
    def saturation(self) -> float:
        return 0.5 * self.delta * (2**self.q - 1)

    def alphabet(self) -> np.ndarray:
        L = 2 ** (int(self.q) - 1)
        pos = (np.arange(L) + 0.5) * self.delta
        return np.concatenate([-pos[::-1], pos])

    def mse(self) -> float:
        return 0.0 if self.infinite else quantizer_mse(int(self.q), self.delta)


@lru_cache(maxsize=None)
def quantizer_spec(q) -> QuantizerSpec:
    if q is None or math.isinf(q):
        return QuantizerSpec(q=math.inf, delta=0.0, gamma=1.0, dist_power=0.0)
    q = int(q)
    delta = optimal_step(q)
    gamma, D = bussgang_constants(q, delta)
    return QuantizerSpec(q=q, delta=delta, gamma=gamma, dist_power=D)


def quantize_real(x, spec: QuantizerSpec):
    """Midrise quantizer; |x| >= delta * 2^(q-1) saturates."""
    x = np.asarray(x, dtype=float)
    if spec.infinite:
        return x.copy()
    d = spec.delta
    sat = spec.saturation
    # (floor + 1/2) * delta is exactly odd off the cell boundaries
    return np.clip((np.floor(x / d) + 0.5) * d, -sat, sat)


@dataclass(frozen=True)
class GainControl:
    gains: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gains, dtype=float)
        if not (np.all(g > 0) and np.all(np.isfinite(g))):
            raise ValueError("gains must be positive and finite")


def learn_gains(Ytrain: np.ndarray, max_gain: float = MAX_GAIN) -> GainControl:
    """Per-row gains making each row unit variance per real dimension."""
    Ytrain = np.asarray(Ytrain)
    if Ytrain.ndim != 2 or Ytrain.shape[1] < 1:
        raise ValueError("training block must be B x T with T >= 1")
    T = Ytrain.shape[1]
    energy = np.sum(np.abs(Ytrain) ** 2, axis=1)
    with np.errstate(divide="ignore"):
        g = np.sqrt(2.0 * T / energy)
    g = np.where(energy < _ZERO_ENERGY, max_gain, np.minimum(g, max_gain))
    return GainControl(g)


def quantize_complex(Y: np.ndarray, G: GainControl, spec: QuantizerSpec) -> np.ndarray:
    """``G^-1 (Q(Re{G Y}) + i Q(Im{G Y}))`` applied row-wise."""
    Y = np.asarray(Y)
    g = np.asarray(G.gains)
    if Y.shape[0] != g.shape[0]:
        raise ValueError(f"Y has {Y.shape[0]} rows but {g.shape[0]} gains")
    if spec.infinite:
        return Y.copy()
    shape = (-1,) + (1,) * (Y.ndim - 1)
    gs = g.reshape(shape)
    Z = gs * Y
    return (quantize_real(Z.real, spec) + 1j * quantize_real(Z.imag, spec)) / gs
