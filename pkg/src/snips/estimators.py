"""Jammer-covariance and pilot-based LS channel estimation in the beam-slice domain."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beamslice import BeamSlicer, dft_matrix
from .quantfront import GainControl, QuantizerSpec, learn_gains, quantize_complex
from .scenario import ChannelSet, crandn, transmit_and_receive

__all__ = [
    "JammerCovEstimate",
    "ChannelEstimate",
    "jammer_cov_from_samples",
    "estimate_jammer_cov",
    "pilot_matrix",
    "ls_channel",
    "estimate_channel",
]


@dataclass(frozen=True)
class JammerCovEstimate:
    Cj_hat: np.ndarray

    def check(self, herm_tol: float = 1e-12, psd_tol: float = 1e-10) -> None:
        C = self.Cj_hat
        scale = max(1.0, float(np.max(np.abs(C))))
        if np.max(np.abs(C - C.conj().T)) > herm_tol * scale:
            raise AssertionError("jammer covariance estimate is not Hermitian")
        if np.min(np.linalg.eigvalsh(C)) < -psd_tol * scale:
            raise AssertionError("jammer covariance estimate is not PSD")


@dataclass(frozen=True)
class ChannelEstimate:
    H_hat: np.ndarray
    G_pilot: GainControl


def jammer_cov_from_samples(R_J: np.ndarray) -> JammerCovEstimate:
    R_J = np.asarray(R_J)
    C = R_J @ R_J.conj().T / R_J.shape[1]
    # exact Hermitian symmetry; the product is Hermitian only up to rounding
    C = 0.5 * (C + C.conj().T)
    return JammerCovEstimate(C)


def estimate_jammer_cov(
    channels: ChannelSet,
    slicer: BeamSlicer,
    spec: QuantizerSpec,
    rng: np.random.Generator,
    N: int,
) -> JammerCovEstimate:
    """Estimate the beam-sliced jammer covariance from N jammer-only slots.

    UEs are silent; the gain control for this phase is learned from the
    received block itself and discarded afterwards.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    B, U = channels.H.shape
    sJ = crandn(rng, N, channels.Ej)
    Y = transmit_and_receive(channels.H, np.zeros((U, N)), channels.hJ, sJ, channels.N0, rng)
    Y_hat = slicer.apply(Y)
    G = learn_gains(Y_hat)
    R_J = quantize_complex(Y_hat, G, spec)
    return jammer_cov_from_samples(R_J)


def pilot_matrix(U: int, Es: float = 1.0) -> np.ndarray:
    """Orthogonal constant-modulus pilots, ``S_P S_P^H = U Es I``."""
    if U < 1:
        raise ValueError("U must be >= 1")
    return math.sqrt(U * Es) * dft_matrix(U)


def ls_channel(R_P: np.ndarray, S_P: np.ndarray, Es: float | None = None) -> np.ndarray:
    """LS estimate ``R_P S_P^H (S_P S_P^H)^-1``.

    With ``Es`` given, the orthogonal-pilot shortcut ``R_P S_P^H / (U Es)``
    is used instead of the general solve.
    """
    if Es is not None:
        return R_P @ S_P.conj().T / (S_P.shape[0] * Es)
    gram = S_P @ S_P.conj().T
    return np.linalg.solve(gram.T, (R_P @ S_P.conj().T).T).T


def estimate_channel(
    channels: ChannelSet,
    slicer: BeamSlicer,
    spec: QuantizerSpec,
    S_P: np.ndarray,
    rng: np.random.Generator,
    Es: float = 1.0,
) -> ChannelEstimate:
    """Pilot phase with the jammer active; returns the estimate and the gains.

    The gain control learned here is the one used for data detection.
    """
    U = S_P.shape[0]
    w = crandn(rng, S_P.shape[1], channels.Ej)
    Y = transmit_and_receive(channels.H, S_P, channels.hJ, w, channels.N0, rng)
    Y_hat = slicer.apply(Y)
    G = learn_gains(Y_hat)
    R_P = quantize_complex(Y_hat, G, spec)
    H_hat = ls_channel(R_P, S_P, Es)
    assert H_hat.shape[1] == U
    return ChannelEstimate(H_hat=H_hat, G_pilot=G)
