"""Bussgang-aware soft-nulling LMMSE equalizer and the 16-QAM slicer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .quantfront import GainControl, QuantizerSpec
from .scenario import Constellation

__all__ = [
    "NotPositiveDefiniteError",
    "Equalizer",
    "loading_matrix",
    "build_equalizer",
    "equalizer_unnormalized",
    "equalize",
    "hard_decision",
]


class NotPositiveDefiniteError(LinAlgError):
    pass


@dataclass(frozen=True)
class Equalizer:
    W: np.ndarray
    gamma: float
    D: float
    S: int | None = None
    q: float | None = None


def loading_matrix(Cj_hat, N0, spec: QuantizerSpec, G: GainControl | None) -> np.ndarray:
    """``Cj + N0 I + 2 D gamma^-2 G^-2``, the interference-plus-distortion term."""
    B = Cj_hat.shape[0]
    A = np.array(Cj_hat, dtype=complex, copy=True)
    diag = np.full(B, float(N0))
    if spec.dist_power > 0:
        if G is None:
            raise ValueError("finite-resolution equalizer needs the pilot gain control")
        diag += 2.0 * spec.dist_power / spec.gamma**2 / np.asarray(G.gains) ** 2
    A[np.diag_indices(B)] += diag
    return A


def _solve_hpd(A: np.ndarray, Rhs: np.ndarray) -> np.ndarray:
    # Cholesky on the Hermitian part; rounding can leave a tiny skew part
    A = 0.5 * (A + A.conj().T)
    try:
        factor = cho_factor(A, lower=True, check_finite=True)
    except LinAlgError as exc:
        raise NotPositiveDefiniteError("system not positive definite") from exc
    return cho_solve(factor, Rhs)


def build_equalizer(
    H_hat: np.ndarray,
    Cj_hat: np.ndarray,
    N0: float,
    Es: float,
    spec: QuantizerSpec,
    G_pilot: GainControl | None = None,
    S: int | None = None,
) -> Equalizer:
    """``W = (1/gamma) H^H (H H^H + (Cj + N0 I + 2 D gamma^-2 G^-2) / Es)^-1``.

    Solved with a Cholesky factorization of the B x B system matrix; since
    that matrix is Hermitian, ``W^H = A^-1 H / gamma``.
    """
    H_hat = np.asarray(H_hat)
    A = H_hat @ H_hat.conj().T + loading_matrix(Cj_hat, N0, spec, G_pilot) / Es
    W = _solve_hpd(A, H_hat).conj().T / spec.gamma
    return Equalizer(W=W, gamma=spec.gamma, D=spec.dist_power, S=S, q=spec.q)


def equalizer_unnormalized(H_hat, Cj_hat, N0, Es, spec: QuantizerSpec, G_pilot=None) -> np.ndarray:
    """Same equalizer written with the gamma factors kept inside the inverse.

    ``gamma Es H^H (gamma^2 Es H H^H + gamma^2 Cj + gamma^2 N0 I + 2 D G^-2)^-1``
    """
    g = spec.gamma
    B = H_hat.shape[0]
    A = g**2 * Es * H_hat @ H_hat.conj().T + g**2 * np.asarray(Cj_hat) + g**2 * N0 * np.eye(B)
    if spec.dist_power > 0:
        A = A + np.diag(2.0 * spec.dist_power / np.asarray(G_pilot.gains) ** 2)
    return g * Es * _solve_hpd(A, H_hat).conj().T


def equalize(eq: Equalizer, R: np.ndarray) -> np.ndarray:
    R = np.asarray(R)
    if R.shape[0] != eq.W.shape[1]:
        raise ValueError(f"R has {R.shape[0]} rows, equalizer expects {eq.W.shape[1]}")
    return eq.W @ R


def hard_decision(S_star: np.ndarray, constellation: Constellation):
    """Minimum-distance slicing; ties resolve to the smallest symbol index.

    Returns ``(indices, bits)`` with ``bits.shape == indices.shape + (4,)``.
    """
    S_star = np.asarray(S_star)
    dist = np.abs(S_star[..., None] - constellation.points) ** 2
    idx = np.argmin(dist, axis=-1)
    return idx, constellation.bits[idx]
