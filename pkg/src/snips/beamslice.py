"""Cluster-wise phase-rotated DFT (beam-slicing).

The B antennas are split into C = B/S clusters of S adjacent elements and
each cluster is mapped into its own shifted angular domain by a small
unitary matrix ``V_c``. S=1 is the identity (antenna domain); S=B is the
full unitary DFT (beamspace).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

__all__ = ["BeamSlicer", "dft_matrix", "build_slicer", "apply"]


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT, ``F[k, l] = exp(-2j*pi*k*l/n) / sqrt(n)``."""
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


@dataclass(frozen=True)
class BeamSlicer:
    B: int
    S: int
    blocks: np.ndarray  # C x S x S

    @property
    def C(self) -> int:
        return self.B // self.S

    def matrix(self) -> np.ndarray:
        """Dense block-diagonal B x B matrix V."""
        return block_diag(*self.blocks)

    def apply(self, Y: np.ndarray) -> np.ndarray:
        return apply(self, Y)

    def transform_cov(self, C: np.ndarray) -> np.ndarray:
        """``V C V^H`` for a B x B matrix."""
        return apply(self, apply(self, C).conj().T).conj().T


def build_slicer(B: int, S: int) -> BeamSlicer:
    if S < 1 or B % S:
        raise ValueError(f"S={S} does not divide B={B}")
    C = B // S
    F = dft_matrix(S)
    s = np.arange(S)
    c = np.arange(C)
    phases = np.exp(-2j * np.pi / B * np.outer(c, s))  # C x S
    blocks = F[None, :, :] * phases[:, None, :]
    blocks.setflags(write=False)
    return BeamSlicer(B=B, S=S, blocks=blocks)


def apply(slicer: BeamSlicer, Y: np.ndarray) -> np.ndarray:
    """Beam-slice the rows of ``Y`` (B x n, or a length-B vector)."""
    Y = np.asarray(Y)
    if Y.shape[0] != slicer.B:
        raise ValueError(f"expected {slicer.B} rows, got {Y.shape[0]}")
    if slicer.S == 1:
        return Y.astype(complex, copy=True)
    vec = Y.ndim == 1
    Yc = Y.reshape(slicer.C, slicer.S, -1)
    out = np.einsum("cij,cjn->cin", slicer.blocks, Yc)
    out = out.reshape(slicer.B, -1)
    return out[:, 0] if vec else out
