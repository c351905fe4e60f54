"""UE/jammer geometry, the far-field LoS channel, and power calibration.

Every random draw goes through an explicit ``numpy.random.Generator`` so a
trial is fully reproducible from its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "SystemParams",
    "Placement",
    "ChannelSet",
    "Constellation",
    "PlacementError",
    "qam16",
    "draw_placement",
    "steering_vector",
    "los_channel",
    "calibrate_noise",
    "calibrate_jammer",
    "transmit_and_receive",
    "crandn",
]

MAX_PLACEMENT_ATTEMPTS = 10_000


class PlacementError(RuntimeError):
    """Raised when rejection sampling cannot satisfy the separation rules."""


def _is_infinite_q(q) -> bool:
    return q is None or (isinstance(q, float) and math.isinf(q))


@dataclass(frozen=True)
class SystemParams:
    """All knobs of one simulated operating point.

    ``q = math.inf`` means ideal (unquantized) conversion and
    ``rho_db = -math.inf`` means no jammer.
    """

    B: int = 256
    U: int = 32
    S: int = 8
    q: float = 4
    snr_db: float = 15.0
    rho_db: float = 25.0
    Es: float = 1.0
    N: int = 256
    n_data: int = 128
    trials: int = 200
    seed: int = 0
    sector_deg: float = 120.0
    min_sep_deg: float = 1.0
    pc_range_db: float = 3.0

    def __post_init__(self):
        if _is_infinite_q(self.q):
            object.__setattr__(self, "q", math.inf)
        elif int(self.q) != self.q or self.q < 1:
            raise ValueError(f"q must be a positive integer or inf, got {self.q!r}")
        else:
            object.__setattr__(self, "q", int(self.q))
        if self.rho_db is None:
            object.__setattr__(self, "rho_db", -math.inf)
        for name in ("B", "U", "S", "N", "n_data", "trials"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.U > self.B:
            raise ValueError("U must not exceed B")
        if self.B % self.S:
            raise ValueError(f"S={self.S} does not divide B={self.B}")
        if (self.U + 1) * self.min_sep_deg >= self.sector_deg:
            raise ValueError("sector too narrow for the requested UE separation")

    @property
    def C(self) -> int:
        return self.B // self.S

    @property
    def has_jammer(self) -> bool:
        return not math.isinf(self.rho_db)

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class Placement:
    ue_angles: np.ndarray   # degrees
    jammer_angle: float     # degrees
    ue_gains: np.ndarray    # linear receive-power gains


@dataclass
class ChannelSet:
    H: np.ndarray
    hJ: np.ndarray
    N0: float = float("nan")
    Ej: float = 0.0


@dataclass(frozen=True)
class Constellation:
    """Gray-mapped square 16-QAM.

    Index ``i`` carries bits ``(i >> 3, i >> 2, i >> 1, i) & 1``; the first
    two bits select the in-phase level, the last two the quadrature level.
    """

    points: np.ndarray
    bits: np.ndarray = field(repr=False)
    bits_per_symbol: int = 4


# Gray order of the 4-PAM levels: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
_PAM4 = {0b00: -3.0, 0b01: -1.0, 0b11: 1.0, 0b10: 3.0}


def qam16(Es: float = 1.0) -> Constellation:
    idx = np.arange(16)
    re = np.array([_PAM4[i >> 2] for i in idx])
    im = np.array([_PAM4[i & 0b11] for i in idx])
    points = (re + 1j * im) * math.sqrt(Es / 10.0)
    bits = ((idx[:, None] >> np.arange(3, -1, -1)) & 1).astype(np.uint8)
    return Constellation(points=points, bits=bits)


def crandn(rng: np.random.Generator, shape, var: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with variance ``var``."""
    return math.sqrt(var / 2.0) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def draw_placement(params: SystemParams, rng: np.random.Generator) -> Placement:
    """Draw UE and jammer angles plus per-UE power-control gains.

    Angles are uniform in the sector; a candidate closer than
    ``min_sep_deg`` to any angle already placed is redrawn. The budget counts
    every draw. Gains are log-uniform within ``±pc_range_db``.
    """
    half = params.sector_deg / 2.0
    angles: list[float] = []
    attempts = 0
    # jammer first, then the UEs one by one; each candidate is redrawn alone
    while len(angles) < params.U + 1:
        if attempts >= MAX_PLACEMENT_ATTEMPTS:
            raise PlacementError(
                f"placement infeasible after {MAX_PLACEMENT_ATTEMPTS} attempts "
                f"(U={params.U}, sector={params.sector_deg}, min_sep={params.min_sep_deg})"
            )
        attempts += 1
        cand = float(rng.uniform(-half, half))
        if all(abs(cand - a) >= params.min_sep_deg for a in angles):
            angles.append(cand)
    gains_db = rng.uniform(-params.pc_range_db, params.pc_range_db, size=params.U)
    return Placement(
        ue_angles=np.array(angles[1:]),
        jammer_angle=angles[0],
        ue_gains=10.0 ** (gains_db / 10.0),
    )


def steering_vector(B: int, angle_deg) -> np.ndarray:
    """Half-wavelength ULA response; a vector for scalar angles, B x K otherwise."""
    theta = np.deg2rad(np.asarray(angle_deg, dtype=float))
    b = np.arange(B).reshape((B,) + (1,) * theta.ndim)
    return np.exp(-1j * np.pi * b * np.sin(theta))


def los_channel(placement: Placement, params: SystemParams) -> ChannelSet:
    A = steering_vector(params.B, placement.ue_angles)
    H = A * np.sqrt(placement.ue_gains)[None, :]
    hJ = steering_vector(params.B, placement.jammer_angle)
    return ChannelSet(H=H, hJ=hJ)


def calibrate_noise(H: np.ndarray, snr_db: float, Es: float = 1.0) -> float:
    """Noise variance N0 giving average receive SNR ``snr_db``."""
    fro2 = float(np.sum(np.abs(H) ** 2))
    if fro2 == 0.0:
        raise ValueError("degenerate channel: ||H||_F = 0")
    B = H.shape[0]
    return Es * fro2 / (B * 10.0 ** (snr_db / 10.0))


def calibrate_jammer(H: np.ndarray, hJ: np.ndarray, rho_db: float, Es: float, U: int) -> float:
    """Jammer symbol variance Ej giving relative jammer power ``rho_db``."""
    if rho_db is None or rho_db == -math.inf:
        return 0.0
    hj2 = float(np.sum(np.abs(hJ) ** 2))
    if hj2 == 0.0:
        raise ValueError("degenerate jammer channel: ||hJ|| = 0")
    fro2 = float(np.sum(np.abs(H) ** 2))
    return 10.0 ** (rho_db / 10.0) * Es * fro2 / (U * hj2)


def transmit_and_receive(H, S_tx, hJ, sJ, N0, rng: np.random.Generator) -> np.ndarray:
    """Antenna-domain receive block ``Y = H S + hJ sJ^T + N``."""
    H = np.asarray(H)
    S_tx = np.asarray(S_tx)
    hJ = np.asarray(hJ).reshape(-1)
    sJ = np.asarray(sJ).reshape(-1)
    B, U = H.shape
    if S_tx.ndim != 2 or S_tx.shape[0] != U:
        raise ValueError(f"S_tx must be {U} x n, got {S_tx.shape}")
    n = S_tx.shape[1]
    if hJ.shape[0] != B or sJ.shape[0] != n:
        raise ValueError("jammer channel/signal dimensions do not match H and S_tx")
    Y = H @ S_tx + np.outer(hJ, sJ)
    if N0 > 0:
        Y = Y + crandn(rng, (B, n), N0)
    return Y
