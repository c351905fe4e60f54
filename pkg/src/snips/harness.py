"""Seeded Monte-Carlo trials, parameter sweeps and CSV output.

A trial runs the receive chain in order: jammer-only training (UEs silent)
-> covariance estimate, pilot phase (jammer active) -> channel estimate and
gain control, data phase quantized with the pilot gains -> equalization ->
metrics. Random streams depend only on ``(seed, trial_index, phase)``, so
receivers that differ only in S or q are compared on identical realizations.
"""

from __future__ import annotations

import csv
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import beamslice, detector, estimators, metrics, quantfront, scenario
from .metrics import TrialResult
from .scenario import SystemParams

__all__ = [
    "PHASES",
    "SWEEP_AXES",
    "DEFAULT_SNR_DB",
    "TrialError",
    "ExperimentConfig",
    "CellResult",
    "SweepResult",
    "trial_rng",
    "run_trial",
    "run_experiment",
    "emit_csv",
    "read_csv",
    "CSV_COLUMNS",
    "format_value",
    "parse_value",
    "parse_config",
    "load_config",
]

log = logging.getLogger(__name__)

PHASES = {"placement": 0, "jammer": 1, "pilot": 2, "data": 3}
SWEEP_AXES = ("snr_db", "rho_db", "S", "q")
DEFAULT_SNR_DB = tuple(float(x) for x in range(-10, 21, 3))
CSV_COLUMNS = (
    "snr_db", "rho_db", "S", "q", "trials", "ue_count", "ber_mean",
    "served_count", "served_total", "served_fraction", "rmsse_p50", "rmsse_p90",
)


class TrialError(RuntimeError):
    def __init__(self, trial_index: int, params: SystemParams, cause: BaseException):
        super().__init__(f"trial {trial_index} failed ({params}): {cause!r}")
        self.trial_index = trial_index
        self.cause = cause


def trial_rng(seed: int, trial_index: int, phase: str) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial_index), PHASES[phase]))
    return np.random.default_rng(ss)


def run_trial(params: SystemParams, trial_index: int) -> TrialResult:
    try:
        return _run_trial(params, trial_index)
    except Exception as exc:
        raise TrialError(trial_index, params, exc) from exc


def _run_trial(p: SystemParams, k: int) -> TrialResult:
    placement = scenario.draw_placement(p, trial_rng(p.seed, k, "placement"))
    ch = scenario.los_channel(placement, p)
    ch.N0 = scenario.calibrate_noise(ch.H, p.snr_db, p.Es)
    ch.Ej = scenario.calibrate_jammer(ch.H, ch.hJ, p.rho_db, p.Es, p.U)

    slicer = beamslice.build_slicer(p.B, p.S)
    spec = quantfront.quantizer_spec(p.q)

    cov = estimators.estimate_jammer_cov(ch, slicer, spec, trial_rng(p.seed, k, "jammer"), p.N)
    S_P = estimators.pilot_matrix(p.U, p.Es)
    chest = estimators.estimate_channel(ch, slicer, spec, S_P, trial_rng(p.seed, k, "pilot"), p.Es)
    eq = detector.build_equalizer(chest.H_hat, cov.Cj_hat, ch.N0, p.Es, spec, chest.G_pilot, S=p.S)

    rng = trial_rng(p.seed, k, "data")
    const = scenario.qam16(p.Es)
    tx_idx = rng.integers(0, 16, size=(p.U, p.n_data))
    S_tx = const.points[tx_idx]
    sJ = scenario.crandn(rng, p.n_data, ch.Ej)
    Y = scenario.transmit_and_receive(ch.H, S_tx, ch.hJ, sJ, ch.N0, rng)
    # data phase reuses the pilot-phase gain control
    R = quantfront.quantize_complex(slicer.apply(Y), chest.G_pilot, spec)
    S_star = detector.equalize(eq, R)

    _, bits_hat = detector.hard_decision(S_star, const)
    bits_true = const.bits[tx_idx]
    return TrialResult.from_errors(
        metrics.rmsse_per_ue(S_tx, S_star),
        int(np.count_nonzero(bits_true != bits_hat)),
        bits_true.size,
        S=p.S, q=p.q, snr_db=p.snr_db, rho_db=p.rho_db, trial=k, seed=p.seed,
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """A base operating point plus the axes swept around it.

    Axes left out of ``sweep`` stay at the base value; ``snr_db`` defaults
    to ``DEFAULT_SNR_DB``.
    """

    base: SystemParams = field(default_factory=SystemParams)
    sweep: dict = field(default_factory=dict)
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        unknown = set(self.sweep) - set(SWEEP_AXES)
        if unknown:
            raise ValueError(f"cannot sweep {sorted(unknown)}; sweepable axes are {SWEEP_AXES}")
        for name, values in self.sweep.items():
            if len(values) == 0:
                raise ValueError(f"sweep grid for {name} is empty")
        for S in self.axis("S"):
            if self.base.B % S:
                raise ValueError(f"swept S={S} does not divide B={self.base.B}")

    def axis(self, name: str) -> tuple:
        if name in self.sweep:
            return tuple(self.sweep[name])
        if name == "snr_db":
            return DEFAULT_SNR_DB
        return (getattr(self.base, name),)

    def cells(self) -> list[SystemParams]:
        grids = [self.axis(a) for a in SWEEP_AXES]
        return [self.base.with_(**dict(zip(SWEEP_AXES, combo))) for combo in itertools.product(*grids)]


@dataclass
class CellResult:
    params: SystemParams
    trials: list[TrialResult]
    failed: list[int] = field(default_factory=list)

    @property
    def n_trials(self) -> int:
        return len(self.trials)

    @property
    def bit_errors(self) -> int:
        return sum(t.bit_errors for t in self.trials)

    @property
    def bit_count(self) -> int:
        return sum(t.bit_count for t in self.trials)

    @property
    def ber_mean(self) -> float:
        return self.bit_errors / self.bit_count if self.trials else math.nan

    @property
    def served_count(self) -> int:
        return sum(int(np.count_nonzero(t.served)) for t in self.trials)

    @property
    def served_total(self) -> int:
        return sum(t.served.size for t in self.trials)

    @property
    def served_fraction(self) -> float:
        return self.served_count / self.served_total if self.trials else math.nan

    @property
    def stderr(self) -> float:
        """Binomial standard error of the served fraction."""
        f = self.served_fraction
        return math.sqrt(f * (1.0 - f) / self.served_total)

    def rmsse_samples(self) -> np.ndarray:
        if not self.trials:
            return np.empty(0)
        return np.concatenate([t.rmsse for t in self.trials])

    def rmsse_quantile(self, q: float) -> float:
        x = self.rmsse_samples()
        return float(np.quantile(x, q)) if x.size else math.nan


@dataclass
class SweepResult:
    config: ExperimentConfig
    cells: list[CellResult]

    @property
    def failures(self) -> list[tuple[int, int]]:
        return [(i, k) for i, c in enumerate(self.cells) for k in c.failed]

    def cell(self, **where) -> CellResult:
        hits = [c for c in self.cells if all(getattr(c.params, k) == v for k, v in where.items())]
        if len(hits) != 1:
            raise KeyError(f"{len(hits)} cells match {where}")
        return hits[0]

    def select(self, **where) -> list[CellResult]:
        return [c for c in self.cells if all(getattr(c.params, k) == v for k, v in where.items())]


def _work(item: tuple[int, SystemParams, int]):
    i, params, k = item
    try:
        return i, k, run_trial(params, k)
    except TrialError as exc:
        return i, k, exc


def run_experiment(config: ExperimentConfig, trials: Iterable[int] | None = None) -> SweepResult:
    """Run every (cell, trial) pair once and merge in (cell, trial) order.

    Failed trials are logged and listed in ``SweepResult.failures``; the
    aggregates cover completed trials only.
    """
    cells = config.cells()
    trial_ids = list(range(config.base.trials)) if trials is None else list(trials)
    work = [(i, p, k) for i, p in enumerate(cells) for k in trial_ids]

    if config.workers > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            done = list(pool.map(_work, work, chunksize=max(1, len(work) // (8 * config.workers))))
    else:
        done = [_work(w) for w in work]

    done.sort(key=lambda t: (t[0], t[1]))
    out = [CellResult(p, []) for p in cells]
    for i, k, res in done:
        if isinstance(res, TrialError):
            log.warning("cell %d trial %d failed: %s", i, k, res.cause)
            out[i].failed.append(k)
        else:
            out[i].trials.append(res)
    result = SweepResult(config, out)
    if result.failures:
        log.warning("%d of %d trials failed", len(result.failures), len(work))
    return result


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".9g")


def parse_value(text: str):
    t = text.strip().lower()
    if t in ("inf", "infinite", "+inf"):
        return math.inf
    if t in ("-inf", "none", "no_jammer", "off"):
        return -math.inf
    try:
        return int(t)
    except ValueError:
        return float(t)


def _cell_row(c: CellResult) -> dict:
    p = c.params
    return {
        "snr_db": format_value(p.snr_db),
        "rho_db": format_value(p.rho_db),
        "S": format_value(p.S),
        "q": format_value(p.q),
        "trials": format_value(c.n_trials),
        "ue_count": format_value(p.U),
        "ber_mean": format_value(c.ber_mean),
        "served_count": format_value(c.served_count),
        "served_total": format_value(c.served_total),
        "served_fraction": format_value(c.served_fraction),
        "rmsse_p50": format_value(c.rmsse_quantile(0.5)),
        "rmsse_p90": format_value(c.rmsse_quantile(0.9)),
    }


def emit_csv(result: SweepResult | Sequence[CellResult], path) -> None:
    """Write one row per sweep cell."""
    cells = result.cells if isinstance(result, SweepResult) else list(result)
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
            w.writeheader()
            for c in cells:
                w.writerow(_cell_row(c))
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> list[dict]:
    """Parse a results file back into typed rows."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [{k: parse_value(v) for k, v in row.items()} for row in rows]


_PARAM_FIELDS = {f.name for f in fields(SystemParams)}
_CONFIG_FIELDS = {"out", "workers"}


def parse_config(text: str, overrides: Sequence[str] = ()) -> ExperimentConfig:
    """Build an ExperimentConfig from a flat ``key = value`` document.

    Keys are SystemParams fields plus ``out`` and ``workers``. A
    comma-separated value on one of the sweep axes becomes a grid; a single
    value on a sweep axis is a one-point grid. ``overrides`` are extra
    ``key=value`` lines applied last.
    """
    entries: dict[str, str] = {}
    lines = list(text.splitlines()) + list(overrides)
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, value = line.split("=", 1)
        elif ":" in line:
            key, value = line.split(":", 1)
        else:
            raise ValueError(f"line {n}: expected key = value, got {raw!r}")
        key = key.strip()
        if key not in _PARAM_FIELDS | _CONFIG_FIELDS:
            raise ValueError(f"line {n}: unknown key {key!r}")
        entries[key] = value.strip()

    base_kw, sweep = {}, {}
    for key, value in entries.items():
        if key in _CONFIG_FIELDS:
            continue
        vals = [parse_value(v) for v in value.split(",") if v.strip()]
        if key in SWEEP_AXES:
            sweep[key] = vals
            base_kw[key] = vals[0]
        elif len(vals) != 1:
            raise ValueError(f"{key} is not a sweep axis and takes a single value")
        else:
            base_kw[key] = vals[0]
    for key in ("B", "U", "S", "N", "n_data", "trials", "seed"):
        if key in base_kw:
            base_kw[key] = int(base_kw[key])
    if "S" in sweep:
        sweep["S"] = [int(s) for s in sweep["S"]]
    base = SystemParams(**base_kw)
    return ExperimentConfig(
        base=base,
        sweep=sweep,
        out=entries.get("out"),
        workers=int(entries.get("workers", 1)),
    )


def load_config(path, overrides: Sequence[str] = ()) -> ExperimentConfig:
    text = Path(path).read_text() if path else ""
    return parse_config(text, overrides)
