"""Link-level simulator of beam-slicing plus soft-nulling jammer mitigation
for a mmWave massive MU-MIMO uplink with low-resolution ADCs."""

from .beamslice import BeamSlicer, build_slicer
from .detector import Equalizer, build_equalizer, equalize, hard_decision
from .estimators import estimate_channel, estimate_jammer_cov, pilot_matrix
from .harness import ExperimentConfig, SweepResult, emit_csv, run_experiment, run_trial
from .metrics import TrialResult, rmsse_per_ue, served_fraction, uncoded_ber
from .quantfront import QuantizerSpec, learn_gains, quantize_complex, quantizer_spec
from .scenario import SystemParams, qam16

__version__ = "0.1.0"
