# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#   kernelspec:
#     display_name: Python 3
#     name: python3
# ---

# %% [markdown]
# # One trial, step by step
#
# The same pipeline as `snips.harness.run_trial`, unrolled so the
# intermediate quantities can be inspected.

# %%
import numpy as np

from snips import beamslice, detector, estimators, metrics, quantfront, scenario
from snips.harness import trial_rng

p = scenario.SystemParams(B=256, U=32, S=8, q=4, snr_db=20.0, rho_db=25.0, seed=1)
ch = scenario.los_channel(scenario.draw_placement(p, trial_rng(p.seed, 0, "placement")), p)
ch.N0 = scenario.calibrate_noise(ch.H, p.snr_db, p.Es)
ch.Ej = scenario.calibrate_jammer(ch.H, ch.hJ, p.rho_db, p.Es, p.U)
print(f"N0 = {ch.N0:.4f}, Ej = {ch.Ej:.1f}")

# %% [markdown]
# Jammer training (UEs silent) and the pilot phase (jammer active). The
# pilot-phase gains are reused for data detection.

# %%
spec = quantfront.quantizer_spec(p.q)
results = {}
for S in (1, p.S):
    sl = beamslice.build_slicer(p.B, S)
    cov = estimators.estimate_jammer_cov(ch, sl, spec, trial_rng(p.seed, 0, "jammer"), p.N)
    S_P = estimators.pilot_matrix(p.U, p.Es)
    est = estimators.estimate_channel(ch, sl, spec, S_P, trial_rng(p.seed, 0, "pilot"), p.Es)
    eq = detector.build_equalizer(est.H_hat, cov.Cj_hat, ch.N0, p.Es, spec, est.G_pilot)

    rng = trial_rng(p.seed, 0, "data")
    const = scenario.qam16(p.Es)
    idx = rng.integers(0, 16, (p.U, p.n_data))
    Y = scenario.transmit_and_receive(ch.H, const.points[idx], ch.hJ,
                                      scenario.crandn(rng, p.n_data, ch.Ej), ch.N0, rng)
    s_star = detector.equalize(eq, quantfront.quantize_complex(sl.apply(Y), est.G_pilot, spec))
    results[S] = metrics.rmsse_per_ue(const.points[idx], s_star)

# %%
for S, r in results.items():
    label = "antenna domain" if S == 1 else f"beam-sliced S={S}"
    print(f"{label:>18}: median RMSSE {np.median(r):.3f}, served {np.mean(r < 0.125):.2f}")
