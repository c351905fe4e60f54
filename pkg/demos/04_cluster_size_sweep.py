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
# # Served UEs versus SNR for several cluster sizes
#
# A reduced version of the strong-jammer comparison (rho = 25 dB, q = 4).
# Raise ``TRIALS`` for smoother curves; the full-size run is
# ``snips run --config demos/cluster_sweep.cfg``.

# %%

import matplotlib.pyplot as plt

from snips.harness import ExperimentConfig, run_experiment
from snips.scenario import SystemParams

TRIALS = 20
base = SystemParams(B=256, U=32, q=4, rho_db=25.0, trials=TRIALS, seed=3)
cfg = ExperimentConfig(base=base, sweep={"S": [1, 2, 8, 64, 256], "snr_db": [5, 10, 15, 20, 25]})
res = run_experiment(cfg)

# %%
fig, ax = plt.subplots()
for S in cfg.axis("S"):
    cells = res.select(S=S)
    label = "antenna domain" if S == 1 else f"S={S}"
    ax.plot([c.params.snr_db for c in cells], [c.served_fraction for c in cells], marker="o", label=label)
ax.set_xlabel("SNR [dB]")
ax.set_ylabel("fraction of UEs with RMSSE < 12.5 %")
ax.legend()
fig.savefig("cluster_size_sweep.png", dpi=120)
