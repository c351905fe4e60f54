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
# # Beam-slicing a far-field jammer
#
# A B=256 ULA receives one jammer. We compare how its energy spreads over the
# 256 converter inputs for the antenna domain (S=1), two beam-slicers and the
# full beamspace transform (S=B).

# %%
import numpy as np

from snips.beamslice import build_slicer
from snips.scenario import steering_vector

B = 256
hj = steering_vector(B, 23.7)

# %% [markdown]
# The fraction of all ADCs needed to hold 90 % of the jammer power drops as
# the clusters grow. In the antenna domain every ADC gets an equal share.

# %%
for S in (1, 2, 8, 64, 256):
    p = np.sort(np.abs(build_slicer(B, S).apply(hj)) ** 2)[::-1]
    k90 = int(np.searchsorted(np.cumsum(p) / p.sum(), 0.9)) + 1
    print(f"S={S:3d}: {k90:3d} of {B} ADCs carry 90% of the jammer power")

# %% [markdown]
# The transform is unitary for every S, so noise stays white and nothing is
# lost before the converters.

# %%
V = build_slicer(B, 8).matrix()
print("max |V^H V - I| =", np.max(np.abs(V.conj().T @ V - np.eye(B))))
