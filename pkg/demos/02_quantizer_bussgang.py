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
# # Midrise quantizer and its Bussgang constants
#
# For each resolution q the step size minimizes the MSE for a standard normal
# input. Gain gamma and distortion power D follow in closed form; a quick
# Monte-Carlo run confirms them.

# %%
import numpy as np

from snips.quantfront import quantize_real, quantizer_spec

rng = np.random.default_rng(0)
x = rng.standard_normal(1_000_000)

print(" q   delta     gamma     D         gamma(MC)  D(MC)")
for q in range(1, 9):
    s = quantizer_spec(q)
    y = quantize_real(x, s)
    # normalize by the sample power; otherwise its error swamps D at high q
    px = np.mean(x * x)
    g = np.mean(y * x) / px
    print(f"{q:2d}  {s.delta:.5f}  {s.gamma:.6f}  {s.dist_power:.3e}  {g:.6f}   {np.mean(y * y) - g * g * px:.3e}")

# %% [markdown]
# The distortion ``Q(x) - gamma x`` is uncorrelated with the input even
# though it clearly depends on it.

# %%
s = quantizer_spec(3)
d = quantize_real(x, s) - s.gamma * x
print("E[d x] =", np.mean(d * x), "   E[d^2 x^2] / E[d^2] =", np.mean(d**2 * x**2) / np.mean(d**2))
