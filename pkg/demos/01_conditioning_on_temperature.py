"""
Conditioning humidity noise on temperature
==========================================

Draw correlated temperature/humidity noise, fit the five-parameter bivariate
Gaussian, and compare the plain humidity spread with the spread that remains
once temperature is pinned at its mean.
"""

import numpy as np

from sensoruq import NoiseModelParams, conditional_sigma, joint_pdf, conditional_pdf_at_mean_t
from sensoruq.synth import SynthConfig, generate

model = NoiseModelParams(mu_h=45.0, mu_t=24.0, sigma_h=0.4, sigma_t=0.08, rho=0.6)
s = generate(SynthConfig(model, sample_rate_hz=128.3, n_samples=200_000, seed=1))

# %%
# The fitted parameters are just sample moments.
rho_hat = np.corrcoef(s.temperature_c, s.humidity_rh)[0, 1]
print(f"sigma_h = {s.humidity_rh.std(ddof=1):.4f}   rho = {rho_hat:.4f}")

# %%
# Closed form for the conditional spread.
res = conditional_sigma(model.sigma_h, model.rho)
print(f"sigma_hat = {res.sigma_hat:.4f}  ({res.reduction_fraction:.1%} smaller)")

# %%
# Empirical check: keep only draws whose temperature lands very close to the
# mean, then measure the humidity spread of that thin slice.
near = np.abs(s.temperature_c - model.mu_t) < 0.02 * model.sigma_t
print(f"slice of {near.sum()} draws: std = {s.humidity_rh[near].std(ddof=1):.4f}")

# %%
# The conditional density is the joint density along t = mu_t, renormalised.
hs = np.linspace(44, 46, 5)
ratio = joint_pdf(model, hs, model.mu_t) / conditional_pdf_at_mean_t(model, hs)
print("joint / conditional along t = mu_t (constant):", np.round(ratio, 6))
