"""
How temperature noise reaches the humidity output
=================================================

The humidity compensation takes the compensated temperature as an input, so
jitter on the temperature ADC shows up, correlated, in the humidity result.
"""

import numpy as np

from sensoruq import bme680

cal = bme680.synthetic_calibration()  # synthetic constants, not from a device
rng = np.random.default_rng(0)

t_adc = 510_000 + rng.normal(0.0, 80.0, 50_000)
h_adc = np.round(26_000 + rng.normal(0.0, 4.0, t_adc.size))  # humidity ADC has its own noise
t_out = bme680.compensate_temperature(cal, t_adc)
h_out = bme680.compensate_humidity(cal, h_adc, t_out)

print(f"T = {t_out.mean():.3f} +- {t_out.std():.4f} degC")
print(f"H = {h_out.mean():.3f} +- {h_out.std():.4f} %RH")
print(f"corr(T, H) = {np.corrcoef(t_out, h_out)[0, 1]:+.4f}")

# %%
# The gain is the local derivative dH/dT.
gain = bme680.humidity_temperature_sensitivity(cal, h_adc.mean(), t_out.mean())
print(f"dH/dT = {gain:+.5f} %RH per degC; temperature-driven part of H std {abs(gain) * t_out.std():.4f}")

# %%
# Pressure goes through the same temperature input.
p_out = bme680.compensate_pressure(cal, 350_000, t_out)
print(f"P = {p_out.mean():.1f} Pa, corr(T, P) = {np.corrcoef(t_out, p_out)[0, 1]:+.4f}")
