"""
Time constant, sampling constraint and linear calibration
=========================================================
"""

import numpy as np

from sensoruq.calibration import apply_calibration, fit_linear
from sensoruq.thermal import ThermalModel, check_sampling_constraint, estimate_time_constant, step_response

# %%
# A 50 degC -> 21 degC cool-down with a 478 s lag, sampled every 5 s with a
# little noise.
m = ThermalModel(initial_value=50.0, final_value=21.0, tau_s=478.0)
t = np.arange(0.0, 3000.0, 5.0)
y = step_response(m, t) + np.random.default_rng(2).normal(0.0, 0.1, t.size)
tau = estimate_time_constant(t, y, initial=50.0, final=21.0)
print(f"estimated tau = {tau:.1f} s")

# %%
# Is 30 samples per window short enough compared with that lag?
for fs in (128.3, 22.3, 0.01):
    r = check_sampling_constraint(fs, tau)
    print(f"fs = {fs:>6} Hz: tau*fs = {r.ratio:10.1f}  pass = {r.passed}")

# %%
# Map sensor readings onto a chamber reference, 0 to 40 degC in 5 degC steps.
chamber = np.arange(0.0, 41.0, 5.0)
sensor = (chamber + 2.179) / 1.001 + np.random.default_rng(5).normal(0.0, 0.05, chamber.size)
fit = fit_linear(sensor, chamber)
print(f"reference = {fit.slope:.4f} * sensor {fit.intercept:+.4f}  (rms {fit.rms_residual:.3f})")
print("sensor 25.0 ->", round(apply_calibration(fit, 25.0), 3))
