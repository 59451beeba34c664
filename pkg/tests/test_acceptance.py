"""Exit criteria. Each test records one PASS/FAIL line, printed in the
terminal summary under "acceptance criteria"."""

import json
import time

import numpy as np
import pytest
from scipy import integrate
from scipy import stats as sps

from golden_bme680 import ref_humidity, ref_pressure, ref_temperature
from sensoruq import bme680, stats
from sensoruq.calibration import fit_linear
from sensoruq.cli import main
from sensoruq.noise_model import NoiseModelParams, conditional_sigma, joint_pdf
from sensoruq.pipeline import GateThresholds, SampleWindow, conditional, process_stream
from sensoruq.synth import SynthConfig, TrimodalSpec, generate, mixture_kurtosis
from sensoruq.thermal import ThermalModel, check_sampling_constraint, estimate_time_constant, step_response

pytestmark = pytest.mark.acceptance

N_WINDOWS = 10_000
WINDOW = 30


def random_params(rng):
    return NoiseModelParams(
        mu_h=rng.uniform(0, 100),
        mu_t=rng.uniform(-10, 60),
        sigma_h=rng.uniform(0.01, 3),
        sigma_t=rng.uniform(0.01, 3),
        rho=rng.uniform(-0.95, 0.95),
    )


def test_ac1_conditional_sigma_monte_carlo(verdict):
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        p = random_params(rng)
        # sample with numpy's own bivariate normal, independent of sensoruq.synth
        kept = []
        for _ in range(10):
            xy = rng.multivariate_normal([p.mu_h, p.mu_t], p.covariance, size=1_000_000, method="cholesky")
            kept.append(xy[np.abs(xy[:, 1] - p.mu_t) < 0.01 * p.sigma_t, 0])
        mc = np.std(np.concatenate(kept), ddof=1)
        target = conditional_sigma(p.sigma_h, p.rho).sigma_hat
        worst = max(worst, abs(mc / target - 1))
    elapsed = time.perf_counter() - start
    verdict("AC1 Monte-Carlo slice std vs sigma*sqrt(1-rho^2)", worst < 0.02 and elapsed < 60,
            f"worst rel err {worst:.4f} (tol 0.02), {elapsed:.1f}s (limit 60s)")


def test_ac2_reduction_reproduction(verdict, tmp_path):
    data = tmp_path / "rho.csv"
    out = tmp_path / "run"
    main(["simulate", "--rho", "0.4423", "--n-samples", str(N_WINDOWS * WINDOW), "--seed", "103",
          "--output", str(data)])
    main(["analyze", str(data), "--mode", "conditional", "--window-size", str(WINDOW), "--output", str(out)])
    summary = json.loads((out / "summary.json").read_text())
    red = summary["mean_reduction_fraction"]
    verdict("AC2 mean reduction on rho=0.4423 corpus, N=30", summary["n_windows"] == N_WINDOWS and abs(red - 0.103) <= 0.010,
            f"mean reduction {red:.4f} (target 0.103 +- 0.010, {summary['n_windows']} windows)")


def test_ac3a_gate_pass_rate_gaussian(verdict):
    model = NoiseModelParams(50.0, 25.0, 0.5, 0.1, 0.4423)
    s = generate(SynthConfig(model, n_samples=N_WINDOWS * WINDOW, seed=301))
    reports = process_stream(s.temperature_c, s.humidity_rh, WINDOW)
    rate = np.mean([r.gate_passed for r in reports])
    verdict("AC3a gate pass rate, bivariate Gaussian", len(reports) == N_WINDOWS and rate > 0.95,
            f"pass rate {rate:.4f} (> 0.95)")


def _mixture_kurtosis_quadrature(d, w):
    def pdf(x):
        return (w / 2) * sps.norm.pdf(x, -d) + (1 - w) * sps.norm.pdf(x) + (w / 2) * sps.norm.pdf(x, d)

    lim = d + 12
    m2 = integrate.quad(lambda x: x * x * pdf(x), -lim, lim, points=[-d, 0, d], limit=200)[0]
    m4 = integrate.quad(lambda x: x**4 * pdf(x), -lim, lim, points=[-d, 0, d], limit=200)[0]
    return m4 / m2**2


def test_ac3b_gate_fails_trimodal(verdict):
    spec = TrimodalSpec(separation=10.0, outer_weight=0.1, channel="humidity")
    brute = _mixture_kurtosis_quadrature(spec.separation, spec.outer_weight)
    closed = mixture_kurtosis(spec.separation, spec.outer_weight)
    model = NoiseModelParams(50.0, 25.0, 0.5, 0.1, 0.4423)
    s = generate(SynthConfig(model, n_samples=N_WINDOWS * WINDOW, seed=302, mode="trimodal", trimodal=spec))
    reports = process_stream(s.temperature_c, s.humidity_rh, WINDOW)
    failed = [r for r in reports if not r.gate_passed]
    fail_rate = len(failed) / len(reports)
    exact_fallback = all(r.sigma_hat_h == r.sigma_h and r.reduction_fraction == 0.0 for r in failed)
    ok = brute > 7 and abs(brute - closed) < 1e-8 * closed and fail_rate > 0.5 and exact_fallback
    verdict("AC3b gate fails on trimodal mixture", ok,
            f"mixture kurtosis {brute:.3f} (>7), fail rate {fail_rate:.4f} (>0.5), sigma_hat==sigma on all failures: {exact_fallback}")


def test_ac4_moment_estimators(verdict):
    rng = np.random.default_rng(404)
    g = rng.standard_normal(10**6)
    e = rng.exponential(1.0, 10**6)
    u = rng.uniform(size=10**6)
    sg, kg, se, ku = stats.skewness(g), stats.kurtosis(g), stats.skewness(e), stats.kurtosis(u)
    ok = abs(sg) < 0.01 and abs(kg - 3) < 0.05 and abs(se - 2) < 0.05 and abs(ku - 1.8) < 0.05
    verdict("AC4 moment estimators", ok,
            f"gauss skew {sg:+.4f} kurt {kg:.4f}; exp skew {se:.4f}; uniform kurt {ku:.4f}")


def test_ac5_joint_pdf_normalisation(verdict):
    rng = np.random.default_rng(505)
    worst = 0.0
    for _ in range(10):
        p = random_params(rng)
        total, _ = integrate.dblquad(
            lambda t, h: joint_pdf(p, h, t),
            p.mu_h - 8 * p.sigma_h, p.mu_h + 8 * p.sigma_h,
            p.mu_t - 8 * p.sigma_t, p.mu_t + 8 * p.sigma_t,
            epsabs=1e-10, epsrel=1e-10,
        )
        worst = max(worst, abs(total - 1))
    verdict("AC5 joint pdf integrates to 1 over +-8 sigma", worst < 1e-4, f"worst |integral - 1| = {worst:.2e}")


def test_ac6_compensation(verdict):
    cal = bme680.synthetic_calibration()
    rng = np.random.default_rng(606)
    t_adc = rng.integers(300_000, 700_000, 100)
    h_adc = rng.integers(10_000, 50_000, 100)
    p_adc = rng.integers(150_000, 600_000, 100)
    t_out, h_out, p_out = bme680.compensate(cal, t_adc, h_adc, p_adc)
    worst = 0.0
    for i in range(100):
        tr = ref_temperature(cal, float(t_adc[i]))
        refs = (tr, ref_humidity(cal, float(h_adc[i]), tr), ref_pressure(cal, float(p_adc[i]), tr))
        for got, want in zip((t_out[i], h_out[i], p_out[i]), refs):
            worst = max(worst, abs(got / want - 1))

    zero = cal.replace(k_p1=0.0)
    fallback_exact = all(bme680.compensate_pressure(zero, p, 25.0) == 2**20 - p for p in (0, 1, 99_999, 2**20 - 1))

    fd_worst = 0.0
    for h in (15_000, 30_000, 45_000):
        for t in (0.0, 20.0, 40.0):
            step = 1e-3
            fd = (bme680.compensate_humidity(cal, h, t + step) - bme680.compensate_humidity(cal, h, t - step)) / (2 * step)
            an = bme680.humidity_temperature_sensitivity(cal, h, t)
            fd_worst = max(fd_worst, abs(fd / an - 1))
    ok = worst < 1e-9 and fallback_exact and fd_worst < 1e-6
    verdict("AC6 compensation golden vectors / P_C2=0 branch / dH/dT", ok,
            f"golden worst rel {worst:.1e} (1e-9), fallback exact {fallback_exact}, FD worst rel {fd_worst:.1e} (1e-6)")


def test_ac7_thermal(verdict):
    errs = {}
    for tau in (8.0, 478.0):
        m = ThermalModel(50.0, 22.0, tau)
        t = np.linspace(0.0, 5 * tau, 500)
        errs[tau] = abs(estimate_time_constant(t, step_response(m, t), 50.0, 22.0) / tau - 1)
    fast = check_sampling_constraint(128.3, 478.0, margin=10)
    slow = check_sampling_constraint(22.3, 478.0, margin=10)
    ok = max(errs.values()) < 0.01 and fast.passed and slow.passed
    verdict("AC7 time-constant round trip and sampling constraint", ok,
            f"rel err tau=8: {errs[8.0]:.1e}, tau=478: {errs[478.0]:.1e}; 128.3 Hz ratio {fast.ratio:.0f}, 22.3 Hz ratio {slow.ratio:.0f}")


def test_ac8_calibration(verdict):
    x = np.array([-1.0, 0.5, 3.0, 7.0])
    exact = fit_linear(x, 2 * x + 1)
    grid = np.arange(0.0, 41.0, 5.0)
    paper = fit_linear(grid, 1.001 * grid - 2.179)
    errs = (abs(exact.slope - 2), abs(exact.intercept - 1), abs(paper.slope - 1.001), abs(paper.intercept + 2.179))
    verdict("AC8 calibration line recovery", max(errs) < 1e-9 and grid.size == 9, f"max coefficient error {max(errs):.1e}")


def test_ac9_operation_count_scaling(verdict):
    model = NoiseModelParams(50.0, 25.0, 0.5, 0.1, 0.4423)
    counts = {}
    for n in (30, 60, 120, 240):
        s = generate(SynthConfig(model, n_samples=n, seed=909))
        with stats.count_operations() as ops:
            r = conditional(SampleWindow(s.temperature_c, s.humidity_rh), GateThresholds())
        assert r.gate_passed
        counts[n] = ops.count
    ratios = [counts[2 * n] / counts[n] for n in (30, 60, 120)]
    verdict("AC9 op count doubles with N", all(1.9 <= q <= 2.1 for q in ratios),
            f"counts {counts}, ratios {[round(q, 4) for q in ratios]}")


def test_ac10_determinism(verdict, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        main(["simulate", "--seed", "1010", "--n-samples", "3000", "--output", str(p)])
    ra, rb = tmp_path / "ra", tmp_path / "rb"
    for r in (ra, rb):
        main(["analyze", str(a), "--output", str(r)])
    same_sim = a.read_bytes() == b.read_bytes()
    same_rep = (ra / "reports.csv").read_bytes() == (rb / "reports.csv").read_bytes()
    same_sum = (ra / "summary.json").read_bytes() == (rb / "summary.json").read_bytes()
    verdict("AC10 byte-identical simulate and analyze", same_sim and same_rep and same_sum,
            f"simulate {same_sim}, reports {same_rep}, summary {same_sum}")
