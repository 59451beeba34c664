import numpy as np
import pytest

from sensoruq import bme680
from sensoruq.bme680 import Bme680Calibration
from sensoruq.errors import ParseError

from golden_bme680 import (
    ref_humidity,
    ref_pressure,
    ref_temperature,
    vendor_humidity_float,
    vendor_temperature_float,
)

CAL = bme680.synthetic_calibration()


def grid(n=100, seed=0):
    rng = np.random.default_rng(seed)
    t_adc = rng.integers(350_000, 650_000, n)
    h_adc = rng.integers(15_000, 40_000, n)
    p_adc = rng.integers(200_000, 500_000, n)
    return t_adc, h_adc, p_adc


# --- temperature --------------------------------------------------------------

@pytest.mark.parametrize("x", [-3.0, 0.0, 1.25, 27.5, 60.0])
def test_temperature_identity_constants(x):
    c = Bme680Calibration.zeros(k_t2=5120)
    assert bme680.compensate_temperature(c, 2**14 * x) == pytest.approx(x, rel=1e-15, abs=1e-15)


def test_temperature_linear_without_k_t3():
    c = CAL.replace(k_t3=0)
    a, b, mid = 400_000, 600_000, 520_000
    ta, tb = bme680.compensate_temperature(c, a), bme680.compensate_temperature(c, b)
    expected = ta + (tb - ta) * (mid - a) / (b - a)
    assert bme680.compensate_temperature(c, mid) == pytest.approx(expected, rel=1e-12)


def test_temperature_golden_grid():
    t_adc, _, _ = grid()
    out = bme680.compensate_temperature(CAL, t_adc)
    ref = [ref_temperature(CAL, float(v)) for v in t_adc]
    np.testing.assert_allclose(out, ref, rtol=1e-9)


def test_temperature_agrees_with_vendor_when_k_t3_zero():
    # The two forms differ only in the scaling of the k_t3 term.
    c = CAL.replace(k_t3=0)
    for t in grid(20)[0]:
        assert bme680.compensate_temperature(c, t) == pytest.approx(vendor_temperature_float(c, float(t)), rel=1e-12)


def test_sample_constants_give_room_temperature():
    assert 0 < bme680.compensate_temperature(CAL, 500_000) < 50


# --- humidity -----------------------------------------------------------------

def test_humidity_coefficient():
    assert bme680.humidity_temp_coefficient(CAL, 0.0) == CAL.k_h2 / 2**18
    c = CAL.replace(k_h4=0, k_h5=0)
    assert bme680.humidity_temp_coefficient(c, 0.0) == bme680.humidity_temp_coefficient(c, 37.0)
    for t in (0.0, 25.0, 50.0):
        hand = CAL.k_h2 / 262144 + CAL.k_h2 * CAL.k_h4 * t / 4294967296 + CAL.k_h2 * CAL.k_h5 * t * t / 274877906944
        assert bme680.humidity_temp_coefficient(CAL, t) == pytest.approx(hand, rel=1e-14)


def test_humidity_pure_scaling():
    c = Bme680Calibration.zeros(k_h2=1020)
    for h_adc in (0, 1, 30_000, 65_535):
        assert bme680.compensate_humidity(c, h_adc, 23.0) == pytest.approx(1020 / 2**18 * h_adc, rel=1e-15)


def test_humidity_golden_grid():
    t_adc, h_adc, _ = grid()
    temp = bme680.compensate_temperature(CAL, t_adc)
    out = bme680.compensate_humidity(CAL, h_adc, temp)
    ref = [ref_humidity(CAL, float(h), ref_temperature(CAL, float(t))) for h, t in zip(h_adc, t_adc)]
    np.testing.assert_allclose(out, ref, rtol=1e-9)


def test_humidity_agrees_with_vendor_when_k_h3_zero():
    # Only the sign of the k_h3 term separates the two formulations.
    c = CAL.replace(k_h3=0)
    for h in (20_000, 25_000, 33_333):
        for t in (5.0, 22.0, 41.0):
            assert bme680.compensate_humidity(c, h, t) == pytest.approx(vendor_humidity_float(c, h, t), rel=1e-12)


@pytest.mark.parametrize("t_out", [0.0, 12.5, 25.0, 48.0])
@pytest.mark.parametrize("h_adc", [18_000, 26_000, 39_000])
def test_humidity_temperature_derivative(h_adc, t_out):
    step = 1e-3
    fd = (bme680.compensate_humidity(CAL, h_adc, t_out + step) - bme680.compensate_humidity(CAL, h_adc, t_out - step)) / (2 * step)
    analytic = bme680.humidity_temperature_sensitivity(CAL, h_adc, t_out)
    assert fd == pytest.approx(analytic, rel=1e-6)


def test_humidity_continuous_in_temperature():
    ts = np.linspace(-10, 60, 7001)
    h = bme680.compensate_humidity(CAL, 26_000, ts)
    assert np.max(np.abs(np.diff(h))) < 0.01


def test_temperature_noise_propagates_into_humidity():
    rng = np.random.default_rng(42)
    t_adc = 500_000 + rng.normal(0, 60, 20_000)
    temp = bme680.compensate_temperature(CAL, t_adc)
    for overrides in ({"k_h3": 4, "k_h4": 0, "k_h5": 0}, {"k_h3": 0, "k_h4": 45, "k_h5": 0}, {"k_h3": 0, "k_h4": 0, "k_h5": 20}):
        c = CAL.replace(**overrides)
        hum = bme680.compensate_humidity(c, 26_000, temp)
        rho = np.corrcoef(temp, hum)[0, 1]
        assert abs(rho) > 0.5


def test_no_propagation_without_temperature_terms():
    c = CAL.replace(k_h3=0, k_h4=0, k_h5=0, k_h7=0)
    assert bme680.compensate_humidity(c, 26_000, 10.0) == bme680.compensate_humidity(c, 26_000, 40.0)


# --- pressure -----------------------------------------------------------------

@pytest.mark.parametrize("p_adc", [0, 1, 123_456, 2**20 - 1])
def test_pressure_fallback_branch(p_adc):
    c = CAL.replace(k_p1=0, k_p2=0, k_p3=0)
    assert bme680.compensate_pressure(c, p_adc, 24.0) == 2**20 - p_adc


def test_pressure_fallback_vectorised():
    c = CAL.replace(k_p1=0)
    p = np.array([5, 500_000, 1_000_000])
    np.testing.assert_array_equal(bme680.compensate_pressure(c, p, 20.0), 2.0**20 - p)


def test_pressure_collapses_to_intermediate():
    c = CAL.replace(k_p7=0, k_p8=0, k_p9=0, k_p10=0)
    t, p = 23.0, 400_000
    pc1, pc2 = bme680.pressure_coefficients(c, t)
    pc3 = 6250.0 / pc2 * (2**20 - p - pc1 / 2**12)
    assert bme680.compensate_pressure(c, p, t) == pytest.approx(pc3, rel=1e-14)


def test_pressure_golden_grid():
    t_adc, _, p_adc = grid()
    temp = bme680.compensate_temperature(CAL, t_adc)
    out = bme680.compensate_pressure(CAL, p_adc, temp)
    ref = [ref_pressure(CAL, float(p), ref_temperature(CAL, float(t))) for p, t in zip(p_adc, t_adc)]
    np.testing.assert_allclose(out, ref, rtol=1e-9)


def test_sample_constants_give_atmospheric_pressure():
    temp = bme680.compensate_temperature(CAL, 500_000)
    assert 50_000 < bme680.compensate_pressure(CAL, 350_000, temp) < 150_000


def test_compensate_chain():
    t, h, p = bme680.compensate(CAL, 500_000, 26_000, 350_000)
    assert t == bme680.compensate_temperature(CAL, 500_000)
    assert h == bme680.compensate_humidity(CAL, 26_000, t)
    assert p == bme680.compensate_pressure(CAL, 350_000, t)


def test_pure_and_deterministic():
    a = bme680.compensate(CAL, 512_345, 27_000, 300_000)
    b = bme680.compensate(CAL, 512_345, 27_000, 300_000)
    assert a == b


# --- calibration file ---------------------------------------------------------

def test_calibration_file_round_trip(tmp_path):
    path = tmp_path / "dev.cal"
    path.write_text(bme680.format_calibration(CAL, header="test device"))
    assert bme680.load_calibration(path) == CAL


def test_calibration_file_accepts_colons_and_comments():
    text = "\n".join(f"{k.upper()}: {i}  # note" for i, k in enumerate(bme680.CALIBRATION_KEYS))
    c = bme680.parse_calibration("# header\n\n" + text)
    assert c.k_p10 == 19.0


def test_calibration_missing_key():
    text = bme680.format_calibration(CAL).replace("k_h5 = 20.0\n", "")
    with pytest.raises(ParseError, match="k_h5"):
        bme680.parse_calibration(text)


def test_calibration_duplicate_key():
    text = bme680.format_calibration(CAL) + "k_t1 = 1\n"
    with pytest.raises(ParseError, match="duplicate") as exc:
        bme680.parse_calibration(text)
    assert exc.value.line == 21


@pytest.mark.parametrize("bad", ["k_t1 = abc", "k_zz = 1", "just words", "k_t1 = nan"])
def test_calibration_bad_lines(bad):
    with pytest.raises(ParseError):
        bme680.parse_calibration(bad)


def test_shipped_constants_are_labelled_synthetic():
    from importlib.resources import files

    assert "SYNTHETIC" in files("sensoruq").joinpath("data/bme680_synthetic.cal").read_text()
