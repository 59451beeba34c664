"""``sensoruq`` command-line tool.

Exit codes: 0 success, 2 input error (bad file, bad arguments, too little
data), 3 constraint or gate failure (``check-constraint`` fails, or fewer
than half of the windows pass the Gaussianity gate in conditional mode).

Option values are resolved as: command-line flag, then ``--config`` JSON
file, then built-in default.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import bme680, io
from .calibration import fit_linear
from .errors import InvalidParams, SensorUQError
from .noise_model import NoiseModelParams
from .pipeline import DEFAULT_WINDOW_SIZE, GateThresholds, Mode, process_stream
from .synth import SynthConfig, TrimodalSpec, generate
from .thermal import DEFAULT_MARGIN, ThermalModel, check_sampling_constraint, estimate_time_constant

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FAILED_CHECK = 3

DEFAULTS: dict[str, Any] = {
    "window_size": DEFAULT_WINDOW_SIZE,
    "max_skew": 2.0,
    "max_kurtosis": 7.0,
    "gate_channels": "both",
    "margin": DEFAULT_MARGIN,
    "seed": 0,
    "workers": None,
    # simulate
    "mu_t": 25.0,
    "mu_h": 50.0,
    "sigma_t": 0.1,
    "sigma_h": 0.5,
    "rho": 0.4423,
    "sample_rate": 128.3,
    "n_samples": 10_000,
    "tau": 478.0,
    "t_initial": 50.0,
    "t_final": 25.0,
    "separation": 10.0,
    "outer_weight": 0.1,
    "trimodal_channel": "humidity",
}


class _Options:
    """Flag > config file > default lookup."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config: dict[str, Any] = {}
        if getattr(args, "config", None):
            try:
                cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise InvalidParams(f"config file {args.config}: {exc}") from None
            if not isinstance(cfg, dict):
                raise InvalidParams(f"config file {args.config} must hold a JSON object")
            self.config = {k.replace("-", "_"): v for k, v in cfg.items()}

    def __getitem__(self, key: str) -> Any:
        v = getattr(self.args, key, None)
        if v is not None:
            return v
        if key in self.config:
            return self.config[key]
        return DEFAULTS.get(key)


def _gate(opt: _Options) -> GateThresholds:
    return GateThresholds(float(opt["max_skew"]), float(opt["max_kurtosis"]), opt["gate_channels"])


def _emit_json(obj: dict, output: str | None) -> None:
    if output:
        io.dump_json(obj, output)
    else:
        sys.stdout.write(io.dump_json(obj))


def _run_analysis(path: str, opt: _Options, mode: Mode):
    ts, temp, hum = io.read_recording(path)
    n = int(opt["window_size"])
    gate = _gate(opt)
    rate = _estimate_rate(ts)
    reports = process_stream(temp, hum, n, gate, mode, sample_rate_hz=rate, workers=opt["workers"])
    summary = io.summarize(
        reports,
        mode=mode.value,
        input=str(path),
        n_rows=int(temp.size),
        window_size=n,
        max_abs_skew=gate.max_abs_skew,
        max_kurtosis=gate.max_kurtosis,
        gate_channels=gate.channels.value,
    )
    return reports, summary


def _estimate_rate(ts) -> float:
    if ts.size >= 2 and ts[-1] > ts[0]:
        return float((ts.size - 1) / (ts[-1] - ts[0]))
    return 1.0


def cmd_analyze(args: argparse.Namespace) -> int:
    opt = _Options(args)
    mode = Mode(opt["mode"] or Mode.CONDITIONAL.value)
    reports, summary = _run_analysis(args.input, opt, mode)
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        io.write_reports(out / "reports.csv", reports)
        io.dump_json(summary, out / "summary.json")
    else:
        io.write_reports(sys.stdout, reports)
    rate = summary["gate_pass_rate"]
    if mode is Mode.CONDITIONAL and rate is not None and rate < 0.5:
        print(f"warning: only {rate:.1%} of windows passed the Gaussianity gate", file=sys.stderr)
        return EXIT_FAILED_CHECK
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    opt = _Options(args)
    _, base = _run_analysis(args.input, opt, Mode.BASELINE)
    _, cond = _run_analysis(args.input, opt, Mode.CONDITIONAL)
    diff = {
        "mean_sigma_h_baseline": base["mean_sigma_h"],
        "mean_sigma_hat_h_conditional": cond["mean_sigma_hat_h"],
        "mean_reduction_fraction": cond["mean_reduction_fraction"],
        "gate_pass_rate": cond["gate_pass_rate"],
        "reduced_window_fraction": cond["reduced_window_fraction"],
    }
    result = {"schema_version": io.SCHEMA_VERSION, "baseline": base, "conditional": cond, "comparison": diff}
    _emit_json(result, args.output)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    opt = _Options(args)
    model = NoiseModelParams(
        mu_h=float(opt["mu_h"]),
        mu_t=float(opt["mu_t"]),
        sigma_h=float(opt["sigma_h"]),
        sigma_t=float(opt["sigma_t"]),
        rho=float(opt["rho"]),
    )
    mode = opt["mode"] or "constant"
    thermal = None
    trimodal = None
    if mode == "step":
        thermal = ThermalModel(float(opt["t_initial"]), float(opt["t_final"]), float(opt["tau"]))
    elif mode == "trimodal":
        trimodal = TrimodalSpec(float(opt["separation"]), float(opt["outer_weight"]), opt["trimodal_channel"])
    cfg = SynthConfig(
        model=model,
        sample_rate_hz=float(opt["sample_rate"]),
        n_samples=int(opt["n_samples"]),
        seed=int(opt["seed"]),
        mode=mode,
        thermal=thermal,
        trimodal=trimodal,
    )
    s = generate(cfg)
    io.write_recording(args.output or sys.stdout, s.timestamp_s, s.temperature_c, s.humidity_rh)
    return EXIT_OK


def cmd_compensate(args: argparse.Namespace) -> int:
    calib = bme680.load_calibration(args.calibration) if args.calibration else bme680.synthetic_calibration()
    cols = io.read_columns(args.input, io.RAW_ADC_COLUMNS, integer=True)
    t_adc, h_adc, p_adc = (cols[c] for c in io.RAW_ADC_COLUMNS)
    limits = {"t_adc": bme680.T_ADC_MAX, "h_adc": bme680.H_ADC_MAX, "p_adc": bme680.P_ADC_MAX}
    for name, hi in limits.items():
        bad = (cols[name] < 0) | (cols[name] >= hi)
        if bad.any():
            raise InvalidParams(f"{name} out of range [0, {hi}) at data row {int(bad.argmax()) + 1}")
    t_out, h_out, p_out = bme680.compensate(calib, t_adc, h_adc, p_adc)
    rows = zip(t_adc.astype(int), h_adc.astype(int), p_adc.astype(int), t_out, h_out, p_out)
    io.write_columns(args.output or sys.stdout, io.COMPENSATED_COLUMNS, rows)
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    cols = io.read_columns(args.input, io.POINTS_COLUMNS)
    fit = fit_linear(cols["sensor_value"], cols["reference_value"])
    _emit_json(
        {
            "schema_version": io.SCHEMA_VERSION,
            "slope": fit.slope,
            "intercept": fit.intercept,
            "rms_residual": fit.rms_residual,
            "n_points": fit.n_points,
        },
        args.output,
    )
    return EXIT_OK


def cmd_step_response(args: argparse.Namespace) -> int:
    cols = io.read_columns(args.input, io.TRACE_COLUMNS)
    t, y = cols["time_s"], cols["value"]
    if t.size == 0:
        raise InvalidParams("trace has no data rows")
    initial = float(y[0]) if args.initial is None else args.initial
    final = float(y[-1]) if args.final is None else args.final
    tau = estimate_time_constant(t, y, initial, final, args.step_time)
    result = {
        "schema_version": io.SCHEMA_VERSION,
        "tau_s": tau,
        "initial_value": initial,
        "final_value": final,
        "n_points": int(t.size),
    }
    _emit_json(result, args.output)
    return EXIT_OK


def cmd_check_constraint(args: argparse.Namespace) -> int:
    opt = _Options(args)
    res = check_sampling_constraint(float(opt["sample_rate"]), float(opt["tau"]), float(opt["margin"]))
    _emit_json(
        {
            "schema_version": io.SCHEMA_VERSION,
            "passed": res.passed,
            "ratio": res.ratio,
            "margin": res.margin,
            "sample_period_s": res.sample_period_s,
            "tau_s": res.tau_s,
        },
        args.output,
    )
    return EXIT_OK if res.passed else EXIT_FAILED_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sensoruq",
        description="Correlated-noise uncertainty reduction for oversampled sensor pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def gate_flags(p):
        p.add_argument("--window-size", type=int, help="samples per window (default 30)")
        p.add_argument("--max-skew", type=float, help="gate on |skewness| (default 2)")
        p.add_argument("--max-kurtosis", type=float, help="gate on kurtosis (default 7)")
        p.add_argument("--gate-channels", choices=["both", "humidity", "temperature"])
        p.add_argument("--workers", type=int, help="threads for window evaluation")
        p.add_argument("--config", help="JSON file with option defaults")

    p = sub.add_parser("analyze", help="per-window uncertainty reports for a recording")
    p.add_argument("input")
    p.add_argument("--mode", choices=[m.value for m in Mode])
    p.add_argument("--output", help="directory for reports.csv and summary.json")
    gate_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="baseline vs conditional summaries on one recording")
    p.add_argument("input")
    p.add_argument("--output", help="JSON file (default stdout)")
    gate_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="write a synthetic recording CSV")
    p.add_argument("--mode", choices=["constant", "step", "trimodal"])
    p.add_argument("--seed", type=int)
    p.add_argument("--n-samples", type=int)
    p.add_argument("--sample-rate", type=float)
    for name in ("mu-t", "mu-h", "sigma-t", "sigma-h", "rho", "tau", "t-initial", "t-final",
                 "separation", "outer-weight"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--trimodal-channel", choices=["humidity", "temperature", "both"])
    p.add_argument("--output", help="CSV file (default stdout)")
    p.add_argument("--config", help="JSON file with option defaults")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compensate", help="convert raw BME680 ADC values to engineering units")
    p.add_argument("input", help="CSV with t_adc,h_adc,p_adc")
    p.add_argument("--calibration", help="key = value constants file (default: bundled synthetic set)")
    p.add_argument("--output", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_compensate)

    p = sub.add_parser("calibrate", help="least-squares line from sensor to reference values")
    p.add_argument("input", help="CSV with sensor_value,reference_value")
    p.add_argument("--output", help="JSON file (default stdout)")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("step-response", help="thermal time constant from a step trace")
    p.add_argument("input", help="CSV with time_s,value")
    p.add_argument("--initial", type=float, help="value before the step (default: first sample)")
    p.add_argument("--final", type=float, help="settled value after the step (default: last sample)")
    p.add_argument("--step-time", type=float, help="time of the step (default: first timestamp)")
    p.add_argument("--output", help="JSON file (default stdout)")
    p.set_defaults(func=cmd_step_response)

    p = sub.add_parser("check-constraint", help="is 1/fs much shorter than tau?")
    p.add_argument("--sample-rate", type=float, help="Hz")
    p.add_argument("--tau", type=float, help="time constant in seconds")
    p.add_argument("--margin", type=float, help="required tau*fs (default 10)")
    p.add_argument("--output", help="JSON file (default stdout)")
    p.add_argument("--config", help="JSON file with option defaults")
    p.set_defaults(func=cmd_check_constraint)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SensorUQError, OSError, ValueError) as exc:
        print(f"sensoruq {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
