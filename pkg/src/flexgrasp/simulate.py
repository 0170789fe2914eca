"""Closed-loop scenario runner, trace emission, plots and comparisons."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels as K
from .beam import build_grid
from .config import ScenarioConfig
from .controllers import (AdaptiveState, NabfcController, Setpoint,
                          check_gain_conditions, compute_setpoint)
from .plant import DivergenceError, initial_state, pack_state, param_pack, stable_dt

__all__ = ["SimTrace", "ScenarioResult", "run_scenario", "emit_csv", "emit_plots",
           "compare", "settling_time", "overshoot_fraction"]

CTRL_IDS = {"open": K.CTRL_OPEN, "nabfc": K.CTRL_NABFC, "pds": K.CTRL_PDS, "pd": K.CTRL_PD}


@dataclass
class SimTrace:
    """Sampled closed-loop history; one row per retained sample."""

    columns: tuple
    data: np.ndarray            # (n_samples, n_columns)
    setpoint_lambda: np.ndarray  # (2,)
    setpoint_theta: np.ndarray   # (2,)
    scenario: str

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    @property
    def t(self) -> np.ndarray:
        return self.data[:, 0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]


@dataclass
class ScenarioResult:
    trace: SimTrace
    summary: dict
    gain_report: list = field(default_factory=list)


def settling_time(t: np.ndarray, signal: np.ndarray, target: float, band: float):
    """Last time the signal sits outside +-band of the target; None if it ends outside."""
    outside = np.abs(signal - target) > band
    if outside[-1]:
        return None
    if not outside.any():
        return float(t[0])
    last_out = np.nonzero(outside)[0][-1]
    return float(t[last_out + 1])


def overshoot_fraction(t: np.ndarray, signal: np.ndarray, target: float):
    """Post-first-crossing excess of |signal| beyond |target|, as a fraction.

    None when the signal never crosses the target.
    """
    err = signal - target
    sign_change = np.nonzero(np.diff(np.sign(err)) != 0)[0]
    if sign_change.size == 0:
        return None
    k = sign_change[0] + 1
    peak = np.max(np.abs(signal[k:]))
    return max(0.0, (peak - abs(target)) / abs(target)) if target != 0.0 else None


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Run one closed-loop scenario and summarize it.

    Raises DivergenceError (carrying the partial trace in `args[1]`) when the
    state blows past the plausibility bound.
    """
    config.validate()
    grid = build_grid(config.plant.l, config.n_interior)
    params = config.plant
    dt = config.dt if config.dt is not None else stable_dt(params, grid)
    setpoint = compute_setpoint(config.lambda1_d, config.theta1_d, params, grid)
    state0 = initial_state(params, grid)

    gain_report = []
    if config.scenario == "nabfc":
        gain_report = check_gain_conditions(config.nabfc, config.analysis, params)

    n_per_sample = config.stride
    n_samples = max(2, int(math.ceil(config.duration / (dt * n_per_sample))) + 1)
    nsteps = (n_samples - 1) * n_per_sample

    ctl = NabfcController.build(config.nabfc, config.n_neurons, config.seed)
    ctl.object_scales = config.object_scales
    ctl.posture_scales = config.posture_scales
    adaptive = AdaptiveState.zeros(config.n_neurons).pack()

    y = pack_state(state0, grid)
    pp = param_pack(params, grid, config.uncertainty)
    act = np.array([config.root_limits.hi, config.root_limits.lo,
                    config.end_limits.hi, config.end_limits.lo])
    g = config.nabfc
    mon = np.array([config.analysis.beta1, config.analysis.beta2,
                    g.mu_bar, g.c1, g.mu[0], g.c3[0], g.mu[1], g.c3[1],
                    g.b1, g.g1[0], g.g1[1]])
    if config.scenario == "pds":
        lin = config.pds.pack()
    elif config.scenario == "pd":
        lin = config.pd.pack()
    else:
        lin = np.zeros(8)

    trace_data = np.zeros((n_samples, K.NCOL))
    status, steps = K.run_closed_loop(
        y, grid.n_interior, adaptive, config.n_neurons, nsteps, n_per_sample, dt,
        CTRL_IDS[config.scenario],
        g.object_pack(), g.arm_pack(), lin,
        ctl.object_net.centers, ctl.object_net.widths, np.asarray(config.object_scales, float),
        ctl.posture_net.centers, ctl.posture_net.widths, np.asarray(config.posture_scales, float),
        setpoint.pack(params), setpoint.w_d_profile[0], setpoint.w_d_profile[1],
        act, pp, mon, trace_data)

    rows_done = steps // n_per_sample + 1
    trace = SimTrace(columns=K.TRACE_COLUMNS, data=trace_data[:rows_done],
                     setpoint_lambda=setpoint.lambda_d.copy(),
                     setpoint_theta=setpoint.theta_d.copy(),
                     scenario=config.scenario)
    if status == 2:
        err = DivergenceError(f"diverged after {steps} steps (t = {steps * dt:.6g} s)")
        err.partial_trace = trace
        raise err

    summary = summarize(trace, config, dt)
    return ScenarioResult(trace=trace, summary=summary, gain_report=gain_report)


def summarize(trace: SimTrace, config: ScenarioConfig, dt: float) -> dict:
    t = trace.t
    lam_d = trace.setpoint_lambda
    th_d = trace.setpoint_theta
    sample_dt = float(t[1] - t[0]) if trace.n_samples > 1 else dt

    lam_settle, lam_over = [], []
    for i in range(2):
        lam = trace[f"lambda{i + 1}"]
        band = 0.05 * abs(lam_d[i])
        lam_settle.append(settling_time(t, lam, lam_d[i], band))
        lam_over.append(overshoot_fraction(t, lam, lam_d[i]))
    th_settle = []
    for i in range(2):
        th = trace[f"theta{i + 1}"]
        band = 0.05 * abs(th_d[i] - th[0])
        th_settle.append(settling_time(t, th, th_d[i], band))

    effort_u = float(np.trapezoid(np.abs(trace["v_act"]), dx=sample_dt))
    effort_tau = float(np.trapezoid(np.abs(trace["tau1_act"]) + np.abs(trace["tau2_act"]),
                                    dx=sample_dt))
    return {
        "scenario": trace.scenario,
        "duration": float(t[-1]),
        "lambda_d": [float(v) for v in lam_d],
        "theta_d": [float(v) for v in th_d],
        "settling_lambda": lam_settle,
        "settling_theta": th_settle,
        "overshoot_lambda": lam_over,
        "peak_v_cmd": float(np.max(np.abs(trace["v_cmd"]))),
        "peak_v_act": float(np.max(np.abs(trace["v_act"]))),
        "peak_tau_cmd": float(max(np.max(np.abs(trace["tau1_cmd"])),
                                  np.max(np.abs(trace["tau2_cmd"])))),
        "peak_tau_act": float(max(np.max(np.abs(trace["tau1_act"])),
                                  np.max(np.abs(trace["tau2_act"])))),
        "effort_u": effort_u,
        "effort_tau": effort_tau,
        "max_constraint_residual": float(max(np.max(np.abs(trace["phi_res1"])),
                                             np.max(np.abs(trace["phi_res2"])))),
    }


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------


def emit_csv(trace: SimTrace, path: str | Path) -> Path:
    """Deterministic CSV: header plus %.12g-formatted rows."""
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(trace.columns) + "\n")
            for row in trace.data:
                fh.write(",".join(format(v, ".12g") for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write trace to {path}: {exc}") from exc
    return path


def write_summary(result: ScenarioResult, path: str | Path) -> Path:
    path = Path(path)
    payload = dict(result.summary)
    payload["gain_conditions"] = [
        {"label": c.label, "margin": c.margin, "ok": c.ok} for c in result.gain_report
    ]
    try:
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write summary to {path}: {exc}") from exc
    return path


PLOT_FAMILIES = (
    ("force_arm1", "Contact force, arm 1", [("lambda1", "force [N]")]),
    ("force_arm2", "Contact force, arm 2", [("lambda2", "force [N]")]),
    ("angle_arm1", "Rotor angle, arm 1", [("theta1", "angle [rad]")]),
    ("angle_arm2", "Rotor angle, arm 2", [("theta2", "angle [rad]")]),
    ("estimate_norms", "Estimate norms", [
        ("norm_W", "object net"), ("norm_U1", "posture net 1"), ("norm_U2", "posture net 2"),
        ("abs_eps", "bias bound"), ("abs_m", "mass"), ("abs_J1", "inertia 1"),
        ("abs_J2", "inertia 2")]),
    ("control_root", "Root torques", [
        ("tau1_cmd", "cmd 1"), ("tau1_act", "actual 1"),
        ("tau2_cmd", "cmd 2"), ("tau2_act", "actual 2")]),
    ("control_end_effector", "End-effector force", [
        ("v_cmd", "cmd"), ("v_act", "actual")]),
)


def emit_plots(trace: SimTrace, out_dir: str | Path) -> list:
    """One SVG per figure family; commanded signals dotted, actual solid."""
    if trace.n_samples < 1:
        raise ValueError("cannot plot an empty trace")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, title, series in PLOT_FAMILIES:
        fig, ax = plt.subplots(figsize=(6.0, 3.6))
        for col, label in series:
            style = ":" if col.endswith("_cmd") else "-"
            ax.plot(trace.t, trace[col], style, label=label, linewidth=1.0)
        if stem.startswith("force_arm"):
            i = int(stem[-1]) - 1
            ax.axhline(trace.setpoint_lambda[i], color="k", linewidth=0.8,
                       linestyle="--", label="target")
        if stem.startswith("angle_arm"):
            i = int(stem[-1]) - 1
            ax.axhline(trace.setpoint_theta[i], color="k", linewidth=0.8,
                       linestyle="--", label="target")
        ax.set_xlabel("t [s]")
        ax.set_title(title)
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        path = out_dir / f"{stem}.svg"
        try:
            fig.savefig(path, format="svg")
        except OSError as exc:
            raise OSError(f"cannot write plot {path}: {exc}") from exc
        finally:
            plt.close(fig)
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------


def load_trace_csv(path: str | Path) -> SimTrace:
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    summary_path = path.parent / (path.stem + ".summary.json")
    lam_d = np.array([np.nan, np.nan])
    th_d = np.array([np.nan, np.nan])
    scenario = "unknown"
    if summary_path.exists():
        meta = json.loads(summary_path.read_text())
        lam_d = np.array(meta.get("lambda_d", lam_d))
        th_d = np.array(meta.get("theta_d", th_d))
        scenario = meta.get("scenario", scenario)
    return SimTrace(columns=tuple(header), data=data, setpoint_lambda=lam_d,
                    setpoint_theta=th_d, scenario=scenario)


def compare(traces: list[SimTrace]) -> dict:
    """Settling / overshoot / effort table across runs sharing one setpoint."""
    if len(traces) < 2:
        raise ValueError("compare needs at least two traces")
    ref = traces[0].setpoint_lambda
    for tr in traces[1:]:
        if not np.allclose(tr.setpoint_lambda, ref, rtol=0, atol=1e-12):
            raise ValueError("traces have mismatched setpoints")
    rows = []
    for tr in traces:
        t = tr.t
        settles, overs = [], []
        for i in range(2):
            lam = tr[f"lambda{i + 1}"]
            band = 0.05 * abs(tr.setpoint_lambda[i])
            settles.append(settling_time(t, lam, tr.setpoint_lambda[i], band))
            overs.append(overshoot_fraction(t, lam, tr.setpoint_lambda[i]))
        dt = float(t[1] - t[0])
        effort = float(np.trapezoid(np.abs(tr["v_act"]), dx=dt)
                       + np.trapezoid(np.abs(tr["tau1_act"]) + np.abs(tr["tau2_act"]), dx=dt))
        worst = None
        if all(s is not None for s in settles):
            worst = max(settles)
        rows.append({
            "scenario": tr.scenario,
            "settling_lambda": worst,
            "overshoot_lambda": max((o for o in overs if o is not None), default=None),
            "effort": effort,
        })
    return {"rows": rows}


def format_compare(report: dict) -> str:
    lines = [f"{'scenario':10s} {'settle [s]':>12s} {'overshoot':>10s} {'effort':>10s}"]
    for r in report["rows"]:
        settle = "n/a" if r["settling_lambda"] is None else f"{r['settling_lambda']:.3f}"
        over = "n/a" if r["overshoot_lambda"] is None else f"{100 * r['overshoot_lambda']:.1f}%"
        lines.append(f"{r['scenario']:10s} {settle:>12s} {over:>10s} {r['effort']:>10.4f}")
    return "\n".join(lines)
