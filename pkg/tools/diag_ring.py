"""Diagnose the sustained force ringing: who pumps, who damps.

Runs the adaptive scenario to t=1.5 s, then continues under controlled input
policies, tracking modal energy and per-channel power.
"""
import numpy as np
from dataclasses import replace

from flexgrasp.config import load_config, default_config_path
from flexgrasp.controllers import NabfcController, compute_setpoint, AdaptiveState
from flexgrasp.beam import build_grid
from flexgrasp import plant
from flexgrasp import _kernels as K


def pair(v):
    return np.array([v, v])


cfg = load_config(default_config_path("nabfc"))
cfg.nabfc = replace(cfg.nabfc, k=0.05, b1=5e-3, b2=2.0, gamma1=0.02, a1=0.1,
                    k_arm=pair(0.365), mu=pair(5.0), c3=pair(5.0))

params = cfg.plant
grid = build_grid(params.l, cfg.n_interior)
n = grid.n_interior
dt = plant.stable_dt(params, grid)
sp = compute_setpoint(cfg.lambda1_d, cfg.theta1_d, params, grid)
state0 = plant.initial_state(params, grid)
ctl = NabfcController.build(cfg.nabfc, cfg.n_neurons, cfg.seed)
adaptive = AdaptiveState.zeros(cfg.n_neurons).pack()

y = plant.pack_state(state0, grid)
pp = plant.param_pack(params, grid, cfg.uncertainty)
act = np.array([cfg.root_limits.hi, cfg.root_limits.lo, cfg.end_limits.hi, cfg.end_limits.lo])
g = cfg.nabfc
mon = np.array([cfg.analysis.beta1, cfg.analysis.beta2, g.mu_bar, g.c1,
                g.mu[0], g.c3[0], g.mu[1], g.c3[1], g.b1, g.g1[0], g.g1[1]])
spk = sp.pack(params)
nn = cfg.n_neurons
nsteps = int(round(1.5 / dt))
trace = np.zeros((nsteps // 100 + 2, K.NCOL))
status, steps = K.run_closed_loop(
    y, n, adaptive, nn, nsteps, 100, dt, K.CTRL_NABFC,
    g.object_pack(), g.arm_pack(), np.zeros(8),
    ctl.object_net.centers, ctl.object_net.widths, ctl.object_scales,
    ctl.posture_net.centers, ctl.posture_net.widths, ctl.posture_scales,
    spk, sp.w_d_profile[0], sp.w_d_profile[1], act, pp, mon, trace)
print("reached t=1.5, status", status)

m = y.shape[0]
mech = 6 + 4 * n
EI = 0.115


def lam_err(yv, u_act, t1, t2):
    d4a = np.empty(n); d4b = np.empty(n); out = np.empty(m)
    ydd, _, _ = K.plant_rates(yv, n, u_act + yv[mech], t1 + yv[mech+1], t2 + yv[mech+2],
                              pp, d4a, d4b, out)
    w1 = yv[6:6+n]
    tip1 = 0.2 * yv[0] - yv[4] + 0.1
    d3t1 = K.beam_d3_tip(w1, tip1, grid.dx)
    return 0.1 * ydd + EI * d3t1 + 0.5


def continue_run(y0, ad0, policy, T=0.6, label=""):
    yv = y0.copy(); ad = ad0.copy()
    k1 = np.empty(m); k2 = np.empty(m); k3 = np.empty(m); k4 = np.empty(m); yt = np.empty(m)
    d4a = np.empty(n); d4b = np.empty(n)
    rates = np.zeros(ad.shape[0])
    xbuf7 = np.empty(7); zbuf3 = np.empty(3)
    ybuf_o = np.empty(nn); ybuf_a = np.empty(nn)
    signals = np.zeros(11)
    steps = int(round(T / dt))
    P_u = 0.0
    errs = []
    tau_static = (0.1, -0.1)
    for s_i in range(steps):
        if policy in ("nabfc", "nabfc_u0"):
            v_cmd, t1_cmd, t2_cmd = K.nabfc_eval(
                yv, n, ad, nn, g.object_pack(), g.arm_pack(), spk, pp,
                ctl.object_net.centers, ctl.object_net.widths, ctl.object_scales,
                ctl.posture_net.centers, ctl.posture_net.widths, ctl.posture_scales,
                rates, xbuf7, zbuf3, ybuf_o, ybuf_a, signals)
            u_act = K.saturate(v_cmd, act[2], act[3])
            t1_act = K.saturate(t1_cmd, act[0], act[1])
            t2_act = K.saturate(t2_cmd, act[0], act[1])
            if policy == "nabfc_u0":
                u_act = 0.0
        elif policy == "static":
            u_act = 0.0; t1_act, t2_act = tau_static
        P_u += u_act * yv[5]
        K.rk4_step(yv, n, dt, u_act, t1_act, t2_act, pp, k1, k2, k3, k4, yt, d4a, d4b)
        if policy in ("nabfc", "nabfc_u0"):
            ad += dt * rates
        if s_i % 2000 == 0:
            errs.append(abs(lam_err(yv, u_act, t1_act, t2_act)))
    e = np.array(errs)
    print(f"{label:12s}: |lam1 err| start {e[0]:.4f} mid {e[len(e)//2]:.4f} end {e[-1]:.4f}   "
          f"mean u*ydot = {P_u/steps:+.4e} W")


continue_run(y, adaptive, "nabfc", label="full NABFC")
continue_run(y, adaptive, "nabfc_u0", label="tau only")
continue_run(y, adaptive, "static", label="static tau")
