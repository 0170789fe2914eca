"""Compiled inner loops: packed-state plant dynamics, RK4, controllers, runner.

Packed integration state (length 6 + 4n + 1):
    [th1, th2, dth1, dth2, y, dy, w1[0:n], w2[0:n], v1[0:n], v2[0:n], fF]
where w*/v* are deflection / deflection-rate samples at the n interior nodes.
Root nodes are identically zero and tip nodes are reconstructed from the
grasp constraint, so neither is integrated.

fF is the injected object-disturbance channel: the raw functional is a rate
read of the total tip shear (smoothing-window row, slaved tip excluded) and
acts through a first-order lag,  tau_F * fF' = raw - fF.  Injected without
the lag, the shear-rate term is a lead feedback that pumps resolved modes
with a growth rate that increases under grid refinement (the model is only
meaningful at low frequency). The root-torque disturbances read interior
rate nodes only and inject directly; that channel is well behaved.

Packed adaptive state (length 3*nn + 6):
    [W[0:nn], U1[0:nn], U2[0:nn], eps, m, pi1, pi2, J1h, J2h]

Plant parameter pack `pp`:
    [EI1, EI2, rho1, rho2, l, J1, J2, m_eff, d0, h, scale_root, scale_tip,
     m1, m2, tau_F]
"""

import numpy as np
from numba import njit

from .beam import (W_D2_ROOT, W_D3_TIP, W_D3_TIP_SMOOTH, W_D4_FIRST,
                   W_D4_LAST, SMOOTH_TIP_WINDOW)

# controller ids
CTRL_OPEN = 0
CTRL_NABFC = 1
CTRL_PDS = 2
CTRL_PD = 3

# trace column layout
TRACE_COLUMNS = (
    "t",
    "theta1", "theta2", "y_obj",
    "lambda1", "lambda2",
    "v_cmd", "v_act",
    "tau1_cmd", "tau1_act", "tau2_cmd", "tau2_act",
    "E", "C", "H_meas",
    "phi_res1", "phi_res2",
    "norm_W", "abs_eps", "abs_m",
    "norm_U1", "norm_U2", "abs_pi1", "abs_pi2", "abs_J1", "abs_J2",
    "z1", "z3_1", "z3_2",
)
NCOL = len(TRACE_COLUMNS)

# pp indices
(IP_EI1, IP_EI2, IP_RHO1, IP_RHO2, IP_L, IP_J1, IP_J2, IP_MEFF, IP_D0, IP_H,
 IP_SCR, IP_SCT, IP_M1, IP_M2, IP_TAUF) = range(15)

# setpoint pack indices: [lam1, lam2, th1d, th2d, yd, wdxx0_1, wdxx0_2, lamEI1, lamEI2]
IS_LAM1, IS_LAM2, IS_TH1D, IS_TH2D, IS_YD, IS_WDXX0_1, IS_WDXX0_2, IS_LAMEI1, IS_LAMEI2 = range(9)

# monitor pack indices: [beta1, beta2, mu_bar, c1, mu1, c31, mu2, c32, b1, g11, g12]
IM_B1, IM_B2, IM_MUB, IM_C1, IM_MU1, IM_C31, IM_MU2, IM_C32, IM_AB1, IM_G11, IM_G12 = range(11)

@njit(cache=True)
def beam_d2_root(w, h):
    return (W_D2_ROOT[1] * w[0] + W_D2_ROOT[2] * w[1]) / (h * h)


@njit(cache=True)
def beam_d3_tip(w, tip, h):
    n = w.shape[0]
    return (W_D3_TIP[0] * tip + W_D3_TIP[1] * w[n - 1] + W_D3_TIP[2] * w[n - 2]
            + W_D3_TIP[3] * w[n - 3] + W_D3_TIP[4] * w[n - 4]) / (h * h * h)


@njit(cache=True)
def beam_d3_tip_smooth(w, h):
    """Tip shear rate read: least-squares cubic over the tip window.

    Excludes the slaved tip node (whose rate is the object rate, an algebraic
    feedthrough) and suppresses grid-scale content that the compact stencil
    amplifies by 1/h^3.
    """
    n = w.shape[0]
    acc = 0.0
    for j in range(SMOOTH_TIP_WINDOW):
        acc += W_D3_TIP_SMOOTH[j] * w[n - 1 - j]
    return acc / (h * h * h)


@njit(cache=True)
def beam_d4(w, tip, h, out):
    n = w.shape[0]
    h4 = h * h * h * h
    out[0] = (W_D4_FIRST[1] * w[0] + W_D4_FIRST[2] * w[1]
              + W_D4_FIRST[3] * w[2] + W_D4_FIRST[4] * w[3]) / h4
    out[1] = (-4.0 * w[0] + 6.0 * w[1] - 4.0 * w[2] + w[3]) / h4
    for i in range(2, n - 2):
        out[i] = (w[i - 2] - 4.0 * w[i - 1] + 6.0 * w[i] - 4.0 * w[i + 1] + w[i + 2]) / h4
    out[n - 2] = (w[n - 4] - 4.0 * w[n - 3] + 6.0 * w[n - 2] - 4.0 * w[n - 1] + tip) / h4
    out[n - 1] = (W_D4_LAST[0] * w[n - 5] + W_D4_LAST[1] * w[n - 4] + W_D4_LAST[2] * w[n - 3]
                  + W_D4_LAST[3] * w[n - 2] + W_D4_LAST[4] * w[n - 1] + W_D4_LAST[5] * tip) / h4


@njit(cache=True)
def shear_functional(y, n, pp):
    """T(field pair) = (EI1 + EI2) * (smooth tip shear of both fields)."""
    h = pp[IP_H]
    f1 = y[6:6 + n]
    f2 = y[6 + n:6 + 2 * n]
    return (pp[IP_EI1] + pp[IP_EI2]) * (beam_d3_tip_smooth(f1, h)
                                        + beam_d3_tip_smooth(f2, h))


@njit(cache=True)
def shear_functional_rate(y, n, pp):
    """T applied to the rate fields (equals dT/dt on the semi-discrete state)."""
    h = pp[IP_H]
    v1 = y[6 + 2 * n:6 + 3 * n]
    v2 = y[6 + 3 * n:6 + 4 * n]
    return (pp[IP_EI1] + pp[IP_EI2]) * (beam_d3_tip_smooth(v1, h)
                                        + beam_d3_tip_smooth(v2, h))


@njit(cache=True)
def unc_raw(y, n, pp):
    """Injected disturbances (dF, df1, df2) evaluated from the rate fields."""
    h = pp[IP_H]
    v1 = y[6 + 2 * n:6 + 3 * n]
    v2 = y[6 + 3 * n:6 + 4 * n]
    dF = pp[IP_SCT] * shear_functional_rate(y, n, pp)
    df1 = pp[IP_SCR] * pp[IP_EI1] * beam_d2_root(v1, h)
    df2 = pp[IP_SCR] * pp[IP_EI2] * beam_d2_root(v2, h)
    return dF, df1, df2


@njit(cache=True)
def plant_rates(y, n, u_act, tau1_act, tau2_act, pp, d4a, d4b, out):
    """State derivative under actuator inputs; returns (ydd, thdd1, thdd2).

    Root-torque disturbances are read from the interior rate nodes and added
    to the rotor torques; the object disturbance acts through the lagged
    channel slot y[6+4n], whose rate is written to out[6+4n].
    """
    EI1 = pp[IP_EI1]; EI2 = pp[IP_EI2]
    rho1 = pp[IP_RHO1]; rho2 = pp[IP_RHO2]
    l = pp[IP_L]; J1 = pp[IP_J1]; J2 = pp[IP_J2]
    m_eff = pp[IP_MEFF]; d0 = pp[IP_D0]; h = pp[IP_H]

    th1 = y[0]; th2 = y[1]; dth1 = y[2]; dth2 = y[3]; yM = y[4]; dyM = y[5]
    w1 = y[6:6 + n]; w2 = y[6 + n:6 + 2 * n]
    v1 = y[6 + 2 * n:6 + 3 * n]; v2 = y[6 + 3 * n:6 + 4 * n]

    tip1 = l * th1 - yM + d0
    tip2 = l * th2 - yM + d0

    d2r1 = beam_d2_root(w1, h)
    d2r2 = beam_d2_root(w2, h)
    d3t1 = beam_d3_tip(w1, tip1, h)
    d3t2 = beam_d3_tip(w2, tip2, h)

    df1 = pp[IP_SCR] * EI1 * beam_d2_root(v1, h)
    df2 = pp[IP_SCR] * EI2 * beam_d2_root(v2, h)

    thdd1 = (tau1_act + df1 - EI1 * d2r1) / J1
    thdd2 = (tau2_act + df2 - EI2 * d2r2) / J2
    S_force = EI1 * d3t1 + EI2 * d3t2
    dF = y[6 + 4 * n]
    ydd = (u_act + dF - S_force) / m_eff

    beam_d4(w1, tip1, h, d4a)
    beam_d4(w2, tip2, h, d4b)

    out[0] = dth1; out[1] = dth2
    out[2] = thdd1; out[3] = thdd2
    out[4] = dyM
    out[5] = ydd
    c1 = EI1 / rho1
    c2 = EI2 / rho2
    for i in range(n):
        x = (i + 1) * h
        out[6 + i] = v1[i]
        out[6 + n + i] = v2[i]
        out[6 + 2 * n + i] = x * thdd1 - c1 * d4a[i]
        out[6 + 3 * n + i] = x * thdd2 - c2 * d4b[i]
    out[6 + 4 * n] = (pp[IP_SCT] * shear_functional_rate(y, n, pp) - dF) / pp[IP_TAUF]
    return ydd, thdd1, thdd2


@njit(cache=True)
def rk4_step(y, n, dt, u_act, tau1, tau2, pp, k1, k2, k3, k4, yt, d4a, d4b):
    """Classical four-stage step with actuator inputs held over the substages."""
    m = y.shape[0]
    plant_rates(y, n, u_act, tau1, tau2, pp, d4a, d4b, k1)
    for i in range(m):
        yt[i] = y[i] + 0.5 * dt * k1[i]
    plant_rates(yt, n, u_act, tau1, tau2, pp, d4a, d4b, k2)
    for i in range(m):
        yt[i] = y[i] + 0.5 * dt * k2[i]
    plant_rates(yt, n, u_act, tau1, tau2, pp, d4a, d4b, k3)
    for i in range(m):
        yt[i] = y[i] + dt * k3[i]
    plant_rates(yt, n, u_act, tau1, tau2, pp, d4a, d4b, k4)
    for i in range(m):
        y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


@njit(cache=True)
def rbf_basis(centers, widths, xs, out):
    nn = centers.shape[0]
    d = centers.shape[1]
    for j in range(nn):
        acc = 0.0
        for k in range(d):
            diff = xs[k] - centers[j, k]
            acc += diff * diff
        out[j] = np.exp(-acc / (2.0 * widths[j] * widths[j]))


@njit(cache=True)
def clip(x, bound):
    if x > bound:
        return bound
    if x < -bound:
        return -bound
    return x


@njit(cache=True)
def nabfc_eval(y, n, adaptive, nn, obj_gains, arm_gains, sp, pp,
               oc, ow, osc, ac, aw, asc,
               rates, xbuf7, zbuf3, ybuf_o, ybuf_a, signals):
    """Adaptive control commands and estimate rates at the current state.

    signals := [z1, z2, s, alpha1, dalpha1, z3_1, z4_1, s_1, z3_2, z4_2, s_2]
    returns (v_cmd, tau1_cmd, tau2_cmd)
    """
    EI1 = pp[IP_EI1]; EI2 = pp[IP_EI2]; l = pp[IP_L]
    d0 = pp[IP_D0]; h = pp[IP_H]

    th1 = y[0]; th2 = y[1]; dth1 = y[2]; dth2 = y[3]; yM = y[4]; dyM = y[5]
    w1 = y[6:6 + n]; w2 = y[6 + n:6 + 2 * n]
    v1 = y[6 + 2 * n:6 + 3 * n]; v2 = y[6 + 3 * n:6 + 4 * n]
    tip1 = l * th1 - yM + d0
    tip2 = l * th2 - yM + d0

    d3t1 = beam_d3_tip(w1, tip1, h)
    d3t2 = beam_d3_tip(w2, tip2, h)
    # rate-field boundary reads use the smoothing window row
    d3tv1 = beam_d3_tip_smooth(v1, h)
    d3tv2 = beam_d3_tip_smooth(v2, h)
    d2r1 = beam_d2_root(w1, h)
    d2r2 = beam_d2_root(w2, h)

    eta = obj_gains[0]; k = obj_gains[1]; mu_bar = obj_gains[2]; c1 = obj_gains[3]
    eps1 = obj_gains[4]; a1 = obj_gains[5]; a2 = obj_gains[6]
    gamma1 = obj_gains[7]; gamma2 = obj_gains[8]; b1 = obj_gains[9]; b2 = obj_gains[10]
    sbound = obj_gains[11]

    # shifted-coordinate tip shear: q_xxx(l) = w_xxx(l) - lam_d/EI
    q3_1 = d3t1 - sp[IS_LAMEI1]
    q3_2 = d3t2 - sp[IS_LAMEI2]
    sum_q3 = q3_1 + q3_2
    sum_q3d = d3tv1 + d3tv2

    z1 = yM - sp[IS_YD]
    dz1 = dyM
    alpha1 = -c1 * z1 - sum_q3
    z2 = dz1 - alpha1
    s = mu_bar * z1 + z2
    dalpha1 = -c1 * dz1 - sum_q3d

    # network input, normalized onto the unit box
    xbuf7[0] = z1; xbuf7[1] = s; xbuf7[2] = dalpha1
    xbuf7[3] = d3t1; xbuf7[4] = d3t2; xbuf7[5] = d3tv1; xbuf7[6] = d3tv2
    for i in range(7):
        xbuf7[i] = xbuf7[i] / osc[i]
    rbf_basis(oc, ow, xbuf7, ybuf_o)

    W = adaptive[0:nn]
    eps_hat = adaptive[3 * nn]
    m_hat = adaptive[3 * nn + 1]

    west = 0.0
    for j in range(nn):
        west += W[j] * ybuf_o[j]
    tanh_s = np.tanh(s / eps1)

    v = (-eta * clip(s, sbound) - k * s - z1 - m_hat * dz1 * (mu_bar + c1)
         + EI1 * q3_1 + EI2 * q3_2 - west - eps_hat * tanh_s - m_hat * sum_q3d)

    # adaptive rates: leakage-modified gradient laws
    for j in range(nn):
        rates[j] = a1 * s * ybuf_o[j] - a1 * a2 * W[j]
    rates[3 * nn] = gamma1 * s * tanh_s - gamma1 * gamma2 * eps_hat
    rates[3 * nn + 1] = b1 * s * (dz1 * (mu_bar + c1) + sum_q3d) - b1 * b2 * m_hat

    signals[0] = z1; signals[1] = z2; signals[2] = s
    signals[3] = alpha1; signals[4] = dalpha1

    # posture loops
    taus = np.empty(2)
    for arm in range(2):
        xi = arm_gains[arm, 0]; k_i = arm_gains[arm, 1]; mu = arm_gains[arm, 2]
        c3 = arm_gains[arm, 3]; eps2 = arm_gains[arm, 4]
        a3 = arm_gains[arm, 5]; a4 = arm_gains[arm, 6]
        zeta1 = arm_gains[arm, 7]; zeta2 = arm_gains[arm, 8]
        g1 = arm_gains[arm, 9]; g2 = arm_gains[arm, 10]

        if arm == 0:
            th = th1; dth = dth1; d2r = d2r1
            thd = sp[IS_TH1D]; wdxx0 = sp[IS_WDXX0_1]; lam_d = sp[IS_LAM1]; EIa = EI1
        else:
            th = th2; dth = dth2; d2r = d2r2
            thd = sp[IS_TH2D]; wdxx0 = sp[IS_WDXX0_2]; lam_d = sp[IS_LAM2]; EIa = EI2

        z3 = th - thd
        dz3 = dth
        alpha2 = -c3 * z3
        z4 = dz3 - alpha2
        s_i = mu * z3 + z4
        dalpha2 = -c3 * dz3
        q_xx0 = d2r - wdxx0

        zbuf3[0] = z3 / asc[0]; zbuf3[1] = s_i / asc[1]; zbuf3[2] = dalpha2 / asc[2]
        rbf_basis(ac, aw, zbuf3, ybuf_a)

        U = adaptive[(1 + arm) * nn:(2 + arm) * nn]
        pi_hat = adaptive[3 * nn + 2 + arm]
        J_hat = adaptive[3 * nn + 4 + arm]

        uest = 0.0
        for j in range(nn):
            uest += U[j] * ybuf_a[j]
        tanh_si = np.tanh(s_i / eps2)

        taus[arm] = (-xi * clip(s_i, sbound) - k_i * s_i - z3 - J_hat * dz3 * (mu + c3)
                     + EIa * q_xx0 - uest - pi_hat * tanh_si - lam_d * l)

        for j in range(nn):
            rates[(1 + arm) * nn + j] = a3 * s_i * ybuf_a[j] - a3 * a4 * U[j]
        rates[3 * nn + 2 + arm] = zeta1 * s_i * tanh_si - zeta1 * zeta2 * pi_hat
        rates[3 * nn + 4 + arm] = g1 * s_i * dz3 * (mu + c3) - g1 * g2 * J_hat

        signals[5 + 3 * arm] = z3
        signals[6 + 3 * arm] = z4
        signals[7 + 3 * arm] = s_i

    return v, taus[0], taus[1]


@njit(cache=True)
def linear_eval(y, n, lin_gains, sp, pp):
    """Proportional-derivative commands, optionally with root strain feedback.

    lin_gains = [kp, kv, kp1, kv1, ks1, kp2, kv2, ks2]; zero ks_* gives plain PD.
    returns (v_cmd, tau1_cmd, tau2_cmd)
    """
    EI1 = pp[IP_EI1]; EI2 = pp[IP_EI2]; l = pp[IP_L]
    d0 = pp[IP_D0]; h = pp[IP_H]

    th1 = y[0]; th2 = y[1]; dth1 = y[2]; dth2 = y[3]; yM = y[4]; dyM = y[5]
    w1 = y[6:6 + n]; w2 = y[6 + n:6 + 2 * n]
    tip1 = l * th1 - yM + d0
    tip2 = l * th2 - yM + d0
    d3t1 = beam_d3_tip(w1, tip1, h)
    d3t2 = beam_d3_tip(w2, tip2, h)
    d2r1 = beam_d2_root(w1, h)
    d2r2 = beam_d2_root(w2, h)

    p = yM - sp[IS_YD]
    dp = dyM
    v = -lin_gains[0] * p - lin_gains[1] * dp + EI1 * d3t1 + EI2 * d3t2

    e1 = th1 - sp[IS_TH1D]
    e2 = th2 - sp[IS_TH2D]
    q_xx0_1 = d2r1 - sp[IS_WDXX0_1]
    q_xx0_2 = d2r2 - sp[IS_WDXX0_2]
    tau1 = -lin_gains[2] * e1 - lin_gains[3] * dth1 - lin_gains[4] * EI1 * q_xx0_1 + EI1 * d2r1
    tau2 = -lin_gains[5] * e2 - lin_gains[6] * dth2 - lin_gains[7] * EI2 * q_xx0_2 + EI2 * d2r2
    return v, tau1, tau2


@njit(cache=True)
def saturate(cmd, hi, lo):
    if cmd >= hi:
        return hi
    if cmd <= lo:
        return lo
    return cmd


@njit(cache=True)
def monitor_energies(y, n, sp, pp, wd1, wd2, beta1, beta2, qbuf, qxbuf, qxxbuf, ybuf):
    """E (bending + relative kinetic) and the weighted cross term C."""
    l = pp[IP_L]; d0 = pp[IP_D0]; h = pp[IP_H]
    E = 0.0
    C = 0.0
    for arm in range(2):
        if arm == 0:
            th = y[0]; dth = y[2]
            EIa = pp[IP_EI1]; rho = pp[IP_RHO1]
            w = y[6:6 + n]; v = y[6 + 2 * n:6 + 3 * n]
            wd = wd1
        else:
            th = y[1]; dth = y[3]
            EIa = pp[IP_EI2]; rho = pp[IP_RHO2]
            w = y[6 + n:6 + 2 * n]; v = y[6 + 3 * n:6 + 4 * n]
            wd = wd2
        yM = y[4]; dyM = y[5]
        tip = l * th - yM + d0
        tipv = l * dth - dyM

        # shifted fields on all nodes: q = w - w_d, qdot = v
        qbuf[0] = 0.0
        for i in range(n):
            qbuf[i + 1] = w[i] - wd[i + 1]
        qbuf[n + 1] = tip - wd[n + 1]

        # curvature: central interior, ends linearly extrapolated
        for j in range(1, n + 1):
            qxxbuf[j] = (qbuf[j - 1] - 2.0 * qbuf[j] + qbuf[j + 1]) / (h * h)
        qxxbuf[0] = 2.0 * qxxbuf[1] - qxxbuf[2]
        qxxbuf[n + 1] = 2.0 * qxxbuf[n] - qxxbuf[n - 1]

        # slope: root exactly zero (clamped), central interior, one-sided tip
        qxbuf[0] = 0.0
        for j in range(1, n + 1):
            qxbuf[j] = (qbuf[j + 1] - qbuf[j - 1]) / (2.0 * h)
        qxbuf[n + 1] = (3.0 * qbuf[n + 1] - 4.0 * qbuf[n] + qbuf[n - 1]) / (2.0 * h)

        # relative transverse rate: ydot_i = qdot - x * edot
        ybuf[0] = 0.0
        for i in range(n):
            x = (i + 1) * h
            ybuf[i + 1] = v[i] - x * dth
        ybuf[n + 1] = tipv - l * dth

        e_curv = 0.0
        e_kin = 0.0
        c_arm = 0.0
        for j in range(n + 2):
            wgt = 0.5 * h if (j == 0 or j == n + 1) else h
            x = j * h
            e_curv += wgt * qxxbuf[j] * qxxbuf[j]
            e_kin += wgt * ybuf[j] * ybuf[j]
            c_arm += wgt * (x - l) * ybuf[j] * qxbuf[j]
        E += 0.5 * beta1 * (EIa * e_curv + rho * e_kin)
        C += beta2 * rho * c_arm
    return E, C


@njit(cache=True)
def run_closed_loop(y, n, adaptive, nn, nsteps, stride, dt, ctrl_id,
                    obj_gains, arm_gains, lin_gains,
                    oc, ow, osc, ac, aw, asc,
                    sp, wd1, wd2, act, pp, mon, trace):
    """Fixed-step closed loop with sample-and-hold control; fills `trace`.

    `y` is the extended state (disturbance filters appended);
    act = [root_hi, root_lo, end_hi, end_lo].
    Returns (status, steps_completed): status 0 = ok, 2 = diverged.
    """
    m = y.shape[0]
    k1 = np.empty(m); k2 = np.empty(m); k3 = np.empty(m); k4 = np.empty(m); yt = np.empty(m)
    d4a = np.empty(n); d4b = np.empty(n)
    rates = np.zeros(adaptive.shape[0])
    xbuf7 = np.empty(7); zbuf3 = np.empty(3)
    ybuf_o = np.empty(nn); ybuf_a = np.empty(nn)
    signals = np.zeros(11)
    qbuf = np.empty(n + 2); qxbuf = np.empty(n + 2); qxxbuf = np.empty(n + 2); ybuf = np.empty(n + 2)

    l = pp[IP_L]; d0 = pp[IP_D0]
    EI1 = pp[IP_EI1]; EI2 = pp[IP_EI2]
    m1 = pp[IP_M1]; m2 = pp[IP_M2]

    row = 0
    for step in range(nsteps + 1):
        t = step * dt

        # controller (sample-and-hold for the next step)
        if ctrl_id == CTRL_NABFC:
            v_cmd, t1_cmd, t2_cmd = nabfc_eval(
                y, n, adaptive, nn, obj_gains, arm_gains, sp, pp,
                oc, ow, osc, ac, aw, asc, rates, xbuf7, zbuf3, ybuf_o, ybuf_a, signals)
        elif ctrl_id == CTRL_PDS or ctrl_id == CTRL_PD:
            v_cmd, t1_cmd, t2_cmd = linear_eval(y, n, lin_gains, sp, pp)
        else:
            v_cmd = 0.0; t1_cmd = 0.0; t2_cmd = 0.0

        u_act = saturate(v_cmd, act[2], act[3])
        t1_act = saturate(t1_cmd, act[0], act[1])
        t2_act = saturate(t2_cmd, act[0], act[1])

        if step % stride == 0:
            # loop signals for monitoring (controller-independent definitions)
            yM = y[4]; dyM = y[5]
            z1m = yM - sp[IS_YD]
            w1s = y[6:6 + n]; w2s = y[6 + n:6 + 2 * n]
            tip1 = l * y[0] - yM + d0
            tip2 = l * y[1] - yM + d0
            d3t1 = beam_d3_tip(w1s, tip1, pp[IP_H])
            d3t2 = beam_d3_tip(w2s, tip2, pp[IP_H])
            sum_q3 = d3t1 - sp[IS_LAMEI1] + d3t2 - sp[IS_LAMEI2]
            alpha1m = -mon[IM_C1] * z1m - sum_q3
            z2m = dyM - alpha1m
            s_m = mon[IM_MUB] * z1m + z2m
            z3m1 = y[0] - sp[IS_TH1D]
            z3m2 = y[1] - sp[IS_TH2D]
            s1m = (mon[IM_MU1] + mon[IM_C31]) * z3m1 + y[2]
            s2m = (mon[IM_MU2] + mon[IM_C32]) * z3m2 + y[3]

            # contact forces under the currently acting inputs
            ydd, thdd1, thdd2 = plant_rates(y, n, u_act, t1_act, t2_act,
                                            pp, d4a, d4b, k1)
            lam1 = m1 * ydd + EI1 * d3t1
            lam2 = m2 * ydd + EI2 * d3t2

            E, Cc = monitor_energies(y, n, sp, pp, wd1, wd2, mon[IM_B1], mon[IM_B2],
                                     qbuf, qxbuf, qxxbuf, ybuf)

            m_hat = adaptive[3 * nn + 1]
            J1_hat = adaptive[3 * nn + 4]
            J2_hat = adaptive[3 * nn + 5]
            m_tilde = pp[IP_MEFF] - m_hat
            J1_tilde = pp[IP_J1] - J1_hat
            J2_tilde = pp[IP_J2] - J2_hat
            H = (0.5 * z1m * z1m + 0.5 * pp[IP_MEFF] * s_m * s_m
                 + 0.5 / mon[IM_AB1] * m_tilde * m_tilde
                 + 0.5 * z3m1 * z3m1 + 0.5 * pp[IP_J1] * s1m * s1m
                 + 0.5 / mon[IM_G11] * J1_tilde * J1_tilde
                 + 0.5 * z3m2 * z3m2 + 0.5 * pp[IP_J2] * s2m * s2m
                 + 0.5 / mon[IM_G12] * J2_tilde * J2_tilde
                 + E + Cc)

            nw = 0.0; nu1 = 0.0; nu2 = 0.0
            for j in range(nn):
                nw += adaptive[j] * adaptive[j]
                nu1 += adaptive[nn + j] * adaptive[nn + j]
                nu2 += adaptive[2 * nn + j] * adaptive[2 * nn + j]

            trace[row, 0] = t
            trace[row, 1] = y[0]; trace[row, 2] = y[1]; trace[row, 3] = yM
            trace[row, 4] = lam1; trace[row, 5] = lam2
            trace[row, 6] = v_cmd; trace[row, 7] = u_act
            trace[row, 8] = t1_cmd; trace[row, 9] = t1_act
            trace[row, 10] = t2_cmd; trace[row, 11] = t2_act
            trace[row, 12] = E; trace[row, 13] = Cc; trace[row, 14] = H
            trace[row, 15] = l * y[0] - tip1 - yM + d0
            trace[row, 16] = l * y[1] - tip2 - yM + d0
            trace[row, 17] = np.sqrt(nw)
            trace[row, 18] = abs(adaptive[3 * nn])
            trace[row, 19] = abs(m_hat)
            trace[row, 20] = np.sqrt(nu1); trace[row, 21] = np.sqrt(nu2)
            trace[row, 22] = abs(adaptive[3 * nn + 2]); trace[row, 23] = abs(adaptive[3 * nn + 3])
            trace[row, 24] = abs(J1_hat); trace[row, 25] = abs(J2_hat)
            trace[row, 26] = z1m; trace[row, 27] = z3m1; trace[row, 28] = z3m2
            row += 1

        if step == nsteps:
            break

        rk4_step(y, n, dt, u_act, t1_act, t2_act, pp, k1, k2, k3, k4, yt, d4a, d4b)
        if ctrl_id == CTRL_NABFC:
            for j in range(adaptive.shape[0]):
                adaptive[j] += dt * rates[j]
            # mass / inertia estimates are physical quantities: project onto
            # the non-negative half-line (a negative mass estimate flips the
            # rate-feedback term into anti-damping and locks a limit cycle)
            if adaptive[3 * nn + 1] < 0.0:
                adaptive[3 * nn + 1] = 0.0
            if adaptive[3 * nn + 4] < 0.0:
                adaptive[3 * nn + 4] = 0.0
            if adaptive[3 * nn + 5] < 0.0:
                adaptive[3 * nn + 5] = 0.0

        if not (np.isfinite(y[4]) and abs(y[4]) < 1e6 and abs(y[0]) < 1e6
                and abs(y[5]) < 1e6 and abs(y[2]) < 1e6 and abs(y[3]) < 1e6):
            return 2, step + 1

    return 0, nsteps
