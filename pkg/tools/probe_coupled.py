"""Spectrum lab for the fully coupled constrained system.

Assembles the linear map  x = [th1,th2,y, w1,w2] -> accelerations
(positions only; velocities decouple with zero uncertainty) for candidate
near-tip row choices, and reports eigenvalue quality:
 - stiffness eigenvalues should be real and negative (oscillatory modes),
 - max frequency must satisfy omega*dt <= 2*sqrt(2) for the default dt rule,
 - any positive real part = energy pumping (unstable semi-discretization).
"""
import numpy as np

EI, rho, l, m_tip, J = 0.115, 0.054, 0.2, 0.1, 0.0073
M_obj, d0 = 0.3, 0.1
m_eff = 0.5


def solve_weights(offsets, order, eval_at=0.0, slope_at=None, curv_at=None):
    import math
    n = len(offsets) + (slope_at is not None) + (curv_at is not None)
    A = np.zeros((n, n)); b = np.zeros(n)
    for m in range(n):
        col = 0
        for o in offsets:
            A[m, col] = o**m; col += 1
        if slope_at is not None:
            A[m, col] = m * slope_at**(m-1) if m >= 1 else 0.0; col += 1
        if curv_at is not None:
            A[m, col] = m*(m-1) * curv_at**(m-2) if m >= 2 else 0.0
        if m >= order:
            b[m] = math.factorial(m)//math.factorial(m-order) * eval_at**(m-order)
    return np.linalg.solve(A, b)


def extrap_weights(offsets, eval_at, curv_at=None, third_at=None):
    n = len(offsets) + (curv_at is not None) + (third_at is not None)
    A = np.zeros((n, n))
    for m in range(n):
        col = 0
        for o in offsets:
            A[m, col] = o**m; col += 1
        if curv_at is not None:
            A[m, col] = m*(m-1)*curv_at**(m-2) if m >= 2 else 0.0; col += 1
        if third_at is not None:
            A[m, col] = m*(m-1)*(m-2)*third_at**(m-3) if m >= 3 else 0.0
    rhs = np.array([eval_at**m for m in range(n)], float)
    return np.linalg.solve(A, rhs)


W_J1 = solve_weights([0, 1, 2, 3, 4], 4, eval_at=1.0, slope_at=0.0)
W_D2R = solve_weights([0, 1, 2], 2, eval_at=0.0, slope_at=0.0)
CENT = np.array([1.0, -4.0, 6.0, -4.0, 1.0])

# --- candidate tip treatments, all acting on [w_{n-4},w_{n-3},w_{n-2},w_{n-1},w_n,tip]
def deriv_from_fit(offsets, order, eval_at, curv_at=None):
    """Weights for f^(order)(eval_at) from the polynomial fitted to data (+tip BC)."""
    import math
    nd = len(offsets) + (curv_at is not None)
    A = np.zeros((nd, nd))
    for m in range(nd):
        col = 0
        for o in offsets:
            A[m, col] = o**m; col += 1
        if curv_at is not None:
            A[m, col] = m*(m-1)*curv_at**(m-2) if m >= 2 else 0.0
    # derivative functional on monomials
    rhs = np.zeros(nd)
    for m in range(nd):
        if m >= order:
            rhs[m] = math.factorial(m)//math.factorial(m-order) * eval_at**(m-order)
    return np.linalg.solve(A, rhs)


# offsets measured from tip in units h (tip=0, inward negative)
OFF5 = [0, -1, -2, -3, -4]

D3_CANDIDATES = {
    "onesided5": solve_weights(OFF5, 3, eval_at=0.0),                    # blanket deg<=4
    "bcfit5": deriv_from_fit(OFF5, 3, 0.0, curv_at=0.0)[:5],             # quintic w/ BC
    "bcfit4": deriv_from_fit(OFF5[:4], 3, 0.0, curv_at=0.0)[:4],         # quartic w/ BC
}

GHOST_CANDIDATES = {
    "bc5": extrap_weights(OFF5, 1.0, curv_at=0.0)[:5],                   # quintic w/ BC
    "bc4": extrap_weights(OFF5[:4], 1.0, curv_at=0.0)[:4],               # quartic w/ BC
    "bc3": np.array([2.0, -1.0, 0.0, 0.0, 0.0]),                         # 2*tip - w_n
    "pure6": extrap_weights([0, -1, -2, -3, -4, -5], 1.0)[:6],           # no BC, sextic
}


def assemble(n, d3w, ghostw, d4n_mode="ghost"):
    """Position->acceleration map A for [th1, th2, y, w1int, w2int]."""
    h = l / (n + 1)
    npos = 3 + 2 * n
    A = np.zeros((npos, npos))

    def accel(th1, th2, y, w1, w2):
        out = np.zeros(npos)
        tips = [l * th1 - y + d0, l * th2 - y + d0]
        ws = [w1, w2]
        d3t = []
        d2r = []
        d4s = []
        for arm in range(2):
            w = ws[arm]; tip = tips[arm]
            vals5 = np.array([tip, w[n-1], w[n-2], w[n-3], w[n-4]])
            if len(d3w) == 4:
                d3 = d3w @ vals5[:4] / h**3
            else:
                d3 = d3w @ vals5 / h**3
            d3t.append(d3)
            d2r.append((W_D2R[1] * w[0] + W_D2R[2] * w[1]) / h**2)
            d4 = np.zeros(n)
            d4[0] = (W_J1[1]*w[0] + W_J1[2]*w[1] + W_J1[3]*w[2] + W_J1[4]*w[3]) / h**4
            d4[1] = (-4*w[0] + 6*w[1] - 4*w[2] + w[3]) / h**4
            for i in range(2, n - 2):
                d4[i] = (w[i-2] - 4*w[i-1] + 6*w[i] - 4*w[i+1] + w[i+2]) / h**4
            d4[n-2] = (w[n-4] - 4*w[n-3] + 6*w[n-2] - 4*w[n-1] + tip) / h**4
            if len(ghostw) == 6:
                g = ghostw @ np.array([tip, w[n-1], w[n-2], w[n-3], w[n-4], w[n-5]])
            else:
                g = ghostw[:len(ghostw)] @ vals5[:len(ghostw)]
            d4[n-1] = (w[n-3] - 4*w[n-2] + 6*w[n-1] - 4*tip + g) / h**4
            d4s.append(d4)
        thdd = [-EI * d2r[0] / J, -EI * d2r[1] / J]
        ydd = (-EI * d3t[0] - EI * d3t[1]) / m_eff
        out[0] = thdd[0]; out[1] = thdd[1]; out[2] = ydd
        for arm in range(2):
            for i in range(n):
                x = (i + 1) * h
                out[3 + arm * n + i] = x * thdd[arm] - EI / rho * d4s[arm][i]
        return out

    for col in range(npos):
        z = np.zeros(npos); z[col] = 1.0
        A[:, col] = accel(z[0], z[1], z[2], z[3:3+n], z[3+n:3+2*n])
    return A


def report(n, d3name, gname):
    A = assemble(n, D3_CANDIDATES[d3name], GHOST_CANDIDATES[gname])
    ev = np.linalg.eigvals(A)
    h = l / (n + 1)
    dt = 0.5 * h**2 * np.sqrt(rho / EI)
    # oscillatory frequencies from -Re for negative real eigs
    re_max = ev.real.max()
    im_max = np.abs(ev.imag).max()
    # full first-order spectrum: lambda = +-sqrt(ev): for complex ev, growth = Re sqrt(ev)
    sq = np.sqrt(ev.astype(complex))
    growth = np.maximum(sq.real, -sq.real).max()  # max |Re| of +-sqrt
    wdt = np.abs(sq.imag).max() * dt
    print(f"d3={d3name:10s} ghost={gname:6s} n={n:3d}  max Re(stiff)={re_max:10.3e}  "
          f"max|Im(stiff)|={im_max:9.3e}  growth={growth:9.3e}/s  max w*dt={wdt:.3f}")
    return growth, wdt


for d3name in D3_CANDIDATES:
    for gname in GHOST_CANDIDATES:
        report(39, d3name, gname)
print()
# the promising ones at other n
for d3name, gname in (("bcfit5", "bc5"), ("bcfit4", "bc4"), ("onesided5", "bc3"), ("bcfit5", "bc3")):
    for n in (19, 79):
        report(n, d3name, gname)
