"""Verify the selected stencil set: j1=direct5, jn=ghost_bc5, d3 backward5, d2 root row."""
import numpy as np


def solve_weights(offsets, deriv_order, eval_at=0.0, slope_at=None):
    import math
    n = len(offsets) + (1 if slope_at is not None else 0)
    A = np.zeros((n, n))
    b = np.zeros(n)
    for m in range(n):
        for j, o in enumerate(offsets):
            A[m, j] = o ** m
        if slope_at is not None:
            A[m, -1] = m * slope_at ** (m - 1) if m >= 1 else 0.0
        if m >= deriv_order:
            b[m] = math.factorial(m) / math.factorial(m - deriv_order) * eval_at ** (m - deriv_order)
    return np.linalg.solve(A, b)


def extrap_weights(offsets, eval_at, slope_at=None, curv_at=None):
    n = len(offsets) + (slope_at is not None) + (curv_at is not None)
    A = np.zeros((n, n))
    for m in range(n):
        col = 0
        for o in offsets:
            A[m, col] = o ** m
            col += 1
        if slope_at is not None:
            A[m, col] = m * slope_at ** (m - 1) if m >= 1 else 0.0
            col += 1
        if curv_at is not None:
            A[m, col] = m * (m - 1) * curv_at ** (m - 2) if m >= 2 else 0.0
    rhs = np.array([eval_at ** m for m in range(n)], dtype=float)
    return np.linalg.solve(A.T, rhs)


W_J1 = solve_weights([0, 1, 2, 3, 4], 4, eval_at=1.0, slope_at=0.0)       # + slope*h
W_TIPGHOST = extrap_weights([0, -1, -2, -3, -4], 1.0, curv_at=0.0)[:5]     # on tip..tip-4h
W_D3 = solve_weights([0, -1, -2, -3, -4], 3, eval_at=0.0)                  # on tip..tip-4h
W_D2R = solve_weights([0, 1, 2], 2, eval_at=0.0, slope_at=0.0)             # f0 f1 f2 + slope*h
CENT = np.array([1.0, -4.0, 6.0, -4.0, 1.0])
print("W_J1      =", W_J1)
print("W_TIPGHOST=", W_TIPGHOST)
print("W_D3      =", W_D3)
print("W_D2R     =", W_D2R)


def d4_profile(f, h, slope0=0.0):
    n = len(f) - 2
    out = np.empty(n)
    out[0] = (W_J1[:5] @ f[0:5] + W_J1[5] * slope0 * h) / h**4
    for j in range(2, n):
        out[j - 1] = (CENT @ f[j - 2:j + 3]) / h**4
    g = W_TIPGHOST @ f[n + 1:n - 4:-1]
    out[n - 1] = (CENT @ np.concatenate([f[n - 2:n + 2], [g]])) / h**4
    return out


def d3_tip(f, h):
    return (W_D3 @ f[-1:-6:-1]) / h**3


def d2_root(f, h, slope0=0.0):
    return (W_D2R[0] * f[0] + W_D2R[1] * f[1] + W_D2R[2] * f[2] + W_D2R[3] * slope0 * h) / h**2


l = 0.2
print("\n-- exactness on admissible cubics (root clamped; d4 also needs tip moment-free) --")
for n in (8, 39, 79):
    h = l / (n + 1)
    x = np.linspace(0, l, n + 2)
    lam_over_EI = -0.5 / 0.115
    eq = lam_over_EI * x**2 / 2 * (x / 3 - l)    # equilibrium cubic, w''(l)=0
    tipload = x**2 * (3 * l - x)                 # w''(l)=0 as well
    for name, f, d3t, d2t in [
        ("equilibrium", eq, lam_over_EI, -lam_over_EI * l),
        ("tip-load", tipload, -6.0, 6 * l),
        ("x^3 (d3/d2 only)", x**3, 6.0, 0.0),
    ]:
        e3 = abs(d3_tip(f, h) - d3t)
        e2 = abs(d2_root(f, h) - d2t)
        msg = f"n={n:3d} {name:18s} d3tip err {e3:.2e}  d2root err {e2:.2e}"
        if name != "x^3 (d3/d2 only)":
            msg += f"  max|d4| err {np.max(np.abs(d4_profile(f, h))):.2e}"
        print(msg)

print("\n-- convergence on BC-adjusted sine: f = sin(kx) - kx + k^2 sin(kl)/(6l) x^3 --")
for k in (10.0, 15.0):
    prev = None
    print(f" k={k}")
    for n in (19, 39, 79, 159, 319):
        h = l / (n + 1)
        x = np.linspace(0, l, n + 2)
        b3 = k**2 * np.sin(k * l) / (6 * l)
        f = np.sin(k * x) - k * x + b3 * x**3
        d4t = k**4 * np.sin(k * x[1:-1])
        d3t = -k**3 * np.cos(k * l) + 6 * b3
        d2t = 0.0 + 0.0
        e4 = np.max(np.abs(d4_profile(f, h) - d4t))
        e3 = abs(d3_tip(f, h) - d3t)
        e2 = abs(d2_root(f, h) - d2t)
        row = np.array([e4, e3, e2])
        msg = f"  n={n:4d} errs [{e4:.3e} {e3:.3e} {e2:.3e}]"
        if prev is not None:
            msg += f"  ratios {np.round(prev / row, 2)}"
        prev = row
        print(msg)

print("\n-- spectrum of interior operator (root/tip data=0) --")
for n in (19, 39, 79, 159):
    A = np.zeros((n, n))
    for col in range(n):
        f = np.zeros(n + 2)
        f[col + 1] = 1.0
        A[:, col] = d4_profile(f, 1.0)
    mu = np.linalg.eigvals(A)
    idx = np.argsort(mu.real)
    print(f" n={n:4d} max|mu| = {np.abs(mu).max():.4f}  min Re = {mu.real.min():.6e}  "
          f"max|Im| = {np.abs(mu.imag).max():.2e}  smallest 3: {np.sort(mu.real)[:3] * (n+1)**4 / l**0}")

# smallest eigenvalue should approach the clamped-pinned-ish continuum value as n grows:
# w'''' = mu w, w(0)=w'(0)=0, w(l)=0, w''(l)=0 -> beta roots of tan(b) = tanh(b), b1=3.9266
b1 = 3.926602312047919
print(f"continuum lowest mu*l^4 = {b1**4:.3f}")
for n in (19, 39, 79):
    h = l / (n + 1)
    A = np.zeros((n, n))
    for col in range(n):
        f = np.zeros(n + 2)
        f[col + 1] = 1.0
        A[:, col] = d4_profile(f, h)
    mu = np.sort(np.linalg.eigvals(A).real)
    print(f" n={n:3d} lowest mu*l^4 = {mu[0] * l**4:.3f}")
