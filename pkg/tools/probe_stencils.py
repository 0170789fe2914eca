"""Scratch probe: boundary-row stencil weights, exactness, convergence, spectra.

Not part of the package. Used to pin the finite-difference design before
freezing src/flexgrasp/beam.py.
"""
import numpy as np

np.set_printoptions(precision=6, suppress=False, linewidth=120)


def solve_weights(offsets, deriv_order, eval_at=0.0, slope_at=None):
    """Weights w s.t. sum w_j f(eval_at + o_j) (+ w_s f'(slope_at)) = f^(k)(eval_at),
    exact on polynomials of max degree = #data - 1. Offsets in units of h=1."""
    n = len(offsets) + (1 if slope_at is not None else 0)
    A = np.zeros((n, n))
    b = np.zeros(n)
    import math
    for m in range(n):  # monomial x^m about eval_at... use absolute coords
        for j, o in enumerate(offsets):
            A[m, j] = o ** m
        if slope_at is not None:
            A[m, -1] = m * slope_at ** (m - 1) if m >= 1 else 0.0
        # RHS: d^k/dx^k x^m at eval_at
        if m >= deriv_order:
            b[m] = math.factorial(m) / math.factorial(m - deriv_order) * eval_at ** (m - deriv_order)
    return np.linalg.solve(A, b)


# ---- d4 row at j=1 (eval at x=1), data f(0..4) + f'(0) , exact deg<=5
w_j1 = solve_weights([0, 1, 2, 3, 4], 4, eval_at=1.0, slope_at=0.0)
print("d4 @ j=1 with slope datum (f0..f4, f'(0)):", w_j1)

# ---- d4 row at j=n: eval at 0 with data at offsets -4..1 (tip at +1)
w_jn = solve_weights([-4, -3, -2, -1, 0, 1], 4, eval_at=0.0)
print("d4 @ j=n one-sided 6pt (f[-4..+1]):", w_jn)

# ---- d3 at tip: eval 0, data offsets 0,-1,-2,-3,-4
w_d3 = solve_weights([0, -1, -2, -3, -4], 3, eval_at=0.0)
print("d3 @ tip 5pt backward:", w_d3)

# ---- d2 at root: eval 0, data f(1), f(2), f'(0) [f(0)=0 handled via coeff]
w_d2r = solve_weights([0, 1, 2], 2, eval_at=0.0, slope_at=0.0)
print("d2 @ root (f0,f1,f2,f'(0)):", w_d2r)


def d4_profile(f, h, slope0=0.0):
    """d4 at interior nodes 1..n of a field sampled on nodes 0..n+1."""
    n = len(f) - 2
    out = np.empty(n)
    # j=1 row
    out[0] = (w_j1[:5] @ f[0:5] + w_j1[5] * slope0 * h) / h**4
    # central rows j=2..n-1
    for j in range(2, n):
        out[j - 1] = (f[j - 2] - 4 * f[j - 1] + 6 * f[j] - 4 * f[j + 1] + f[j + 2]) / h**4
    # j=n row
    out[n - 1] = (w_jn @ f[n - 4:n + 2]) / h**4
    return out


def d3_tip(f, h):
    return (w_d3 @ f[-1:-6:-1]) / h**3


def d2_root(f, h, slope0=0.0):
    return (w_d2r[0] * f[0] + w_d2r[1] * f[1] + w_d2r[2] * f[2] + w_d2r[3] * slope0 * h) / h**2


# ======== exactness on cubics (incl x^3 which violates tip BC) ========
l = 0.2
for n in (8, 39):
    h = l / (n + 1)
    x = np.linspace(0, l, n + 2)
    for name, f, d4t, d3t, d2t in [
        ("x^2(3l-x)", x**2 * (3 * l - x), np.zeros(n), -6.0, 6 * l),
        ("x^3", x**3, np.zeros(n), 6.0, 0.0),
        ("x^2", x**2, np.zeros(n), 0.0, 2.0),
    ]:
        e4 = np.max(np.abs(d4_profile(f, h) - d4t))
        e3 = abs(d3_tip(f, h) - d3t)
        e2 = abs(d2_root(f, h) - d2t)
        print(f"n={n} {name:12s} max|d4| err {e4:.2e}  d3tip err {e3:.2e}  d2root err {e2:.2e}")

# ======== convergence on sin field satisfying root clamp ========
k = 25.0
print("\nconvergence f = sin(kx) - kx (root-clamped):")
prev = None
for n in (19, 39, 79, 159):
    h = l / (n + 1)
    x = np.linspace(0, l, n + 2)
    f = np.sin(k * x) - k * x
    d4t = k**4 * np.sin(k * x[1:-1])
    d3t = -k**3 * np.cos(k * l)
    d2t = 0.0  # -k^2 sin(0)
    e4 = np.max(np.abs(d4_profile(f, h) - d4t))
    e3 = abs(d3_tip(f, h) - d3t)
    e2 = abs(d2_root(f, h) - (-k**2 * np.sin(0)))
    row = np.array([e4, e3, e2])
    msg = f"n={n:4d} errs {row}"
    if prev is not None:
        msg += f"   ratios {prev / row}"
    prev = row
    print(msg)

# ======== spectrum of the grasp-plant beam operator (tip value as data) ====
# interior unknowns w_1..w_n, tip treated as given (slaved) -> operator maps
# interior -> d4 with w0=0, tip=0 contribution for homogeneous part.
print("\nspectrum of interior d4 operator (tip,root data = 0):")
for n in (19, 39, 79):
    h = l / (n + 1)
    A = np.zeros((n, n))
    for col in range(n):
        f = np.zeros(n + 2)
        f[col + 1] = 1.0
        A[:, col] = d4_profile(f, h)
    mu = np.linalg.eigvals(A)
    mu_max = np.max(np.abs(mu))
    re_min = np.min(mu.real)
    im_max = np.max(np.abs(mu.imag))
    print(f" n={n:4d}  max|mu|*h^4 = {mu_max * h**4:.4f}  min Re(mu)*h^4 = {re_min * h**4:.3e}  "
          f"max|Im|/|mu| = {im_max / mu_max:.3e}")

# ======== clamped-free cantilever fundamental frequency ========
# free tip: unknowns w_1..w_{n+1}; BCs w(0)=w'(0)=0, w''(l)=w'''(l)=0.
# Build rows: j=1 special (slope datum), j=2..n-1 central, rows j=n, n+1 need
# ghosts g1=f(l+h), g2=f(l+2h) from the two free BCs, fitted with interior data.
def free_tip_ghosts_weights():
    # quintic p with p''(l)=0, p'''(l)=0 fitted to f(l), f(l-h), f(l-2h), f(l-3h)
    # => 6 dof, 6 conditions; return weights for p(l+h), p(l+2h) in terms of the 4 values
    import numpy.polynomial.polynomial as P
    rows = []
    # monomial basis about l, coordinates t = (x-l)/h in units h=1
    # conditions: p(0), p(-1), p(-2), p(-3) match; p''(0)=0; p'''(0)=0
    A = np.zeros((6, 6))
    for j, t in enumerate([0, -1, -2, -3]):
        A[j] = [t**m for m in range(6)]
    A[4] = [0, 0, 2, 0, 0, 0]
    A[5] = [0, 0, 0, 6, 0, 0]
    Ainv = np.linalg.inv(A)
    w_g = []
    for t in (1.0, 2.0):
        v = np.array([t**m for m in range(6)])
        w_full = v @ Ainv  # weights on [f0,f-1,f-2,f-3, 0, 0]
        w_g.append(w_full[:4])
    return np.array(w_g)


WG = free_tip_ghosts_weights()
print("free-tip ghost weights (p(l+h), p(l+2h) from f(l..l-3h)):\n", WG)

EI, rho = 0.115, 0.054


def cantilever_omega1(n):
    h = l / (n + 1)
    m = n + 1  # unknowns w_1..w_{n+1}
    A = np.zeros((m, m))
    for col in range(m):
        f = np.zeros(n + 2)
        f[col + 1] = 1.0
        g1 = WG[0] @ f[[n + 1, n, n - 1, n - 2]]
        g2 = WG[1] @ f[[n + 1, n, n - 1, n - 2]]
        fe = np.concatenate([f, [g1, g2]])
        # d4 at j=1..n+1: j=1 special, central elsewhere (ghosts supply j=n, n+1)
        col_out = np.empty(m)
        col_out[0] = (w_j1[:5] @ f[0:5]) / h**4
        for j in range(2, n + 2):
            col_out[j - 1] = (fe[j - 2] - 4 * fe[j - 1] + 6 * fe[j] - 4 * fe[j + 1] + fe[j + 2]) / h**4
        A[:, col] = col_out
    mu = np.linalg.eigvals(A)
    mu = mu[np.abs(mu.imag) < 1e-6 * np.max(np.abs(mu))].real
    mu = np.sort(mu[mu > 0])
    w1 = np.sqrt(EI / rho * mu[0])
    return w1


target = 1.8751040687119611**2 * np.sqrt(EI / (rho * l**4))
print(f"\nanalytic clamped-free omega1 = {target:.4f}")
for n in (19, 39, 79):
    w1 = cantilever_omega1(n)
    print(f" n={n:3d} omega1 = {w1:.4f}  rel err = {abs(w1 - target) / target:.4%}")
