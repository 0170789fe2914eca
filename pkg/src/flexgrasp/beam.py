"""Spatial discretization of a clamped-root flexible arm.

Uniform grid over [0, l] with finite-difference stencils for the second,
third and fourth spatial derivatives of the deflection field. The root is
clamped (value and slope known), the tip carries a point mass whose value is
slaved to the grasp constraint, and the tip cross-section is moment-free.

Boundary-adjacent rows are one-sided / ghost-extended so that every operator
annihilates the static load cubics exactly while staying second-order
accurate on smooth fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ArmParams",
    "BeamGrid",
    "BeamDerivatives",
    "build_grid",
    "spatial_derivatives",
    "velocity_third_derivative_at_tip",
    "smooth_tip_third_derivative_weights",
    "synthesize_ghosts",
]

MIN_INTERIOR_NODES = 8


@dataclass(frozen=True)
class ArmParams:
    """Physical constants of one arm: rigidity, density, length, tip mass, hub inertia."""

    EI: float          # flexural rigidity, N m^2
    rho: float         # mass per unit length, kg/m
    l: float           # arm length, m
    m_tip: float       # end point mass, kg
    J_hub: float       # rotor hub inertia, kg m^2

    def __post_init__(self):
        for name in ("EI", "rho", "l", "m_tip", "J_hub"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"ArmParams.{name} must be strictly positive")


@dataclass(frozen=True)
class BeamGrid:
    """Uniform grid with n_interior nodes strictly inside (0, l)."""

    n_interior: int
    dx: float
    node_x: np.ndarray = field(repr=False)

    @property
    def n_nodes(self) -> int:
        return self.n_interior + 2


def build_grid(l: float, n_interior: int) -> BeamGrid:
    """Build a uniform grid spanning [0, l] with n_interior + 2 nodes."""
    if l <= 0.0:
        raise ValueError("beam length must be positive")
    if n_interior < MIN_INTERIOR_NODES:
        raise ValueError(
            f"n_interior must be >= {MIN_INTERIOR_NODES} (boundary stencils need support)"
        )
    dx = l / (n_interior + 1)
    node_x = np.linspace(0.0, l, n_interior + 2)
    return BeamGrid(n_interior=n_interior, dx=dx, node_x=node_x)


# ---------------------------------------------------------------------------
# Stencil weights (unit spacing). Derived once by solving small Vandermonde
# systems; each row is exact on polynomials up to the stated degree.
# ---------------------------------------------------------------------------


def _derivative_weights(offsets, order, eval_at=0.0, with_slope_at=None):
    """Weights reproducing f^(order)(eval_at) from values at `offsets` (unit h),
    optionally using f'(with_slope_at) as an extra datum. Exact on polynomials
    of degree < number of data."""
    n = len(offsets) + (1 if with_slope_at is not None else 0)
    A = np.zeros((n, n))
    b = np.zeros(n)
    for m in range(n):
        for j, o in enumerate(offsets):
            A[m, j] = o**m
        if with_slope_at is not None:
            A[m, -1] = m * with_slope_at ** (m - 1) if m >= 1 else 0.0
        if m >= order:
            b[m] = math.factorial(m) // math.factorial(m - order) * eval_at ** (m - order)
    return np.linalg.solve(A, b)


def _extrapolation_weights(offsets, eval_at, curvature_at=None):
    """Weights reproducing p(eval_at) where p interpolates values at `offsets`
    and, optionally, p''(curvature_at) = 0."""
    n = len(offsets) + (1 if curvature_at is not None else 0)
    A = np.zeros((n, n))
    for m in range(n):
        col = 0
        for o in offsets:
            A[m, col] = o**m
            col += 1
        if curvature_at is not None:
            A[m, col] = m * (m - 1) * curvature_at ** (m - 2) if m >= 2 else 0.0
    rhs = np.array([eval_at**m for m in range(n)], dtype=float)
    return np.linalg.solve(A, rhs)


# d2 at the root from f(0), f(h), f(2h) and the root slope; exact on cubics.
W_D2_ROOT = _derivative_weights([0, 1, 2], 2, eval_at=0.0, with_slope_at=0.0)
# d2 at the tip, one-sided backward on f(l), f(l-h), f(l-2h), f(l-3h); exact on cubics.
W_D2_TIP = _derivative_weights([0, -1, -2, -3], 2, eval_at=0.0)
# d3 at the tip, one-sided backward on the last five nodes; exact through degree 4.
W_D3_TIP = _derivative_weights([0, -1, -2, -3, -4], 3, eval_at=0.0)

SMOOTH_TIP_WINDOW = 12


def smooth_tip_third_derivative_weights(k_window: int) -> np.ndarray:
    """Tip third-derivative row from a least-squares cubic over the k_window
    nodes strictly inside the tip (offsets -1..-k_window, unit spacing).

    Rate-field reads use this row instead of the compact stencil: the compact
    one both feeds the slaved tip rate straight through with an h^-3 gain and
    amplifies grid-scale content, which closes noise-driven feedback loops
    through the injected disturbances and the controller. The projection onto
    cubics keeps the read exact on cubic fields and O(h^2)-consistent while
    collapsing the response to short-wavelength content.
    """
    if k_window < 4:
        raise ValueError("smoothing window needs at least 4 nodes")
    t = -np.arange(1.0, k_window + 1.0)
    X = np.vander(t, 4, increasing=True)
    coef = np.linalg.solve(X.T @ X, X.T)
    return 6.0 * coef[3]


W_D3_TIP_SMOOTH = smooth_tip_third_derivative_weights(SMOOTH_TIP_WINDOW)
# d4 at the first interior node from f(0..4h) and the root slope; exact through degree 5.
W_D4_FIRST = _derivative_weights([0, 1, 2, 3, 4], 4, eval_at=1.0, with_slope_at=0.0)
# Quintic tip extension honoring the moment-free condition p''(l) = 0;
# reproduces p(l + h) from the last five node values.
W_TIP_EXTEND = _extrapolation_weights([0, -1, -2, -3, -4], 1.0, curvature_at=0.0)[:5]
# d4 at the last interior node: central row [1,-4,6,-4,1] on
# [f(l-3h), f(l-2h), f(l-h), f(l), ghost] with the quintic tip extension as ghost.
# Expressed on the six stored values [f(l-5h), ..., f(l-h), f(l)].
W_D4_LAST = np.zeros(6)
W_D4_LAST[2:6] += np.array([1.0, -4.0, 6.0, -4.0])   # f(l-3h) .. f(l)
W_D4_LAST[5 - np.arange(5)] += W_TIP_EXTEND           # ghost = W_TIP_EXTEND @ [f(l) .. f(l-4h)]


@dataclass(frozen=True)
class BeamDerivatives:
    """Spatial derivatives of a deflection field under the arm boundary conditions."""

    d2_at_root: float
    d2_profile: np.ndarray   # curvature at every node, root..tip
    d3_at_tip: float
    d4_interior: np.ndarray  # fourth derivative at the interior nodes


def _check_field(field: np.ndarray, grid: BeamGrid) -> np.ndarray:
    field = np.asarray(field, dtype=float)
    if field.shape != (grid.n_nodes,):
        raise ValueError(f"field must have {grid.n_nodes} nodes, got {field.shape}")
    return field


def spatial_derivatives(
    field: np.ndarray, grid: BeamGrid, root_slope: float = 0.0, tip_value: float | None = None
) -> BeamDerivatives:
    """Evaluate d2/d3/d4 of a root-clamped field.

    `root_slope` is the known slope at x=0 (zero for all physical fields here);
    `tip_value`, when given, overrides the stored tip node (constraint-slaved).
    """
    f = _check_field(field, grid).copy()
    if tip_value is not None:
        f[-1] = tip_value
    h = grid.dx
    n = grid.n_interior

    d2_root = (W_D2_ROOT[0] * f[0] + W_D2_ROOT[1] * f[1] + W_D2_ROOT[2] * f[2]
               + W_D2_ROOT[3] * root_slope * h) / h**2

    d2 = np.empty(n + 2)
    d2[0] = d2_root
    d2[1:-1] = (f[:-2] - 2.0 * f[1:-1] + f[2:]) / h**2
    d2[-1] = (W_D2_TIP @ f[-1:-5:-1]) / h**2

    d3_tip = (W_D3_TIP @ f[-1:-6:-1]) / h**3

    d4 = np.empty(n)
    d4[0] = (W_D4_FIRST[:5] @ f[0:5] + W_D4_FIRST[5] * root_slope * h) / h**4
    d4[1:-1] = (f[0:n - 2] - 4.0 * f[1:n - 1] + 6.0 * f[2:n] - 4.0 * f[3:n + 1] + f[4:n + 2]) / h**4
    d4[-1] = (W_D4_LAST @ f[n - 4:n + 2]) / h**4

    return BeamDerivatives(d2_at_root=d2_root, d2_profile=d2, d3_at_tip=d3_tip, d4_interior=d4)


def velocity_third_derivative_at_tip(vel_field: np.ndarray, grid: BeamGrid) -> float:
    """Third spatial derivative of the velocity field at the tip.

    Spatial and temporal differentiation commute on the semi-discrete state.
    Rate fields are read with the smoothing window row rather than the compact
    stencil (see smooth_tip_third_derivative_weights); both are exact on cubic
    fields and second-order consistent.
    """
    f = _check_field(vel_field, grid)
    k = min(SMOOTH_TIP_WINDOW, grid.n_interior)
    row = (W_D3_TIP_SMOOTH if k == SMOOTH_TIP_WINDOW
           else smooth_tip_third_derivative_weights(k))
    return float((row @ f[-2:-2 - k:-1]) / grid.dx**3)


def synthesize_ghosts(field: np.ndarray, grid: BeamGrid, root_slope: float = 0.0):
    """Ghost values implied by the boundary conditions.

    Root ghost enforces the clamped slope through the central first-difference;
    tip ghost enforces the moment-free tip through the central second-difference.
    """
    f = _check_field(field, grid)
    h = grid.dx
    root_ghost = f[1] - 2.0 * h * root_slope
    tip_ghost = 2.0 * f[-1] - f[-2]
    return float(root_ghost), float(tip_ghost)
