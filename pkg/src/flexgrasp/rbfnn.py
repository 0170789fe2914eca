"""Gaussian radial-basis-function networks for online uncertainty estimation.

Linear-in-weights approximators with fixed centers and widths. Weights adapt
through sliding-surface-driven rates with a leakage term that keeps the
estimates bounded without persistent excitation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["RbfNetwork", "basis", "evaluate", "weight_rate", "make_network"]


@dataclass
class RbfNetwork:
    centers: np.ndarray           # (n_neurons, dim)
    widths: np.ndarray            # (n_neurons,), > 0
    weights: np.ndarray = field(default=None)  # (n_neurons,)

    def __post_init__(self):
        self.centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        self.widths = np.asarray(self.widths, dtype=float)
        if self.weights is None:
            self.weights = np.zeros(self.centers.shape[0])
        self.weights = np.asarray(self.weights, dtype=float)
        if self.widths.shape != (self.centers.shape[0],):
            raise ValueError("one width per neuron required")
        if self.weights.shape != (self.centers.shape[0],):
            raise ValueError("one weight per neuron required")
        if np.any(self.widths <= 0.0):
            raise ValueError("widths must be positive")
        if not np.all(np.isfinite(self.centers)):
            raise ValueError("centers must be finite")

    @property
    def n_neurons(self) -> int:
        return self.centers.shape[0]

    @property
    def dim(self) -> int:
        return self.centers.shape[1]


def basis(net: RbfNetwork, x: np.ndarray) -> np.ndarray:
    """Gaussian activations exp(-||x - c_j||^2 / (2 width_j^2))."""
    x = np.asarray(x, dtype=float)
    if x.shape != (net.dim,):
        raise ValueError(f"input dimension {x.shape} does not match centers ({net.dim},)")
    d2 = np.sum((net.centers - x) ** 2, axis=1)
    return np.exp(-d2 / (2.0 * net.widths**2))


def evaluate(net: RbfNetwork, x: np.ndarray) -> float:
    """Network output: inner product of the weights with the basis vector."""
    return float(net.weights @ basis(net, x))


def weight_rate(net: RbfNetwork, s: float, a_gain: float, sigma: float, x: np.ndarray) -> np.ndarray:
    """Adaptive weight rate a*s*basis(x) - a*sigma*W for the current weights."""
    if a_gain <= 0.0 or sigma <= 0.0:
        raise ValueError("adaptation gain and leakage must be positive")
    return a_gain * s * basis(net, x) - a_gain * sigma * net.weights


def make_network(dim: int, n_neurons: int, seed: int, width_scale: float = 2.0) -> RbfNetwork:
    """Seeded network over the unit box [-1, 1]^dim.

    Centers are drawn uniformly; the common width is width_scale times the
    average nearest-center spacing, so coverage adapts to the neuron count.
    Callers normalize physical inputs onto the box before evaluation.
    """
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-1.0, 1.0, size=(n_neurons, dim))
    d2 = np.sum((centers[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    np.fill_diagonal(d2, np.inf)
    width = width_scale * float(np.sqrt(d2.min(axis=1)).mean())
    widths = np.full(n_neurons, width)
    return RbfNetwork(centers=centers, widths=widths)
