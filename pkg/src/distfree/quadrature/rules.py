"""Gauss-Legendre rules on [-1, 1]."""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from distfree.errors import InvalidArgumentError

MAX_ORDER = 64

# Newton stops once every node moves less than this
NEWTON_TOLERANCE = 1e-15
NEWTON_MAX_ITERATIONS = 100


@dataclass(frozen=True, eq=False)
class QuadratureRule1D:
    """Nodes and weights of a (possibly composite) Gauss-Legendre rule on [-1, 1].

    A composite rule splits [-1, 1] into ``panels`` equal sub-intervals and
    places ``order`` nodes in each.
    """

    nodes: NDArray[np.float64]
    weights: NDArray[np.float64]
    order: int
    panels: int = 1

    def __post_init__(self) -> None:
        if len(self.nodes) != len(self.weights) or len(self.nodes) != self.order * self.panels:
            raise InvalidArgumentError(
                f"rule of order {self.order} x {self.panels} panels has "
                f"{len(self.nodes)} nodes and {len(self.weights)} weights"
            )
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def size(self) -> int:
        """Total number of nodes."""
        return len(self.nodes)

    @property
    def degree(self) -> int:
        """Polynomial degree integrated exactly on each panel."""
        return 2 * self.order - 1

    def mapped(self, a: float, b: float) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Affinely map the rule onto [a, b].

        Returns:
            Tuple of (nodes, weights) on [a, b]
        """
        half = 0.5 * (b - a)
        return 0.5 * (a + b) + half * self.nodes, half * self.weights


def _legendre_with_derivative(
    order: int, x: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Evaluate P_order and its derivative by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for j in range(2, order + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    derivative = order * (x * p - p_prev) / (x * x - 1.0)
    return p, derivative


@lru_cache(maxsize=None)
def gauss_rule(order: int) -> QuadratureRule1D:
    """Return the ``order``-point Gauss-Legendre rule.

    Nodes are the roots of the Legendre polynomial, found by Newton iteration
    from Chebyshev-like initial guesses; the rule integrates polynomials up to
    degree ``2 * order - 1`` exactly.

    Args:
        order: Number of nodes, 1 <= order <= 64

    Returns:
        Immutable QuadratureRule1D with strictly increasing nodes

    Raises:
        InvalidArgumentError: If order is out of range
    """
    if isinstance(order, bool) or not isinstance(order, int | np.integer):
        raise InvalidArgumentError(f"quadrature order must be an integer, got {order!r}")
    if not 1 <= order <= MAX_ORDER:
        raise InvalidArgumentError(f"quadrature order must lie in [1, {MAX_ORDER}], got {order}")
    order = int(order)

    k = np.arange(1, order + 1, dtype=np.float64)
    x = np.cos(np.pi * (k - 0.25) / (order + 0.5))
    for _ in range(NEWTON_MAX_ITERATIONS):
        p, dp = _legendre_with_derivative(order, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) <= NEWTON_TOLERANCE:
            break
    _, dp = _legendre_with_derivative(order, x)
    weights = 2.0 / ((1.0 - x * x) * dp * dp)

    # Ascending order, symmetric to the last bit
    x = x[::-1]
    weights = weights[::-1]
    x = 0.5 * (x - x[::-1])
    weights = 0.5 * (weights + weights[::-1])
    weights = weights * (2.0 / math.fsum(weights))

    return QuadratureRule1D(nodes=np.ascontiguousarray(x), weights=np.ascontiguousarray(weights), order=order)


@lru_cache(maxsize=None)
def composite_rule(order: int, panels: int) -> QuadratureRule1D:
    """Return ``order``-point Gauss-Legendre copies on ``panels`` equal panels of [-1, 1].

    Raises:
        InvalidArgumentError: If order or panels is out of range
    """
    if panels < 1:
        raise InvalidArgumentError(f"panel count must be >= 1, got {panels}")
    base = gauss_rule(order)
    if panels == 1:
        return base
    edges = np.linspace(-1.0, 1.0, panels + 1)
    nodes = []
    weights = []
    for lo, hi in zip(edges[:-1], edges[1:], strict=True):
        x, w = base.mapped(lo, hi)
        nodes.append(x)
        weights.append(w)
    return QuadratureRule1D(
        nodes=np.concatenate(nodes),
        weights=np.concatenate(weights),
        order=base.order,
        panels=panels,
    )
