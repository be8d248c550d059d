"""Tensor trigonometric basis, L2-orthonormal on a rectangular window."""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from distfree.errors import InternalConsistencyError, InvalidArgumentError
from distfree.kernels import CovarianceKernel, merge_nodes
from distfree.measurement import MeasurementSet, TestFunction
from distfree.quadrature import MAX_ORDER, Box, QuadratureCloud, QuadratureRule1D, composite_rule

logger = logging.getLogger(__name__)

# Largest tolerated deviation of the quadrature Gram matrix from the identity
ORTHONORMALITY_TOL = 1e-10

# Relative kernel level at the rim of a padded comparator window
KERNEL_TAIL = 1e-4


def trig_factor(index: int, lo: float, length: float) -> Callable[[NDArray[np.float64]], NDArray[np.float64]]:
    """One-dimensional orthonormal mode on [lo, lo + length].

    index 0 is the constant; index 2q - 1 is the cosine and 2q the sine of
    frequency q (periods per window).
    """
    if index == 0:
        value = 1.0 / math.sqrt(length)
        return lambda t: np.full(np.shape(t), value)
    frequency = (index + 1) // 2
    scale = math.sqrt(2.0 / length)
    omega = 2.0 * math.pi * frequency / length
    if index % 2:
        return lambda t: scale * np.cos(omega * (np.asarray(t) - lo))
    return lambda t: scale * np.sin(omega * (np.asarray(t) - lo))


def basis_rule(n_per_axis: int) -> QuadratureRule1D:
    """Composite Gauss rule resolving products of modes up to n_per_axis."""
    order = min(max(2 * n_per_axis + 4, 16), MAX_ORDER)
    return composite_rule(order, max(2 * n_per_axis + 1, 8))


def padded_window(window: Box, kernel: CovarianceKernel, tail: float = KERNEL_TAIL) -> Box:
    """Window grown by the kernel reach so C g is negligible on its rim.

    Modes are periodic on their window; for g supported in ``window`` the
    image C g only has a rapidly converging expansion once it has decayed
    to tail * variance before the boundary.
    """
    if not 0.0 < tail < 1.0:
        raise InvalidArgumentError(f"kernel tail must lie in (0, 1), got {tail}")
    return window.expanded(kernel.reach(tail))


@dataclass(frozen=True, eq=False)
class TruncationBasis:
    """Tensor modes phi_(p, q)(x, y) = u_p(x) v_q(y), p and q in 0..2n."""

    members: tuple[TestFunction, ...]
    truncation_level: int
    window: Box
    indices: tuple[tuple[int, int], ...]
    orthonormality_error: float

    @property
    def size(self) -> int:
        return len(self.members)

    def as_measurement_set(self) -> MeasurementSet:
        return MeasurementSet.of(self.members)

    def values(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """Mode values at points, shape (q, size)."""
        points = np.asarray(points, dtype=np.float64)
        x_lo, y_lo = self.window.x_lo, self.window.y_lo
        lx, ly = self.window.x_hi - x_lo, self.window.y_hi - y_lo
        modes = 2 * self.truncation_level + 1
        ux = np.column_stack([trig_factor(p, x_lo, lx)(points[:, 0]) for p in range(modes)])
        vy = np.column_stack([trig_factor(q, y_lo, ly)(points[:, 1]) for q in range(modes)])
        # member (p, q) sits at column p * modes + q
        return (ux[:, :, None] * vy[:, None, :]).reshape(points.shape[0], modes * modes)

    def coefficients(self, clouds: list[QuadratureCloud]) -> NDArray[np.float64]:
        """Projection coefficients <phi_l, g_k> of weighted clouds, shape (size, len(clouds))."""
        points, selection = merge_nodes(clouds)
        if points.shape[0] == 0:
            return np.zeros((self.size, len(clouds)))
        inside = self.window.contains(points).astype(np.float64)
        values = self.values(points) * inside[:, None]
        return np.asarray(selection.T @ values).T

    def project(self, coefficients: NDArray[np.float64], source: "TruncationBasis") -> NDArray[np.float64]:
        """Apply P^n to expansions over a finer nested basis.

        Coefficients are laid out as in ``source``; modes above this level are
        zeroed, so projecting twice equals projecting once.

        Raises:
            InvalidArgumentError: If ``source`` is coarser than this basis
        """
        if source.truncation_level < self.truncation_level:
            raise InvalidArgumentError(
                f"cannot project level {source.truncation_level} coefficients onto level "
                f"{self.truncation_level}"
            )
        limit = 2 * self.truncation_level
        keep = np.array([p <= limit and q <= limit for p, q in source.indices])
        coefficients = np.asarray(coefficients, dtype=np.float64)
        mask = keep.reshape((-1,) + (1,) * (coefficients.ndim - 1))
        return np.where(mask, coefficients, 0.0)


def build_basis(n_per_axis: int, window: Box | None = None) -> TruncationBasis:
    """Build the (2n + 1)^2 tensor trigonometric modes on a window.

    Orthonormality is verified with a composite Gauss rule of order
    2n + 4 (at least 16) per panel.

    Raises:
        InvalidArgumentError: If n_per_axis < 0
        InternalConsistencyError: If the quadrature Gram matrix is not the identity
    """
    if n_per_axis < 0:
        raise InvalidArgumentError(f"truncation level must be >= 0, got {n_per_axis}")
    window = window or Box(0.0, 1.0, 0.0, 1.0)
    rule = basis_rule(n_per_axis)
    x_lo, y_lo = window.x_lo, window.y_lo
    lx, ly = window.x_hi - x_lo, window.y_hi - y_lo
    modes = 2 * n_per_axis + 1

    members = []
    indices = []
    for p in range(modes):
        for q in range(modes):
            fx, fy = trig_factor(p, x_lo, lx), trig_factor(q, y_lo, ly)
            members.append(
                TestFunction(
                    evaluator=lambda pts, fx=fx, fy=fy: fx(pts[..., 0]) * fy(pts[..., 1]),
                    support=window,
                    label=f"trig({p},{q})",
                    factors=(fx, fy),
                    rule=rule,
                )
            )
            indices.append((p, q))

    # Gram of the 1-D factors; the 2-D Gram is their Kronecker product
    x, wx = rule.mapped(x_lo, x_lo + lx)
    y, wy = rule.mapped(y_lo, y_lo + ly)
    ux = np.column_stack([trig_factor(p, x_lo, lx)(x) for p in range(modes)])
    vy = np.column_stack([trig_factor(q, y_lo, ly)(y) for q in range(modes)])
    gram = np.kron(ux.T @ (wx[:, None] * ux), vy.T @ (wy[:, None] * vy))
    error = float(np.abs(gram - np.eye(modes * modes)).max())
    if error > ORTHONORMALITY_TOL:
        raise InternalConsistencyError(
            f"trigonometric basis at level {n_per_axis} is not orthonormal (error {error:.3g})"
        )
    logger.debug(f"Trigonometric basis level {n_per_axis}: {len(members)} modes, error {error:.2g}")
    return TruncationBasis(
        members=tuple(members),
        truncation_level=n_per_axis,
        window=window,
        indices=tuple(indices),
        orthonormality_error=error,
    )
