"""Gram matrices <f_j, C g_k> of weighted node clouds against a kernel.

Every measurement in the package reduces to a weighted node cloud, so all
covariance blocks go through the routines here. Nodes shared between members
(for example tensor grids of one basis) are merged first, and the cloud
weights become sparse selection matrices S, so that a block is S_a^T K S_b
with K evaluated only on unique nodes.
"""

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from distfree.config.settings import get_settings
from distfree.quadrature import QuadratureCloud

logger = logging.getLogger(__name__)

KernelMatrix = Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.float64]]

# Offsets are matched after rounding to this many decimals
_OFFSET_DECIMALS = 12


def merge_nodes(
    clouds: Sequence[QuadratureCloud],
) -> tuple[NDArray[np.float64], sparse.csr_array]:
    """Merge the clouds' nodes into unique points and a weight selection matrix.

    Returns:
        Tuple of (unique points, S) where S[u, j] is the total weight that
        member j puts on unique point u
    """
    dim = clouds[0].dim if clouds else 1
    sizes = [c.size for c in clouds]
    if sum(sizes) == 0:
        empty = np.zeros((0,) if dim == 1 else (0, dim))
        return empty, sparse.csr_array((0, len(clouds)))
    points = np.concatenate([c.points for c in clouds if c.size])
    weights = np.concatenate([c.weights for c in clouds if c.size])
    member = np.repeat(np.arange(len(clouds)), sizes)
    if dim == 1:
        unique, inverse = np.unique(points, return_inverse=True)
    else:
        unique, inverse = np.unique(points, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    selection = sparse.coo_array(
        (weights, (inverse, member)), shape=(unique.shape[0], len(clouds))
    ).tocsr()
    return unique, selection


def cross_gram(
    clouds_a: Sequence[QuadratureCloud],
    clouds_b: Sequence[QuadratureCloud],
    kernel_matrix: KernelMatrix,
    symmetric: bool = False,
) -> NDArray[np.float64]:
    """Assemble G[j, k] = sum_x sum_y a_j(x) K(x, y) b_k(y).

    Rows of unique nodes of ``clouds_a`` are processed in chunks on a thread
    pool; chunk results are summed in submission order so the output does not
    depend on scheduling.

    Args:
        clouds_a: Weighted clouds of the left members
        clouds_b: Weighted clouds of the right members
        kernel_matrix: Callable returning K(x_i, y_j) for point arrays
        symmetric: Symmetrize the result (same member list on both sides)

    Returns:
        Dense matrix of shape (len(clouds_a), len(clouds_b))
    """
    points_a, select_a = merge_nodes(clouds_a)
    points_b, select_b = merge_nodes(clouds_b)
    return node_gram(points_a, select_a, points_b, select_b, kernel_matrix, symmetric)


def node_gram(
    points_a: NDArray[np.float64],
    select_a: sparse.csr_array | NDArray[np.float64],
    points_b: NDArray[np.float64],
    select_b: sparse.csr_array | NDArray[np.float64],
    kernel_matrix: KernelMatrix,
    symmetric: bool = False,
) -> NDArray[np.float64]:
    """Contract S_a^T K S_b for node sets with sparse or dense weight matrices.

    Members sharing one node grid (such as a basis on a common tensor grid)
    pass their dense (nodes x members) weight matrix directly.
    """
    settings = get_settings()
    result = np.zeros((select_a.shape[1], select_b.shape[1]))
    if points_a.shape[0] == 0 or points_b.shape[0] == 0:
        return result

    rows = max(1, settings.assembly_chunk_entries // points_b.shape[0])
    bounds = [(lo, min(lo + rows, points_a.shape[0])) for lo in range(0, points_a.shape[0], rows)]
    select_b_t = select_b.T.tocsr() if sparse.issparse(select_b) else np.ascontiguousarray(select_b.T)

    def block(span: tuple[int, int]) -> NDArray[np.float64]:
        lo, hi = span
        k = kernel_matrix(points_a[lo:hi], points_b)
        weighted = (select_b_t @ k.T).T
        return select_a[lo:hi].T @ weighted

    logger.debug(
        f"Gram {result.shape[0]}x{result.shape[1]}: {points_a.shape[0]}x{points_b.shape[0]} "
        f"unique nodes in {len(bounds)} chunks"
    )
    if settings.assembly_workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=settings.assembly_workers) as pool:
            for part in pool.map(block, bounds):
                result += part
    else:
        for span in bounds:
            result += block(span)

    if symmetric:
        result = 0.5 * (result + result.T)
    return result


def separable_gram(
    axis_clouds_a: Sequence[tuple[QuadratureCloud, QuadratureCloud]],
    axis_clouds_b: Sequence[tuple[QuadratureCloud, QuadratureCloud]],
    axis_factor: KernelMatrix,
    variance: float,
    symmetric: bool = False,
) -> NDArray[np.float64]:
    """Gram matrix for a product kernel and product test functions.

    With c(r) = variance * k(r_x) k(r_y) and f(x, y) = f_x(x) f_y(y), the 2-D
    Gram matrix is variance times the entrywise product of two 1-D ones.
    """
    gram_x = cross_gram([c[0] for c in axis_clouds_a], [c[0] for c in axis_clouds_b], axis_factor)
    gram_y = cross_gram([c[1] for c in axis_clouds_a], [c[1] for c in axis_clouds_b], axis_factor)
    result = variance * gram_x * gram_y
    if symmetric:
        result = 0.5 * (result + result.T)
    return result


def translated_gram(
    clouds: Sequence[QuadratureCloud],
    keys: Sequence[tuple[str, tuple[float, ...]]],
    kernel_matrix: KernelMatrix,
) -> NDArray[np.float64]:
    """Symmetric Gram matrix of members that are translates of a few shapes.

    For a stationary kernel the entry of two translates depends only on their
    shapes and the offset between their anchors, so each distinct
    (shape, shape, offset) triple is integrated once.

    Args:
        clouds: Weighted clouds of the members
        keys: (shape key, anchor point) per member
        kernel_matrix: Callable returning K(x_i, y_j) for point arrays

    Returns:
        Symmetric dense matrix of shape (len(clouds), len(clouds))
    """
    n = len(clouds)
    anchors = np.array([anchor for _, anchor in keys], dtype=np.float64)
    result = np.zeros((n, n))
    cache: dict[tuple, float] = {}
    for j in range(n):
        shape_j = keys[j][0]
        offsets = np.round(anchors[j:] - anchors[j], _OFFSET_DECIMALS)
        for k in range(j, n):
            key = (shape_j, keys[k][0], tuple(offsets[k - j]))
            value = cache.get(key)
            if value is None:
                a, b = clouds[j], clouds[k]
                value = 0.0
                if a.size and b.size:
                    value = float(a.weights @ kernel_matrix(a.points, b.points) @ b.weights)
                cache[key] = value
            result[j, k] = value
            result[k, j] = value
    logger.debug(f"Translated Gram {n}x{n}: {len(cache)} distinct entries integrated")
    return result
