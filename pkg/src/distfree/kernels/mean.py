"""Prior mean function of the unknown."""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


def _zero(points: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.zeros(points.shape[0])


@dataclass(frozen=True, eq=False)
class MeanFunction:
    """Classical prior mean mu_X on the imaging window (zero by default).

    The posterior is computed for X - mu_X: data are shifted by <A psi_k, mu_X>
    and <phi_j, mu_X> is added back to the posterior mean.
    """

    function: Callable[[NDArray[np.float64]], NDArray[np.float64]] = _zero
    is_zero: bool = True

    @classmethod
    def of(cls, function: Callable[[NDArray[np.float64]], NDArray[np.float64]]) -> "MeanFunction":
        return cls(function=function, is_zero=False)

    def __call__(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.asarray(self.function(points), dtype=np.float64)
