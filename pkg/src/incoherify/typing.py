"""
Array type aliases for pydantic fields holding numpy data (`FeatureVector`, `LinearModel`).
Backed by `numpydantic.NDArray` at runtime; static type checkers see plain `np.ndarray`.
"""

from typing import TYPE_CHECKING, Annotated

import numpy as np
from numpydantic import NDArray, Shape

__all__ = ["FloatVec", "IndexVec"]

if TYPE_CHECKING:
    type FloatVec = np.ndarray
    """1-D float64 array."""

    type IndexVec = np.ndarray
    """1-D int64 array of bucket indices."""
else:
    FloatVec = Annotated[NDArray[Shape["*"], np.float64], ...]  # type: ignore  # noqa: F722
    IndexVec = Annotated[NDArray[Shape["*"], np.int64], ...]  # type: ignore  # noqa: F722
