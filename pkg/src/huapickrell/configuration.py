"""Finite point configurations on the punctured real line."""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PointConfiguration:
    """Sorted finite multiset of nonzero reals."""

    points: tuple = ()

    def __post_init__(self):
        pts = np.sort(np.asarray(self.points, dtype=float).ravel())
        if np.any(pts == 0.0):
            raise DomainError("configurations live on nonzero reals")
        if not np.all(np.isfinite(pts)):
            raise DomainError("configuration points must be finite")
        object.__setattr__(self, "points", tuple(float(v) for v in pts))

    def __len__(self):
        return len(self.points)

    def as_array(self):
        return np.array(self.points, dtype=float)
