"""Pseudo-Jacobi ensembles, the confluent hypergeometric limit kernel and
Hua-Pickrell random matrices."""
from . import errors
from ._backend import NAME as BACKEND

__version__ = "0.1.0"

__all__ = ["errors", "BACKEND", "__version__"]
