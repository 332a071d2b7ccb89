"""Decorated graph complexes, effective actions and Hodge correlator numerics."""
from hodgecorr._kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
