"""Exact verification of chain-level constructions over discrete valuation rings.

The arithmetic backend (python-flint or pure Python) is chosen at import,
see :mod:`gersten_lab._backend`.
"""

from gersten_lab._backend import NAME as BACKEND
from gersten_lab.category import CMorphism, CObject, classify, compose
from gersten_lab.chain import ChainComplex, ChainHomotopy, ChainMap
from gersten_lab.matrix import Matrix
from gersten_lab.rings import make_ring

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CMorphism",
    "CObject",
    "ChainComplex",
    "ChainHomotopy",
    "ChainMap",
    "Matrix",
    "classify",
    "compose",
    "make_ring",
    "__version__",
]
