"""Arithmetic backend, chosen once at import.

The compiled backend uses python-flint (``fmpq`` and ``fmpq_poly``).  The
fallback is pure Python (``fractions.Fraction`` and :class:`QPoly`).  Set
``GERSTEN_LAB_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction

from gersten_lab._qpoly import QPoly

_requested = os.environ.get("GERSTEN_LAB_BACKEND", "auto").lower()

if _requested not in {"auto", "flint", "python"}:
    raise ImportError(f"unknown GERSTEN_LAB_BACKEND {_requested!r}")

NAME = "python"
Q = Fraction
Poly = QPoly

if _requested != "python":
    try:
        import flint
    except ImportError:
        if _requested == "flint":
            raise
    else:
        NAME = "flint"
        Q = flint.fmpq
        Poly = flint.fmpq_poly


def numerator(q) -> int:
    return int(q.numerator) if isinstance(q, Fraction) else int(q.p)


def denominator(q) -> int:
    return int(q.denominator) if isinstance(q, Fraction) else int(q.q)

